"""Section spaces E_w, their linear strata, and the curve counters.

A curve of class alpha is a pair (s, t) of nowhere-vanishing pairs of binary forms of degrees
(a, a') whose incidence divisors gcd(phi_{i,1}(s), phi_{i,2}(t)) have degrees k_i; the set of such
pairs is a G_m^2-torsor over the curve space.  Coordinates of a pair are laid out as
(s_1, s_2, t_1, t_2), each block holding the coefficients of a binary form.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import posetq as P
from .ffpoly import (
    ClosedPoint,
    ConfigurationError,
    Divisor,
    PointConfig,
    PreconditionError,
    _remainder_rows_cached,
    default_config,
    divisibility_rows,
    enumerate_Uk,
    field,
    nullspace,
    points_up_to,
    rank,
)
from .picard import InvalidClassError, PicClass, class_invariants

NAIVE_BUDGET = 2**30
FIBER_BUDGET = 2**26
W_BUDGET = 2**20
LATTICE_CAP = 20_000
_ZERO_ORDER = 127  # order of vanishing recorded for the zero form


class ResourceCapError(RuntimeError):
    """A counter would exceed its enumeration budget."""


class InvalidSurfaceError(ConfigurationError):
    """No split degree-4 surface model exists over the requested field."""


def _config(q: int, cfg: PointConfig | None) -> PointConfig:
    if cfg is not None:
        return cfg
    if q < 3:
        raise InvalidSurfaceError(f"the surface model needs q >= 3 (got q={q})")
    return default_config(q)


# -- incidence systems ----------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _side_orders(chain: P.Chain) -> tuple[int, int, tuple[int, ...]]:
    """(g(V1), g(V2), (g(L_1)..g(L_4))): the multiplicities that determine the conditions."""
    return (chain.multiplicity(P.V1), chain.multiplicity(P.V2),
            tuple(chain.multiplicity(P.L(i)) for i in range(4)))


def _side_rows(n: int, pt: ClosedPoint, zero_order: int, line_orders: Sequence[int],
               cfg: PointConfig, side: int) -> list[np.ndarray]:
    rows = []
    if zero_order:
        rows.append(divisibility_rows(n, (1, 0), pt, zero_order))
        rows.append(divisibility_rows(n, (0, 1), pt, zero_order))
    for i, m in enumerate(line_orders):
        if m > zero_order:
            rows.append(divisibility_rows(n, cfg.functional(i, side), pt, m))
    return rows


@dataclass(frozen=True)
class IncidenceSystem:
    a: int
    aprime: int
    x: P.SaturatedElement
    s_rows: np.ndarray  # constraints on (s_1, s_2)
    t_rows: np.ndarray  # constraints on (t_1, t_2)
    q: int

    @property
    def ncols(self) -> int:
        return 2 * (self.a + 1) + 2 * (self.aprime + 1)

    @property
    def rows(self) -> np.ndarray:
        ns, nt = 2 * (self.a + 1), 2 * (self.aprime + 1)
        top = np.hstack([self.s_rows, np.zeros((len(self.s_rows), nt), dtype=np.int64)])
        bot = np.hstack([np.zeros((len(self.t_rows), ns), dtype=np.int64), self.t_rows])
        return np.vstack([top, bot])

    def s_kernel(self) -> np.ndarray:
        return nullspace(self.s_rows, 2 * (self.a + 1), field(self.q))

    def t_kernel(self) -> np.ndarray:
        return nullspace(self.t_rows, 2 * (self.aprime + 1), field(self.q))

    def kernel(self) -> np.ndarray:
        return nullspace(self.rows, self.ncols, field(self.q))

    @property
    def dim(self) -> int:
        F = field(self.q)
        return self.ncols - rank(self.s_rows, F) - rank(self.t_rows, F)


def incidence_system(a: int, aprime: int, x: P.SaturatedElement, q: int,
                     cfg: PointConfig | None = None) -> IncidenceSystem:
    """Linear conditions for (s, t)(x_c) to lie in each subspace of Q to the multiplicity x prescribes."""
    cfg = _config(q, cfg)
    s_rows: list[np.ndarray] = []
    t_rows: list[np.ndarray] = []
    for pt, chain in x.items:
        gv1, gv2, gl = _side_orders(chain)
        # V2 = 0 + V2 forces s to vanish; V1 forces t to vanish
        s_rows += _side_rows(a, pt, gv2, gl, cfg, 1)
        t_rows += _side_rows(aprime, pt, gv1, gl, cfg, 2)

    def stack(rows, n):
        return np.vstack(rows) if rows else np.zeros((0, 2 * (n + 1)), dtype=np.int64)

    return IncidenceSystem(a, aprime, x, stack(s_rows, a), stack(t_rows, aprime), q)


@dataclass(frozen=True)
class StratumDim:
    actual: int
    expected: int
    unobstructed: bool
    n_constant: int | None


def stratum_dim(a: int, aprime: int, x: P.SaturatedElement, q: int, k: Sequence[int] | None = None,
                cfg: PointConfig | None = None) -> StratumDim:
    sysm = incidence_system(a, aprime, x, q, cfg)
    actual = sysm.dim
    expected = max(sysm.ncols - x.gamma, 0)
    if actual < expected:
        raise AssertionError(f"stratum of {x} has dimension {actual} below the expected {expected}")
    n = None if k is None else 2 * a + 2 * aprime + 4 - 2 * sum(k) - x.gamma
    return StratumDim(actual, expected, actual == expected, n)


# -- reports --------------------------------------------------------------------

def upper_bound(q: int, h: int) -> float:
    return (1 - 1 / q) ** -6 * q ** (h + 2)


@dataclass
class CountReport:
    q: int
    a: int
    aprime: int
    k: tuple[int, ...]
    h: int
    method: str
    torsor_count: int
    curve_count: int
    seconds: float
    caps: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.torsor_count % (self.q - 1) ** 2:
            raise AssertionError("torsor count is not divisible by (q-1)^2")
        if self.curve_count > upper_bound(self.q, self.h):
            raise AssertionError(f"count {self.curve_count} exceeds the upper bound")

    @property
    def class_text(self) -> str:
        return ",".join(str(v) for v in (self.a, self.aprime) + tuple(self.k))

    def to_dict(self) -> dict:
        return {"q": self.q, "class": self.class_text, "method": self.method,
                "torsor_count": self.torsor_count, "curve_count": self.curve_count,
                "seconds": round(self.seconds, 6), "caps": self.caps}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self, predicted: float | None = None) -> list:
        ratio = None if not predicted else self.curve_count / predicted
        return [self.q, self.a, self.aprime, *self.k, self.h, self.method, self.torsor_count,
                self.curve_count, predicted, ratio, round(self.seconds, 6)]


CSV_COLUMNS = ["q", "a", "aprime", "k1", "k2", "k3", "k4", "h", "method", "torsor_count",
               "curve_count", "predicted", "ratio", "seconds"]


def reports_to_csv(rows: Iterable[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(["" if v is None else v for v in r])
    return buf.getvalue()


def _invariants(alpha: PicClass):
    inv = class_invariants(alpha)
    return inv.h, inv.a, inv.aprime, tuple(inv.k)


# -- vectorized form tables -------------------------------------------------------

def _all_forms(q: int, n: int) -> np.ndarray:
    """All q^(n+1) coefficient vectors, row r holding the base-q digits of r."""
    idx = np.arange(q ** (n + 1), dtype=np.int64)
    return np.stack([(idx // q**j) % q for j in range(n + 1)], axis=1)


def _encode(coeffs: np.ndarray, q: int) -> np.ndarray:
    return coeffs @ (q ** np.arange(coeffs.shape[1], dtype=np.int64))


def _order_table(q: int, n: int, pts: Sequence[ClosedPoint], forms: np.ndarray | None = None) -> np.ndarray:
    """E[f, c] = order of vanishing of form f at point c (capped at n // deg c, zero form -> 127)."""
    F = field(q)
    forms = _all_forms(q, n) if forms is None else forms
    E = np.zeros((len(forms), len(pts)), dtype=np.int16)
    for j, pt in enumerate(pts):
        for m in range(1, n // pt.degree + 1):
            R = _remainder_rows_cached(n, pt, m)
            div = ~F.matmul(forms, R.T).any(axis=1)
            E[div, j] = m
    E[~forms.any(axis=1)] = _ZERO_ORDER
    return E


def _gcd_degree_table(q: int, a: int, aprime: int) -> np.ndarray:
    """G[f, g] = deg gcd(f, g) for forms of degrees (a, a'); -1 when both vanish identically."""
    pts = points_up_to(q, max(a, aprime, 1))
    EA, EB = _order_table(q, a, pts), _order_table(q, aprime, pts)
    deg = np.array([p.degree for p in pts], dtype=np.int32)
    G = np.zeros((len(EA), len(EB)), dtype=np.int32)
    for j in range(len(pts)):
        G += deg[j] * np.minimum(EA[:, j][:, None], EB[:, j][None, :]).astype(np.int32)
    G[0, 0] = -1
    return G


def _projective_nowhere_vanishing(q: int, n: int) -> np.ndarray:
    """Representatives (first nonzero coordinate 1) of nowhere-vanishing pairs of degree-n forms."""
    forms = _all_forms(q, n)
    G = _gcd_degree_table(q, n, n) if n else None
    codes = np.arange(len(forms))
    i1, i2 = np.meshgrid(codes, codes, indexing="ij")
    i1, i2 = i1.ravel(), i2.ravel()
    ok = (G[i1, i2] == 0) if n else ((i1 > 0) | (i2 > 0))
    pairs = np.hstack([forms[i1[ok]], forms[i2[ok]]])
    nz = pairs != 0
    first = nz.argmax(axis=1)
    lead = pairs[np.arange(len(pairs)), first]
    return pairs[lead == 1]


def _phi_codes(pairs: np.ndarray, n: int, cfg: PointConfig, side: int) -> np.ndarray:
    """Codes of phi_{i,side}(pair) for i = 0..3; shape (len(pairs), 4)."""
    F = field(cfg.q)
    out = np.zeros((len(pairs), 4), dtype=np.int64)
    for i in range(4):
        l1, l2 = cfg.functional(i, side)
        comb = F.vadd(F.vmul(np.full_like(pairs[:, : n + 1], l1), pairs[:, : n + 1]),
                      F.vmul(np.full_like(pairs[:, n + 1:], l2), pairs[:, n + 1:]))
        out[:, i] = _encode(comb, cfg.q)
    return out


# -- naive counter ----------------------------------------------------------------

def _naive_chunk(args) -> int:
    q, a, aprime, k, cfg, lo, hi = args
    S = _projective_nowhere_vanishing(q, a)[lo:hi]
    T = _projective_nowhere_vanishing(q, aprime)
    G = _gcd_degree_table(q, a, aprime)
    A = _phi_codes(S, a, cfg, 1)
    B = _phi_codes(T, aprime, cfg, 2)
    total = 0
    step = max(1, 2**22 // max(len(T), 1))
    for s0 in range(0, len(A), step):
        blk = A[s0:s0 + step]
        ok = np.ones((len(blk), len(B)), dtype=bool)
        for i in range(4):
            ok &= G[blk[:, i][:, None], B[:, i][None, :]] == k[i]
        total += int(ok.sum())
    return total


def count_naive(q: int, alpha: PicClass, budget: int = NAIVE_BUDGET, jobs: int = 1,
                cfg: PointConfig | None = None) -> CountReport:
    """Direct enumeration of all projective section pairs (s, t)."""
    t0 = time.perf_counter()
    cfg = _config(q, cfg)
    h, a, aprime, k = _invariants(alpha)
    cand = (q ** (2 * a + 2) // (q - 1)) * (q ** (2 * aprime + 2) // (q - 1))
    if cand > budget:
        raise ResourceCapError(f"naive enumeration needs {cand} candidates (budget {budget})")
    ns = len(_projective_nowhere_vanishing(q, a))
    parts = max(1, jobs)
    bounds = [(ns * j // parts, ns * (j + 1) // parts) for j in range(parts)]
    args = [(q, a, aprime, k, cfg, lo, hi) for lo, hi in bounds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            curves = sum(ex.map(_naive_chunk, args))
    else:
        curves = sum(map(_naive_chunk, args))
    return CountReport(q, a, aprime, k, h, "naive", curves * (q - 1) ** 2, curves,
                       time.perf_counter() - t0, {"budget": budget})


# -- fibered counter --------------------------------------------------------------

def _w_element(T: Sequence[Divisor]) -> P.SaturatedElement:
    return P.SaturatedElement.from_divisors(T)


def _span_nv(F, basis: np.ndarray, n: int, budget: int) -> np.ndarray:
    """Nowhere-vanishing vectors of a kernel, given as a basis of pair-coefficient vectors."""
    if basis.shape[0] == 0:
        return np.zeros((0, 2 * (n + 1)), dtype=np.int64)
    if F.q ** basis.shape[0] > budget:
        raise ResourceCapError(f"fiber of dimension {basis.shape[0]} exceeds the budget {budget}")
    vecs = F.span(basis)
    pts = points_up_to(F.q, max(n, 1))
    E1 = _order_table(F.q, n, pts, vecs[:, : n + 1])
    E2 = _order_table(F.q, n, pts, vecs[:, n + 1:])
    deg = np.array([p.degree for p in pts])
    common = (np.minimum(E1, E2) * deg).sum(axis=1)
    return vecs[common == 0]


def _excess_bits(F, vecs: np.ndarray, n: int, cfg: PointConfig, side: int, pts, mult: np.ndarray) -> np.ndarray:
    """bits[v, i, c] = ord_c(phi_{i,side}(v)) exceeds the prescribed multiplicity mult[i, c]."""
    out = np.zeros((len(vecs), 4, len(pts)), dtype=bool)
    for i in range(4):
        l1, l2 = cfg.functional(i, side)
        comb = F.vadd(F.vmul(np.full_like(vecs[:, : n + 1], l1), vecs[:, : n + 1]),
                      F.vmul(np.full_like(vecs[:, n + 1:], l2), vecs[:, n + 1:]))
        out[:, i, :] = _order_table(F.q, n, pts, comb) > mult[i][None, :]
    return out.reshape(len(vecs), -1)


def _fiber_count(q: int, a: int, aprime: int, T: Sequence[Divisor], cfg: PointConfig, budget: int) -> int:
    """Number of pairs (s, t) in E_w whose incidence divisors are exactly T."""
    F = field(q)
    sysm = incidence_system(a, aprime, _w_element(T), q, cfg)
    Sb, Tb = sysm.s_kernel(), sysm.t_kernel()
    if Sb.shape[0] == 0 or Tb.shape[0] == 0:
        return 0
    S = _span_nv(F, Sb, a, budget)
    Tv = _span_nv(F, Tb, aprime, budget)
    if len(S) == 0 or len(Tv) == 0:
        return 0
    pts = points_up_to(q, max(a, aprime, 1))
    pidx = {p: j for j, p in enumerate(pts)}
    mult = np.zeros((4, len(pts)), dtype=np.int16)
    for i, D in enumerate(T):
        for p, m in D.items:
            mult[i, pidx[p]] = m
    bs = _excess_bits(F, S, a, cfg, 1, pts, mult)
    bt = _excess_bits(F, Tv, aprime, cfg, 2, pts, mult)
    us, cs = np.unique(bs, axis=0, return_counts=True)
    ut, ct = np.unique(bt, axis=0, return_counts=True)
    overlap = us.astype(np.int32) @ ut.T.astype(np.int32)
    return int(cs @ (overlap == 0).astype(np.int64) @ ct)


def _fibered_chunk(args) -> int:
    q, a, aprime, ws, cfg, budget = args
    return sum(_fiber_count(q, a, aprime, T, cfg, budget) for T in ws)


def _w_list(q: int, k: Sequence[int], w_budget: int) -> list:
    ws = []
    for T in enumerate_Uk(q, k):
        ws.append(T)
        if len(ws) > w_budget:
            raise ResourceCapError(f"more than {w_budget} incidence tuples w")
    return ws


def count_fibered(q: int, alpha: PicClass, budget: int = FIBER_BUDGET, w_budget: int = W_BUDGET,
                  jobs: int = 1, cfg: PointConfig | None = None) -> CountReport:
    """Sum over incidence tuples w of the exact-incidence pairs in the section space E_w."""
    t0 = time.perf_counter()
    cfg = _config(q, cfg)
    h, a, aprime, k = _invariants(alpha)
    ws = _w_list(q, k, w_budget)
    parts = max(1, jobs)
    chunks = [ws[j::parts] for j in range(parts)]
    args = [(q, a, aprime, c, cfg, budget) for c in chunks]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            total = sum(ex.map(_fibered_chunk, args))
    else:
        total = sum(map(_fibered_chunk, args))
    return CountReport(q, a, aprime, k, h, "fibered", total, total // (q - 1) ** 2,
                       time.perf_counter() - t0, {"fiber_budget": budget, "w_budget": w_budget, "w": len(ws)})


# -- exact sieve -----------------------------------------------------------------

class _SideSpace:
    """Points of one side of E_w; a subspace of it is stored as the bitmask of its points, which is
    a canonical form (a subspace is determined by its points)."""

    def __init__(self, F, basis: np.ndarray, ncols: int, budget: int):
        self.F = F
        if basis.shape[0] and F.q ** basis.shape[0] > budget:
            raise ResourceCapError(f"fiber side of dimension {basis.shape[0]} exceeds the budget {budget}")
        self.basis = basis
        self.vecs = F.span(basis) if basis.shape[0] else np.zeros((1, ncols), dtype=np.int64)
        self.full = (1 << len(self.vecs)) - 1

    def mask(self, rows: np.ndarray) -> int:
        return self.masks([rows])[0]

    def masks(self, row_sets: list[np.ndarray]) -> list[int]:
        """Bitmasks of several subspaces from a single product against the stacked rows."""
        stacked = [r for r in row_sets if r.size]
        if not stacked:
            return [self.full] * len(row_sets)
        hits = self.F.matmul(self.vecs, np.vstack(stacked).T) != 0
        starts = np.cumsum([0] + [len(r) for r in stacked[:-1]])
        inside = ~np.logical_or.reduceat(hits, starts, axis=1)
        packed = np.packbits(inside, axis=0, bitorder="little").T
        nonempty = iter(int.from_bytes(b.tobytes(), "little") for b in packed)
        return [next(nonempty) if r.size else self.full for r in row_sets]

    def dim(self, rows: np.ndarray) -> int:
        """Dimension of the subspace cut out by rows, from the rank of rows restricted to the basis."""
        k = self.basis.shape[0]
        if rows.size == 0 or k == 0:
            return k
        return k - rank(self.F.matmul(rows, self.basis.T), self.F)


@functools.lru_cache(maxsize=100_000)
def _local_rows(n: int, pt: ClosedPoint, zero_order: int, line_orders: tuple, cfg: PointConfig,
                side: int) -> np.ndarray:
    rows = _side_rows(n, pt, zero_order, line_orders, cfg, side)
    return np.vstack(rows) if rows else np.zeros((0, 2 * (n + 1)), dtype=np.int64)


def _sieve_fiber(q: int, a: int, aprime: int, T: Sequence[Divisor], cfg: PointConfig, cap: int,
                 budget: int = FIBER_BUDGET) -> int:
    F = field(q)
    w = _w_element(T)
    base = incidence_system(a, aprime, w, q, cfg)
    SS = _SideSpace(F, base.s_kernel(), 2 * (a + 1), budget)
    ST = _SideSpace(F, base.t_kernel(), 2 * (aprime + 1), budget)
    top = (SS.full, ST.full)
    atoms = set()
    # a cover changes the conditions at its point only; the other points are already in E_w
    covers = [(pt, *_side_orders(cov)) for pt in points_up_to(q, max(a, aprime, 1))
              for cov in P.chain_covers(w.chain_at(pt))]
    skeys = list(dict.fromkeys((pt, gv2, gl) for pt, _, gv2, gl in covers))
    tkeys = list(dict.fromkeys((pt, gv1, gl) for pt, gv1, _, gl in covers))
    srows = [_local_rows(a, pt, g, gl, cfg, 1) for pt, g, gl in skeys]
    trows = [_local_rows(aprime, pt, g, gl, cfg, 2) for pt, g, gl in tkeys]
    smask = dict(zip(skeys, zip(SS.masks(srows), srows)))
    tmask = dict(zip(tkeys, zip(ST.masks(trows), trows)))
    for pt, gv1, gv2, gl in covers:
        (ms, rs), (mt, rt) = smask[pt, gv2, gl], tmask[pt, gv1, gl]
        atom = (ms, mt)
        if atom in atoms:
            continue
        # cross-check the point count against the rank of the augmented system
        if ms.bit_count() * mt.bit_count() != q ** (SS.dim(rs) + ST.dim(rt)):
            raise AssertionError("atom point count disagrees with its rank")
        atoms.add(atom)
    if top in atoms:  # every point of E_w has excess incidence
        return 0
    # atoms are products A x B, so split one side into cells by which atoms contain them and invert
    # the other side's lattice per cell; split on the side with fewer distinct masks
    pairs = sorted(atoms)
    fa, fb = SS.full, ST.full
    if len({m for m, _ in pairs}) > len({m for _, m in pairs}):
        pairs, fa, fb = sorted((mt, ms) for ms, mt in pairs), fb, fa
    els, N = _lattice_inversion(sorted({m for m, _ in pairs}), fa, cap, w)
    total = 0
    per_cell: dict = {}
    for x, n in zip(els, N):
        if not n:
            continue
        J = frozenset(mb for ma, mb in pairs if x & ma == x)
        if J not in per_cell:
            if fb in J:
                per_cell[J] = 0
            else:
                bels, bN = _lattice_inversion(sorted(J), fb, cap, w)
                per_cell[J] = int(bN[-1])
        total += int(n) * per_cell[J]
    return total


def _packed(masks: Sequence[int], full: int) -> np.ndarray:
    nbytes = -(-full.bit_length() // 64) * 8
    return np.frombuffer(b"".join(m.to_bytes(nbytes, "little") for m in masks),
                         dtype=np.uint64).reshape(len(masks), -1)


def _lattice_inversion(atoms: Sequence[int], full: int, cap: int, w) -> tuple[list[int], np.ndarray]:
    """Close the subspaces (as point bitmasks) under intersection and return the elements in increasing
    size with N[X], the points of X lying in no smaller element; the last element is the whole space."""
    lattice = {full}
    for at in atoms:
        lattice |= {x & at for x in lattice}
        if len(lattice) > cap:
            raise ResourceCapError(f"intersection lattice exceeds {cap} elements at w = {w}")
    els = sorted(lattice, key=lambda x: (x.bit_count(), x))
    size = np.array([x.bit_count() for x in els], dtype=np.int64)
    # every element is the intersection of the atoms containing it, so Y <= X exactly when each atom
    # containing X also contains Y
    Wa = _packed(atoms, full)
    A = np.array([~(x & ~Wa).any(axis=1) for x in _packed(els, full)], dtype=bool).reshape(len(els), len(atoms))
    A = np.packbits(A, axis=1, bitorder="little")
    A = np.pad(A, ((0, 0), (0, -A.shape[1] % 8))).view(np.uint64)
    notA = ~A
    N = np.zeros(len(els), dtype=np.int64)
    for j in range(len(els)):
        miss = A[j, 0] & notA[:j, 0]
        for c in range(1, A.shape[1]):
            miss |= A[j, c] & notA[:j, c]
        N[j] = size[j] - N[:j][miss == 0].sum()
    return els, N


def count_sieve_exact(q: int, alpha: PicClass, cap: int = LATTICE_CAP, w_budget: int = W_BUDGET,
                      cfg: PointConfig | None = None, budget: int = FIBER_BUDGET) -> CountReport:
    """Inclusion-exclusion over the intersection lattice of the bad strata in each E_w."""
    t0 = time.perf_counter()
    cfg = _config(q, cfg)
    h, a, aprime, k = _invariants(alpha)
    total = sum(_sieve_fiber(q, a, aprime, T, cfg, cap, budget) for T in _w_list(q, k, w_budget))
    return CountReport(q, a, aprime, k, h, "sieve", total, total // (q - 1) ** 2,
                       time.perf_counter() - t0, {"lattice_cap": cap, "w_budget": w_budget, "fiber_budget": budget})


# -- virtual main term -------------------------------------------------------------

def _poly_mul(A: dict, B: dict, kmax: Sequence[int], gmax: int | None) -> dict:
    out: dict = {}
    for (ka, ga), ca in A.items():
        for (kb, gb), cb in B.items():
            kk = tuple(x + y for x, y in zip(ka, kb))
            if any(x > m for x, m in zip(kk, kmax)):
                continue
            g = ga + gb
            if gmax is not None and g > gmax:
                continue
            key = (kk, g)
            out[key] = out.get(key, 0) + ca * cb
    return {key: c for key, c in out.items() if c}


_FREE_DEPTH = 8


@functools.lru_cache(maxsize=None)
def _local_series_cached(d: int, kmax: tuple, gmax: int | None) -> tuple:
    return tuple(_local_series_raw(d, kmax, gmax).items())


def _local_series(d: int, kmax: Sequence[int], gmax: int | None) -> dict:
    return dict(_local_series_cached(d, tuple(kmax), gmax))


def _local_series_raw(d: int, kmax: Sequence[int], gmax: int | None) -> dict:
    """sum over local pairs (w_c, x_c) at a degree-d point of mu * t^{k(w_c)} * Z^{gamma(x_c)}."""
    out: dict = {}

    def add(f0: P.Chain, kvec: tuple[int, ...]):
        if gmax is None:
            bound = f0.gamma + _FREE_DEPTH
        else:
            bound = gmax // d
            if f0.gamma > bound:
                return
        poly = P.local_euler_polynomial(f0, bound)
        if gmax is None and any(g > f0.gamma + 4 for g in poly):
            raise AssertionError("local Moebius sum does not terminate where expected")
        for g, c in poly.items():
            key = (kvec, g * d)
            out[key] = out.get(key, 0) + c

    add(P.TRIVIAL, (0, 0, 0, 0))
    for i in range(4):
        for m in range(1, kmax[i] // d + 1):
            kv = [0, 0, 0, 0]
            kv[i] = m * d
            add(P.atom_chain(m, i), tuple(kv))
    return out


def main_term_virtual(q: int, k: Sequence[int], gamma_max: int | None, deg_max: int,
                      method: str = "factorized") -> Fraction:
    """sum over w in U_k and saturated x >= w (points of degree <= deg_max, gamma(x) <= gamma_max)
    of mu(w, x) q^{-gamma(x)}."""
    k = tuple(k)
    if gamma_max is not None and gamma_max < 0 or deg_max < 0:
        raise PreconditionError("truncation bounds must be >= 0")
    if method == "literal":
        if gamma_max is None:
            raise PreconditionError("literal enumeration needs a finite gamma bound")
        total = Fraction(0)
        for T in enumerate_Uk(q, k, max_point_degree=deg_max):
            w = _w_element(T)
            for x in P.enumerate_saturated_above(w, gamma_max, deg_max, q):
                mu = P.mobius_global(P.PairWX(w, x))
                if mu:
                    total += Fraction(mu, q ** x.gamma)
        return total
    if method != "factorized":
        raise PreconditionError(f"unknown method {method!r}")
    if gamma_max is None:
        # no gamma cap: substitute Z = 1/q in each local series right away
        acc0: dict = {((0, 0, 0, 0), 0): Fraction(1)}
        for pt in points_up_to(q, deg_max) if deg_max >= 1 else ():
            loc: dict = {}
            for (kk, g), c in _local_series(pt.degree, k, None).items():
                loc[(kk, 0)] = loc.get((kk, 0), 0) + Fraction(c, q**g)
            acc0 = _poly_mul(acc0, loc, k, None)
        return acc0.get((k, 0), Fraction(0))
    acc: dict = {((0, 0, 0, 0), 0): 1}
    for pt in points_up_to(q, deg_max) if deg_max >= 1 else ():
        acc = _poly_mul(acc, _local_series(pt.degree, k, gamma_max), k, gamma_max)
    return sum((Fraction(c, q ** g) for (kk, g), c in acc.items() if kk == k), Fraction(0))


def main_term_tail_bound(q: int, k: Sequence[int], gamma_max: int, deg_max: int) -> Fraction:
    """Sum of |mu(w, x)| q^{-gamma(x)} over the pairs omitted by the gamma truncation (same support)."""
    k = tuple(k)
    acc: dict = {((0, 0, 0, 0), 0): 1}
    for pt in points_up_to(q, deg_max) if deg_max >= 1 else ():
        loc = {key: abs(c) for key, c in _local_series(pt.degree, k, None).items()}
        acc = _poly_mul(acc, loc, k, None)
    return sum((Fraction(c, q ** g) for (kk, g), c in acc.items() if kk == k and g > gamma_max), Fraction(0))


# -- unobstructedness and coverage -------------------------------------------------

@dataclass
class UnobstructednessReport:
    q: int
    class_text: str
    E_bound: int
    checked: int
    unobstructed: int
    counterexamples: list

    @property
    def fraction(self) -> float:
        return self.unobstructed / self.checked if self.checked else 1.0


def verify_unobstructedness(q: int, alpha: PicClass, E_bound: int, sample: int | None = None,
                            deg_max: int = 1, seed: int = 0, cfg: PointConfig | None = None
                            ) -> UnobstructednessReport:
    """Compare actual and expected stratum dimensions for pairs w <= x with E(w < x) <= E_bound."""
    cfg = _config(q, cfg)
    h, a, aprime, k = _invariants(alpha)
    if not (2 * a > sum(k) and 2 * aprime > sum(k)):
        raise InvalidClassError("needs 2a > sum k and 2a' > sum k")
    ws = list(enumerate_Uk(q, k, max_point_degree=deg_max))
    if sample is not None and sample < len(ws):
        ws = random.Random(seed).sample(ws, sample)
    checked = good = 0
    bad = []
    for T in ws:
        w = _w_element(T)
        for x in P.enumerate_saturated_above(w, w.gamma + E_bound, deg_max, q):
            sd = stratum_dim(a, aprime, x, q, k, cfg)
            checked += 1
            if sd.unobstructed:
                good += 1
            else:
                bad.append((str(w), str(x), sd.actual, sd.expected))
    return UnobstructednessReport(q, alpha.text(), E_bound, checked, good, bad)


@dataclass
class CoverageReport:
    q: int
    a: int
    k: tuple[int, ...]
    total: int
    covered: int

    @property
    def fraction(self) -> float:
        return self.covered / self.total if self.total else 1.0


def coverage_report(q: int, a: int, k: Sequence[int], cfg: PointConfig | None = None) -> CoverageReport:
    """Fraction of rational w in U_k for which some nowhere-vanishing degree-a pair s satisfies
    T_i | phi_{i,1}(s) for all i (searched exhaustively in the kernel)."""
    cfg = _config(q, cfg)
    F = field(q)
    total = covered = 0
    for T in enumerate_Uk(q, k):
        total += 1
        sysm = incidence_system(a, 0, _w_element(T), q, cfg)
        basis = sysm.s_kernel()
        if len(_span_nv(F, basis, a, FIBER_BUDGET)):
            covered += 1
    return CoverageReport(q, a, tuple(k), total, covered)


# -- agreement battery ---------------------------------------------------------------

def nef_classes(hmax: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """(a, a', k) for every nef class with h <= hmax, ordered by (h, a, a', k)."""
    from .picard import nef_invariant_points

    out = [(r[0], r[1], tuple(r[2:])) for chunk in nef_invariant_points(hmax) for r in chunk.tolist()]
    return sorted(out, key=lambda r: (2 * r[0] + 2 * r[1] - sum(r[2]), r))


@dataclass
class BatteryRecord:
    a: int
    aprime: int
    k: tuple[int, ...]
    counts: dict  # method -> curve count, or None when capped
    status: str  # "agree", "disagree", "incomplete" or "not run"


@dataclass
class BatteryReport:
    q: int
    hmax: int
    records: list
    seconds: float
    time_budget: float

    @property
    def complete(self) -> int:
        return sum(r.status in ("agree", "disagree") for r in self.records)

    @property
    def disagreements(self) -> list:
        return [r for r in self.records if r.status == "disagree"]

    @property
    def passed(self) -> bool:
        return all(r.status == "agree" for r in self.records) and self.seconds <= self.time_budget


def counter_battery(q: int, hmax: int, time_budget: float = 900.0, naive_budget: int = 2**24,
                    fiber_budget: int = 2**16, w_budget: int = 2**16, lattice_cap: int = LATTICE_CAP,
                    cfg: PointConfig | None = None) -> BatteryReport:
    """Run all three exact counters on every nef class with h <= hmax, cheapest classes first,
    stopping when the time budget is spent."""
    cfg = _config(q, cfg)
    t0 = time.perf_counter()
    classes = sorted(nef_classes(hmax), key=lambda r: (2 * r[0] + 2 * r[1] + 4, r))
    records = []
    for a, ap, k in classes:
        if time.perf_counter() - t0 > time_budget:
            records.append(BatteryRecord(a, ap, k, {}, "not run"))
            continue
        alpha = PicClass.from_invariants(a, ap, k)
        counts = {}
        for name, fn in (("naive", lambda: count_naive(q, alpha, naive_budget, cfg=cfg)),
                         ("fibered", lambda: count_fibered(q, alpha, fiber_budget, w_budget, cfg=cfg)),
                         ("sieve", lambda: count_sieve_exact(q, alpha, lattice_cap, w_budget, cfg, fiber_budget))):
            try:
                counts[name] = fn().curve_count
            except ResourceCapError:
                counts[name] = None
        vals = set(counts.values())
        status = "incomplete" if None in vals else ("agree" if len(vals) == 1 else "disagree")
        records.append(BatteryRecord(a, ap, k, counts, status))
    return BatteryReport(q, hmax, records, time.perf_counter() - t0, time_budget)
