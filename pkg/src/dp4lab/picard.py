"""Picard lattice of the split quartic del Pezzo surface Bl_4(P^1 x P^1).

Coordinates (a, b, c1..c4) stand for aF + bF' + sum c_i E_i.  Class invariants
in a presentation (C, C', e_1..e_4) are a = C.alpha, a' = C'.alpha and
k_i = e_i.alpha; in the standard presentation alpha = a'F + aF' - sum k_i E_i.
"""

from __future__ import annotations

import functools
import itertools
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

GRAM = np.diag([0, 0, -1, -1, -1, -1]).astype(np.int64)
GRAM[0, 1] = GRAM[1, 0] = 1


class InvalidClassError(ValueError):
    """A class violates an operation's precondition (typically: not nef)."""


@dataclass(frozen=True)
class PicClass:
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != 6:
            raise InvalidClassError("a Picard class has 6 coordinates")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def from_invariants(cls, a: int, aprime: int, k: Sequence[int]) -> "PicClass":
        return cls((aprime, a) + tuple(-x for x in k))

    @classmethod
    def parse(cls, text: str) -> "PicClass":
        """Parse "a,a',k1,k2,k3,k4" or "h,a,a',k1,k2,k3,k4" (h must equal 2a + 2a' - sum k)."""
        parts = [p.strip() for p in str(text).strip("()").replace("(", "").replace(")", "").split(",")]
        if len(parts) not in (6, 7):
            raise InvalidClassError(f"expected 6 or 7 comma-separated integers, got {text!r}")
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise InvalidClassError(f"malformed class {text!r}") from exc
        if len(vals) == 7:
            h, a, ap, *k = vals
            if h != 2 * a + 2 * ap - sum(k):
                raise InvalidClassError(f"h = {h} does not match 2a + 2a' - sum k in {text!r}")
        else:
            a, ap, *k = vals
        return cls.from_invariants(a, ap, k)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def dot(self, other: "PicClass") -> int:
        return pairing(self, other)

    @property
    def a(self) -> int:
        return self.coords[1]

    @property
    def aprime(self) -> int:
        return self.coords[0]

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(-c for c in self.coords[2:])

    @property
    def h(self) -> int:
        return pairing(MINUS_K, self)

    def text(self) -> str:
        return ",".join(str(x) for x in (self.a, self.aprime) + self.k)

    def __str__(self) -> str:
        return self.text()

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "PicClass":
        return PicClass(tuple(-x for x in self.coords))

    def __rmul__(self, n: int) -> "PicClass":
        return PicClass(tuple(n * x for x in self.coords))


def _basis(i: int) -> PicClass:
    return PicClass(tuple(int(j == i) for j in range(6)))


F_CLASS, FPRIME, E1, E2, E3, E4 = (_basis(i) for i in range(6))
E = (E1, E2, E3, E4)
MINUS_K = PicClass((2, 2, -1, -1, -1, -1))


def pairing(alpha: PicClass, beta: PicClass) -> int:
    x, y = alpha.coords, beta.coords
    return x[0] * y[1] + x[1] * y[0] - sum(x[i] * y[i] for i in range(2, 6))


def _line_key(c: PicClass) -> tuple:
    a, b = c.coords[:2]
    neg = tuple(i for i in range(4) if c.coords[2 + i] < 0)
    pos = tuple(i for i in range(4) if c.coords[2 + i] > 0)
    kind = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}[(a, b)]
    return (kind, pos, neg)


@functools.lru_cache(maxsize=None)
def minus_one_classes() -> tuple[PicClass, ...]:
    """All C with C^2 = -1 and -K.C = 1, by exhaustive search in a box, canonical order."""
    found = []
    for v in itertools.product(range(-2, 3), repeat=6):
        c = PicClass(v)
        if pairing(c, c) == -1 and pairing(MINUS_K, c) == 1:
            found.append(c)
    return tuple(sorted(found, key=_line_key))


@functools.lru_cache(maxsize=None)
def disjoint_triples() -> tuple[tuple[int, int, int], ...]:
    """Ordered triples of pairwise-disjoint lines (as indices into minus_one_classes)."""
    L = minus_one_classes()
    n = len(L)
    M = [[pairing(L[i], L[j]) for j in range(n)] for i in range(n)]
    return tuple((i, j, k) for i, j, k in itertools.permutations(range(n), 3)
                 if M[i][j] == 0 and M[i][k] == 0 and M[j][k] == 0)


@functools.lru_cache(maxsize=None)
def _line_matrix() -> np.ndarray:
    """Rows G @ L so that (row . alpha) = L.alpha."""
    return np.array([GRAM @ L.vec for L in minus_one_classes()], dtype=np.int64)


def is_nef(alpha: PicClass) -> bool:
    return bool(np.all(_line_matrix() @ alpha.vec >= 0))


def nef_from_invariants(a: int, aprime: int, k: Sequence[int]) -> bool:
    """Nef test written in standard-presentation invariants."""
    if min(k) < 0 or max(k) > min(a, aprime):
        return False
    return all(a + aprime >= k[i] + k[j] + k[l] for i, j, l in itertools.combinations(range(4), 3))


# -- presentations -------------------------------------------------------------

def _conic_key(c: PicClass) -> tuple:
    return (c.coords[0] + c.coords[1], -c.coords[0], c.coords[2:])


@functools.lru_cache(maxsize=None)
def conic_classes() -> tuple[PicClass, ...]:
    """Nef classes with C^2 = 0 and -K.C = 2 (exhaustive search in a box)."""
    found = []
    for v in itertools.product(range(-3, 4), repeat=6):
        c = PicClass(v)
        if pairing(c, c) == 0 and pairing(MINUS_K, c) == 2 and is_nef(c):
            found.append(c)
    return tuple(sorted(found, key=_conic_key))


@dataclass(frozen=True)
class Presentation:
    C: PicClass
    Cprime: PicClass
    exceptional: tuple[PicClass, ...]

    def invariants(self, alpha: PicClass) -> tuple[int, int, tuple[int, ...]]:
        return (pairing(self.C, alpha), pairing(self.Cprime, alpha),
                tuple(pairing(e, alpha) for e in self.exceptional))

    def relabel(self, alpha: PicClass) -> PicClass:
        """The isometry sending F, F', E_i to C, C', e_i, applied to alpha."""
        x = alpha.coords
        out = x[0] * self.C.vec + x[1] * self.Cprime.vec
        for i, e in enumerate(self.exceptional):
            out = out + x[2 + i] * e.vec
        return PicClass(tuple(out))


@functools.lru_cache(maxsize=None)
def presentations() -> tuple[Presentation, ...]:
    """Ordered pairs (C, C') of conic classes with C.C' = 1 and their exceptional lines."""
    conics = conic_classes()
    lines = minus_one_classes()
    out = []
    for C, Cp in itertools.product(conics, repeat=2):
        if pairing(C, Cp) != 1:
            continue
        exc = tuple(L for L in lines if pairing(L, C) == 0 and pairing(L, Cp) == 0)
        out.append(Presentation(C, Cp, exc))
    return tuple(out)


STANDARD = Presentation(F_CLASS, FPRIME, E)


@dataclass(frozen=True)
class ClassInvariants:
    h: int
    a: int
    aprime: int
    k: tuple[int, ...]


def class_invariants(alpha: PicClass, rho: Presentation = STANDARD) -> ClassInvariants:
    if not is_nef(alpha):
        raise InvalidClassError(f"class {alpha} is not nef")
    a, ap, k = rho.invariants(alpha)
    h = pairing(MINUS_K, alpha)
    if h != 2 * a + 2 * ap - sum(k):
        raise AssertionError("height relation violated")  # cannot happen for a valid presentation
    return ClassInvariants(h, a, ap, k)


# -- chamber decomposition -----------------------------------------------------

@dataclass(frozen=True)
class ChamberDecomposition:
    b: int
    b3: int
    b2: int
    x: int
    y1: int
    y2: int
    triple: tuple[PicClass, PicClass, PicClass]
    H: PicClass
    F1: PicClass
    F2: PicClass

    @property
    def coefficients(self) -> tuple[int, ...]:
        return (self.b, self.b3, self.b2, self.x, self.y1, self.y2)

    def recompose(self) -> PicClass:
        L1, L2, _ = self.triple
        parts = [(self.b, MINUS_K), (self.b3, MINUS_K + L1), (self.b2, MINUS_K + L1 + L2),
                 (self.x, self.H), (self.y1, self.F1), (self.y2, self.F2)]
        out = PicClass((0,) * 6)
        for n, c in parts:
            out = out + n * c
        return out


@functools.lru_cache(maxsize=None)
def _chamber_data():
    """For each triple and orientation: the six basis classes and the dual functionals."""
    lines = minus_one_classes()
    records = []
    for t in disjoint_triples():
        L1, L2, L3 = (lines[i] for i in t)
        rest = [L for L in lines if L not in (L1, L2, L3)
                and all(pairing(L, Lt) == 0 for Lt in (L1, L2, L3))]
        assert len(rest) == 3
        # the middle line meets the other two, which are disjoint from each other
        M = next(L for L in rest if all(pairing(L, o) == 1 for o in rest if o != L))
        e1, e2 = [L for L in rest if L != M]
        H = M + e1 + e2
        for ea, eb in ((e1, e2), (e2, e1)):
            F1, F2 = H - ea, H - eb
            basis = (MINUS_K, MINUS_K + L1, MINUS_K + L1 + L2, H, F1, F2)
            B = np.array([c.vec for c in basis], dtype=np.int64).T  # columns
            Binv = np.linalg.inv(B.astype(float))
            Binv_int = np.rint(Binv).astype(np.int64)
            assert np.array_equal(B @ Binv_int, np.eye(6, dtype=np.int64))
            records.append(((L1, L2, L3), H, F1, F2, Binv_int))
    return records


def chamber_decompose(alpha: PicClass) -> ChamberDecomposition:
    """First admissible (all coefficients >= 0) decomposition over the 960 triples in canonical
    order; of the two orientations of (F1, F2) the one with y1 >= y2 is used."""
    if not is_nef(alpha):
        raise InvalidClassError(f"class {alpha} is not nef")
    v = alpha.vec
    recs = _chamber_data()
    for idx in range(0, len(recs), 2):
        options = []
        for triple, H, F1, F2, Binv in recs[idx:idx + 2]:
            coef = Binv @ v
            if np.all(coef >= 0):
                options.append(ChamberDecomposition(*map(int, coef), triple, H, F1, F2))
        if options:
            return next((o for o in options if o.y1 >= o.y2), options[0])
    raise AssertionError(f"no admissible chamber decomposition for nef class {alpha}")


# -- the function ell and the shrunk cone --------------------------------------

@functools.lru_cache(maxsize=None)
def _presentation_arrays():
    P = presentations()
    C = np.array([GRAM @ p.C.vec for p in P])
    Cp = np.array([GRAM @ p.Cprime.vec for p in P])
    Ex = np.array([[GRAM @ e.vec for e in p.exceptional] for p in P])
    return C, Cp, Ex


def ell(alpha: PicClass) -> Fraction:
    best = None
    for rho in presentations():
        a, ap, k = rho.invariants(alpha)
        frak_j = Fraction(min(2 * a - sum(k), 2 * ap - sum(k)), 32)
        val = min(frak_j, Fraction(min(k)))
        best = val if best is None else max(best, val)
    return best


def ell_array(points: np.ndarray) -> np.ndarray:
    """32 * ell for an (N, 6) array of coordinate vectors (integer valued)."""
    C, Cp, Ex = _presentation_arrays()
    a = points @ C.T  # (N, P)
    ap = points @ Cp.T
    k = np.einsum("nj,pij->npi", points, Ex)
    sk = k.sum(axis=2)
    frak_j = np.minimum(2 * a - sk, 2 * ap - sk)
    val = np.minimum(frak_j, 32 * k.min(axis=2))
    return val.max(axis=1)


@dataclass(frozen=True)
class EllReport:
    ell: Fraction
    member_of_shrunk_cone: bool


def ell_and_cone(alpha: PicClass, eps: Fraction | int = 0) -> EllReport:
    if not is_nef(alpha):
        raise InvalidClassError(f"class {alpha} is not nef")
    value = ell(alpha)
    return EllReport(value, value >= Fraction(eps) * alpha.h)


# -- cones, double description and volumes ------------------------------------

def _int_rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rk, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[rk][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def _det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n, det = len(m), Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _primitive(v: Iterable) -> tuple[int, ...]:
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // np.gcd(den, x.denominator)
    iv = [int(x * den) for x in v]
    g = 0
    for x in iv:
        g = int(np.gcd(g, abs(x)))
    return tuple(x // g for x in iv) if g else tuple(iv)


def double_description(A: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x : A x >= 0} (exact integer arithmetic)."""
    A = [tuple(int(x) for x in row) for row in A]
    d = len(A[0])
    # initial basis of d independent rows
    basis_rows: list[int] = []
    for i in range(len(A)):
        if _int_rank([A[j] for j in basis_rows + [i]]) > len(basis_rows):
            basis_rows.append(i)
        if len(basis_rows) == d:
            break
    if len(basis_rows) < d:
        raise ValueError("cone is not pointed")
    # rays of the simplicial cone: columns of the inverse
    Bm = [[Fraction(x) for x in A[i]] for i in basis_rows]
    inv = _inverse(Bm)
    rays = [_primitive([inv[r][c] for r in range(d)]) for c in range(d)]
    processed = list(basis_rows)
    for i in range(len(A)):
        if i in basis_rows:
            continue
        row = A[i]
        val = [sum(x * y for x, y in zip(row, r)) for r in rays]
        pos = [r for r, v in zip(rays, val) if v > 0]
        zero = [r for r, v in zip(rays, val) if v == 0]
        neg = [(r, v) for r, v in zip(rays, val) if v < 0]
        new = []
        for (rp, vp) in [(r, v) for r, v in zip(rays, val) if v > 0]:
            tight_p = {j for j in processed if sum(x * y for x, y in zip(A[j], rp)) == 0}
            for rn, vn in neg:
                tight = [j for j in tight_p if sum(x * y for x, y in zip(A[j], rn)) == 0]
                if len(tight) < d - 2 or _int_rank([A[j] for j in tight]) < d - 2:
                    continue
                # algebraic adjacency test
                combo = [vp * xn - vn * xp for xp, xn in zip(rp, rn)]
                new.append(_primitive(combo))
        rays = pos + zero + new
        processed.append(i)
    return sorted(set(rays))


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


@dataclass
class Cone:
    """Rational polyhedral cone in Pic with both descriptions (rays; inequalities n.x >= 0)."""

    rays: list[tuple[int, ...]]
    inequalities: list[tuple[int, ...]] = dc_field(default_factory=list)

    @classmethod
    def from_inequalities(cls, A: Sequence[Sequence[int]]) -> "Cone":
        A = [tuple(int(x) for x in r) for r in A]
        return cls(double_description(A), A)

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[int]]) -> "Cone":
        rays = [tuple(int(x) for x in r) for r in rays]
        if _int_rank(rays) < 6:
            return cls(rays, [])
        return cls(rays, double_description(rays))

    @property
    def dimension(self) -> int:
        return _int_rank(self.rays) if self.rays else 0

    def contains(self, v: Sequence[int]) -> bool:
        if self.inequalities:
            return all(sum(x * y for x, y in zip(n, v)) >= 0 for n in self.inequalities)
        raise NotImplementedError("membership needs the inequality description")

    def transform(self, M: np.ndarray) -> "Cone":
        """Image under a lattice automorphism x -> M x."""
        M = np.asarray(M, dtype=np.int64)
        Minv = np.rint(np.linalg.inv(M)).astype(np.int64)
        rays = [tuple(int(x) for x in M @ np.array(r)) for r in self.rays]
        ineq = [tuple(int(x) for x in np.array(n) @ Minv) for n in self.inequalities]
        return Cone(rays, ineq)


@functools.lru_cache(maxsize=None)
def _nef_cone_cached() -> Cone:
    return Cone.from_inequalities([tuple(r) for r in _line_matrix()])


def nef_cone() -> Cone:
    c = _nef_cone_cached()
    return Cone(list(c.rays), list(c.inequalities))


@dataclass(frozen=True)
class ShrunkCone:
    """The nef classes with ell(alpha) >= eps * h(alpha) (a finite union of chambers)."""

    eps: Fraction


def _triangulate(face: frozenset, dim: int, tight: dict, ranks: dict) -> list[tuple[int, ...]]:
    if len(face) == dim + 1:
        return [tuple(sorted(face))]
    apex = min(face)
    facets = set()
    for j, tset in tight.items():
        g = face & tset
        if g == face or apex in g or len(g) < dim:
            continue
        if ranks(g) == dim:  # linear rank of the rays = affine dim + 1
            facets.add(g)
    # keep maximal candidates only
    out = []
    for g in facets:
        if any(g < h for h in facets):
            continue
        for simplex in _triangulate(g, dim - 1, tight, ranks):
            out.append(simplex + (apex,))
    return out


@dataclass(frozen=True)
class AlphaResult:
    value: Fraction | float
    mode: str
    warning: str | None = None


def alpha_constant(cone: Cone | ShrunkCone | None = None, mode: str = "exact", dilation: int = 30) -> AlphaResult:
    """rho * Vol{alpha in cone : -K.alpha <= 1} with rho = 6 (exact triangulation or lattice count)."""
    cone = nef_cone() if cone is None else cone
    warn = None
    if isinstance(cone, ShrunkCone) and mode == "exact":
        warn = "exact volume is not supported for the shrunk cone; used lattice mode"
        warnings.warn(warn)
        mode = "lattice"
    if mode == "lattice":
        m = dilation
        return AlphaResult(Fraction(6 * ehrhart_count(cone, m), m**6), "lattice", warn)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    rays = [r for r in cone.rays]
    if not rays or _int_rank(rays) < 6:
        return AlphaResult(Fraction(0), "exact")
    K = MINUS_K.vec
    heights = [int(np.dot(GRAM @ K, r)) for r in rays]
    if min(heights) <= 0:
        raise InvalidClassError("cone is not contained in the nef cone")
    tight = {j: frozenset(i for i, r in enumerate(rays) if sum(x * y for x, y in zip(n, r)) == 0)
             for j, n in enumerate(cone.inequalities)}
    cache: dict = {}

    def ranks(g: frozenset) -> int:
        if g not in cache:
            cache[g] = _int_rank([rays[i] for i in g])
        return cache[g]

    simplices = _triangulate(frozenset(range(len(rays))), 5, tight, ranks)
    total = Fraction(0)
    for s in simplices:
        det = _det([rays[i] for i in s])
        scale = 1
        for i in s:
            scale *= heights[i]
        total += abs(det) / scale
    return AlphaResult(6 * total / 720, "exact")


# -- lattice points ------------------------------------------------------------

def nef_invariant_points(m: int) -> Iterable[np.ndarray]:
    """Chunks of (a, a', k1, k2, k3, k4) rows for all nef classes with h <= m."""
    for a in range(m + 1):
        for ap in range(m + 1):
            M = min(a, ap)
            g = np.arange(M + 1)
            k = np.stack(np.meshgrid(g, g, g, g, indexing="ij"), -1).reshape(-1, 4)
            tri = np.stack([k[:, [0, 1, 2]].sum(1), k[:, [0, 1, 3]].sum(1),
                            k[:, [0, 2, 3]].sum(1), k[:, [1, 2, 3]].sum(1)], 1).max(1)
            h = 2 * a + 2 * ap - k.sum(1)
            keep = (tri <= a + ap) & (h <= m)
            if keep.any():
                kk = k[keep]
                yield np.hstack([np.full((len(kk), 1), a), np.full((len(kk), 1), ap), kk])


def invariants_to_coords(points: np.ndarray) -> np.ndarray:
    return np.hstack([points[:, [1]], points[:, [0]], -points[:, 2:]])


def _nef_count(m: int) -> int:
    """Number of nef classes with h <= m, with the k4 range summed in closed form."""
    total = 0
    for a in range(m + 1):
        for ap in range(m + 1):
            M = min(a, ap)
            g = np.arange(M + 1)
            k1, k2, k3 = np.meshgrid(g, g, g, indexing="ij")
            s = k1 + k2 + k3
            ok = s <= a + ap
            hi = np.minimum.reduce([np.full_like(k1, M), a + ap - k1 - k2, a + ap - k1 - k3, a + ap - k2 - k3])
            lo = np.maximum(0, 2 * a + 2 * ap - m - s)
            total += int(np.where(ok, np.maximum(hi - lo + 1, 0), 0).sum())
    return total


def ehrhart_count(cone: Cone | ShrunkCone | None, m: int) -> int:
    """#{alpha integral in cone : -K.alpha <= m}.  Every nef class satisfies a, a' <= h and
    0 <= k_i <= min(a, a'), which bounds the enumeration box."""
    if m < 0:
        return 0
    if cone is None or (isinstance(cone, Cone) and sorted(cone.inequalities) == sorted(map(tuple, _line_matrix()))):
        return _nef_count(m)
    total = 0
    for pts in nef_invariant_points(m):
        coords = invariants_to_coords(pts)
        if isinstance(cone, ShrunkCone):
            h = 2 * pts[:, 0] + 2 * pts[:, 1] - pts[:, 2:].sum(1)
            eps = Fraction(cone.eps)
            keep = ell_array(coords) * eps.denominator >= 32 * eps.numerator * h
        else:
            if not cone.inequalities:
                keep = _in_span_of_rays(cone, coords)
            else:
                N = np.array(cone.inequalities, dtype=np.int64)
                keep = np.all(coords @ N.T >= 0, axis=1)
        total += int(np.count_nonzero(keep))
    return total


def _in_span_of_rays(cone: Cone, coords: np.ndarray) -> np.ndarray:
    """Membership for lower-dimensional cones: only the single-ray case is needed."""
    if len(cone.rays) != 1:
        raise NotImplementedError("lattice counts for lower-dimensional cones need a single ray")
    r = np.array(cone.rays[0], dtype=np.int64)
    # x = t r with t >= 0 rational: cross products vanish and x.r >= 0
    cross = coords[:, :, None] * r[None, None, :] - coords[:, None, :] * r[None, :, None]
    return np.all(cross == 0, axis=(1, 2)) & (coords @ r >= 0)


def swap_matrix() -> np.ndarray:
    M = np.eye(6, dtype=np.int64)
    M[[0, 1]] = M[[1, 0]]
    return M


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    M = np.eye(6, dtype=np.int64)
    M[2:, 2:] = np.eye(4, dtype=np.int64)[list(perm)]
    return M
