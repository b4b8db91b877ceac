"""The incidence poset Q of subspaces of V = V1 + V2, chains, saturated elements and Moebius values.

Every element of Q is a direct sum X1 + X2 with X_j equal to V_j, one of the
lines l_{i,j}, or 0.  An element is encoded by the pair of component codes
(WHOLE, line index 0..3, or ZERO); the order is componentwise containment.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .ffpoly import ClosedPoint, PreconditionError, points_up_to

WHOLE, ZERO = "W", "Z"


def _component_le(x, y) -> bool:
    return x == y or x == ZERO or y == WHOLE


def _component_meet(x, y):
    if _component_le(x, y):
        return x
    if _component_le(y, x):
        return y
    return ZERO


def _element_components() -> list[tuple[str, tuple]]:
    els = [("0", (ZERO, ZERO))]
    for i in range(4):
        els.append((f"l{i + 1},1", (i, ZERO)))
        els.append((f"l{i + 1},2", (ZERO, i)))
    els.append(("V1", (WHOLE, ZERO)))
    els.append(("V2", (ZERO, WHOLE)))
    for i in range(4):
        els.append((f"l{i + 1},1+l{i + 1},2", (i, i)))
    els.append(("V", (WHOLE, WHOLE)))
    return els


_ELS = _element_components()
NAMES: tuple[str, ...] = tuple(n for n, _ in _ELS)
COMPONENTS: tuple[tuple, ...] = tuple(c for _, c in _ELS)
N_ELEMENTS = len(_ELS)
INDEX = {n: i for i, n in enumerate(NAMES)}
BOTTOM = INDEX["0"]
TOP = INDEX["V"]
V1 = INDEX["V1"]
V2 = INDEX["V2"]


def L(i: int) -> int:
    """Index of l_{i,1} + l_{i,2} (i = 0..3)."""
    return INDEX[f"l{i + 1},1+l{i + 1},2"]


def line(i: int, j: int) -> int:
    """Index of l_{i,j} (i = 0..3, j = 1, 2)."""
    return INDEX[f"l{i + 1},{j}"]


LE = tuple(tuple(all(_component_le(a, b) for a, b in zip(COMPONENTS[x], COMPONENTS[y]))
                 for y in range(N_ELEMENTS)) for x in range(N_ELEMENTS))
_MEET_COMP = {c: i for i, c in enumerate(COMPONENTS)}
MEET = tuple(tuple(_MEET_COMP[tuple(_component_meet(a, b) for a, b in zip(COMPONENTS[x], COMPONENTS[y]))]
                   for y in range(N_ELEMENTS)) for x in range(N_ELEMENTS))


def _component_dim(c) -> int:
    return 2 if c == WHOLE else (0 if c == ZERO else 1)


#: expected codimension of the incidence condition: 4 - dim
GAMMA = tuple(4 - sum(_component_dim(c) for c in COMPONENTS[x]) for x in range(N_ELEMENTS))


def _rank_from_top() -> tuple[int, ...]:
    rk = [0] * N_ELEMENTS
    for x in sorted(range(N_ELEMENTS), key=lambda x: -sum(_component_dim(c) for c in COMPONENTS[x])):
        above = [y for y in range(N_ELEMENTS) if y != x and LE[x][y]]
        rk[x] = 0 if not above else 1 + max(rk[y] for y in above)
    return tuple(rk)


RANK = _rank_from_top()


def meet(x: int, y: int) -> int:
    return MEET[x][y]


def le(x: int, y: int) -> bool:
    return LE[x][y]


def covered_by(x: int) -> list[int]:
    """Elements y with y < x and rank(y) = rank(x) + 1 (one step down in Q)."""
    return [y for y in range(N_ELEMENTS) if y != x and LE[y][x] and RANK[y] == RANK[x] + 1]


# -- chains -------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Weakly increasing sequence f(1), f(2), ... of non-top elements of Q; f(n) = V afterwards."""

    seq: tuple[int, ...] = ()

    def __post_init__(self):
        seq = tuple(self.seq)
        while seq and seq[-1] == TOP:
            seq = seq[:-1]
        if TOP in seq:
            raise PreconditionError("V may only appear after the last listed element")
        for a, b in zip(seq, seq[1:]):
            if not LE[a][b]:
                raise PreconditionError("chain values must be weakly increasing in Q")
        object.__setattr__(self, "seq", seq)

    @classmethod
    def from_runs(cls, runs: Sequence[tuple[int | str, int]]) -> "Chain":
        seq: list[int] = []
        for el, m in runs:
            idx = INDEX[el] if isinstance(el, str) else el
            seq.extend([idx] * m)
        return cls(tuple(seq))

    @classmethod
    def parse(cls, text: str) -> "Chain":
        """Parse "m0[0]+m1[l1,1]+m2[l1,1+l1,2]" (multiplicity defaults to 1)."""
        text = text.replace(" ", "")
        if text in ("", "V", "trivial"):
            return cls()
        runs = []
        pos = 0
        for m in re.finditer(r"(\d*)\[([^\]]*)\]\+?", text):
            if m.start() != pos:
                raise PreconditionError(f"malformed chain {text!r}")
            pos = m.end()
            name = m.group(2)
            if name not in INDEX:
                raise PreconditionError(f"unknown element {name!r}")
            runs.append((name, int(m.group(1) or 1)))
        if pos != len(text):
            raise PreconditionError(f"malformed chain {text!r}")
        return cls.from_runs(runs)

    @property
    def runs(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, len(list(g))) for k, g in itertools.groupby(self.seq))

    def __str__(self) -> str:
        if not self.seq:
            return "V"
        return "+".join(f"{m}[{NAMES[k]}]" for k, m in self.runs)

    @property
    def length(self) -> int:
        return len(self.seq)

    def value(self, n: int) -> int:
        return self.seq[n - 1] if 1 <= n <= len(self.seq) else TOP

    def multiplicity(self, x: int) -> int:
        """Right adjoint g(x) = #{n >= 1 : f(n) <= x}."""
        return sum(1 for y in self.seq if LE[y][x])

    @property
    def gamma(self) -> int:
        return sum(GAMMA[x] for x in self.seq)

    @property
    def rank(self) -> int:
        return sum(RANK[x] for x in self.seq)

    def is_trivial(self) -> bool:
        return not self.seq


TRIVIAL = Chain()


def chain_le(f: Chain, g: Chain) -> bool:
    """Chain order: f <= g iff g(n) <= f(n) in Q for every n."""
    if g.length < f.length:
        return False
    return all(LE[g.value(n)][f.value(n)] for n in range(1, g.length + 1))


def chain_join(f: Chain, g: Chain) -> Chain:
    n = max(f.length, g.length)
    return Chain(tuple(MEET[f.value(i)][g.value(i)] for i in range(1, n + 1)))


def atom_chain(d: int, i: int) -> Chain:
    """The chain d[l_{i,1} + l_{i,2}]."""
    return Chain((L(i),) * d)


def saturate(g: Mapping[int | str, int]) -> Chain:
    """Least meet-preserving multiplicity function above g, returned as its chain."""
    vals = {x: 0 for x in range(N_ELEMENTS) if x != TOP}
    for k, v in g.items():
        idx = INDEX[k] if isinstance(k, str) else k
        if idx == TOP:
            continue
        if v < 0:
            raise PreconditionError("multiplicities must be >= 0")
        vals[idx] = v
    for x in vals:
        for y in vals:
            if LE[x][y] and vals[x] > vals[y]:
                raise PreconditionError("multiplicity function is not monotone")
    top = max(vals.values(), default=0)
    seq = []
    for n in range(1, top + 1):
        cur = TOP
        for x, v in vals.items():
            if v >= n:
                cur = MEET[cur][x]
        seq.append(cur)
    return Chain(tuple(seq))


def multiplicity_function(f: Chain) -> dict[int, int]:
    return {x: f.multiplicity(x) for x in range(N_ELEMENTS) if x != TOP}


@functools.lru_cache(maxsize=None)
def chain_covers(f0: Chain) -> tuple[Chain, ...]:
    """Chains f with f0 < f and rank(f) = rank(f0) + 1."""
    out = []
    for n in range(1, f0.length + 2):
        cur = f0.value(n)
        for y in covered_by(cur):
            seq = list(f0.seq) + [TOP] * (n - f0.length)
            seq[n - 1] = y
            if n >= 2 and not LE[seq[n - 2]][y]:
                continue
            if n < len(seq) and not LE[y][seq[n]]:
                continue
            c = Chain(tuple(seq))
            if c not in out:
                out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class CoversAndEssentials:
    covers: tuple[Chain, ...]
    essentials: tuple[Chain, ...]


def covers_and_essentials(f0: Chain) -> CoversAndEssentials:
    covers = chain_covers(f0)
    ess = []
    for r in range(len(covers) + 1):
        for sub in itertools.combinations(covers, r):
            j = f0
            for c in sub:
                j = chain_join(j, c)
            if j not in ess:
                ess.append(j)
    return CoversAndEssentials(tuple(covers), tuple(ess))


def interval(f0: Chain, f: Chain) -> list[Chain]:
    """All chains g with f0 <= g <= f."""
    if not chain_le(f0, f):
        raise PreconditionError(f"{f0} is not below {f}")
    n = f.length
    out = []

    def rec(pos: int, prev: int, acc: list):
        if pos > n:
            out.append(Chain(tuple(acc)))
            return
        lo, hi = f.value(pos), f0.value(pos)
        for y in range(N_ELEMENTS):
            if LE[lo][y] and LE[y][hi] and LE[prev][y]:
                acc.append(y)
                rec(pos + 1, y, acc)
                acc.pop()

    rec(1, BOTTOM, [])
    return out


@functools.lru_cache(maxsize=200_000)
def mobius_local(f0: Chain, f: Chain) -> int:
    """Moebius function of the chain poset, by recursion over the full interval [f0, f]."""
    if not chain_le(f0, f):
        raise PreconditionError(f"{f0} is not below {f}")
    if f0 == f:
        return 1
    return -sum(mobius_local(f0, y) for y in interval(f0, f) if y != f)


def chains_above(f0: Chain, gamma_max: int) -> list[Chain]:
    """All chains f >= f0 with gamma(f) <= gamma_max, ordered by (gamma, rank, seq)."""
    out = []

    def rec(pos: int, prev: int, acc: list, g: int):
        if pos > f0.length:
            out.append(Chain(tuple(acc)))
        hi = f0.value(pos)
        rest = sum(GAMMA[z] for z in f0.seq[pos:])
        for y in range(N_ELEMENTS):
            if y == TOP or not LE[y][hi] or not LE[prev][y]:
                continue
            if g + GAMMA[y] + rest > gamma_max:
                continue
            acc.append(y)
            rec(pos + 1, y, acc, g + GAMMA[y])
            acc.pop()

    if f0.gamma <= gamma_max:
        rec(1, BOTTOM, [], 0)
    return sorted(out, key=lambda c: (c.gamma, c.rank, c.seq))


def mobius_table(f0: Chain, gamma_max: int) -> dict[Chain, int]:
    """mu(f0, f) for every f >= f0 with gamma(f) <= gamma_max (the set is closed under going down)."""
    chains = chains_above(f0, gamma_max)
    mu: dict[Chain, int] = {}
    for f in sorted(chains, key=lambda c: c.rank):
        if f == f0:
            mu[f] = 1
            continue
        mu[f] = -sum(v for g, v in mu.items() if g != f and chain_le(g, f))
    return mu


def local_euler_polynomial(f0: Chain, gamma_max: int) -> dict[int, int]:
    """Coefficients of sum_{f >= f0, gamma(f) <= gamma_max} mu(f0, f) z^gamma(f)."""
    out: dict[int, int] = {}
    for f, m in mobius_table(f0, gamma_max).items():
        if m:
            out[f.gamma] = out.get(f.gamma, 0) + m
    return {g: c for g, c in sorted(out.items()) if c}


# -- saturated elements ---------------------------------------------------------

@dataclass(frozen=True)
class SaturatedElement:
    """Finitely supported map closed point -> nontrivial chain."""

    items: tuple[tuple[ClosedPoint, Chain], ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping[ClosedPoint, Chain]) -> "SaturatedElement":
        return cls(tuple(sorted(((p, c) for p, c in d.items() if not c.is_trivial()),
                                key=lambda pc: pc[0].sort_key())))

    @classmethod
    def from_divisors(cls, T: Sequence) -> "SaturatedElement":
        """The element w attached to (T_1..T_4) in U_k: d[l_i + l_i] at each point of T_i."""
        d = {}
        for i, Ti in enumerate(T):
            for p, m in Ti.items:
                if p in d:
                    raise PreconditionError("the divisors T_i must have disjoint supports")
                d[p] = atom_chain(m, i)
        return cls.from_dict(d)

    def as_dict(self) -> dict[ClosedPoint, Chain]:
        return dict(self.items)

    def chain_at(self, p: ClosedPoint) -> Chain:
        for q, c in self.items:
            if q == p:
                return c
        return TRIVIAL

    @property
    def support(self) -> tuple[ClosedPoint, ...]:
        return tuple(p for p, _ in self.items)

    @property
    def gamma(self) -> int:
        return sum(p.degree * c.gamma for p, c in self.items)

    @property
    def rank(self) -> int:
        return sum(p.degree * c.rank for p, c in self.items)

    @property
    def supp(self) -> int:
        return sum(p.degree for p, _ in self.items)

    def occurrences(self, x: int) -> int:
        """m_x: geometric count of chain steps equal to x."""
        return sum(p.degree * c.seq.count(x) for p, c in self.items)

    def __str__(self) -> str:
        if not self.items:
            return "trivial"
        return "; ".join(f"{p}: {c}" for p, c in self.items)


def saturated_le(w: SaturatedElement, x: SaturatedElement) -> bool:
    pts = set(w.support) | set(x.support)
    return all(chain_le(w.chain_at(p), x.chain_at(p)) for p in pts)


@dataclass(frozen=True)
class PairWX:
    w: SaturatedElement
    x: SaturatedElement

    def __post_init__(self):
        for _, c in self.w.items:
            if len(set(c.seq)) != 1 or c.seq[0] not in [L(i) for i in range(4)]:
                raise PreconditionError("w must consist of chains d[l_i + l_i]")
        if not saturated_le(self.w, self.x):
            raise PreconditionError("w must lie below x")

    @property
    def k(self) -> tuple[int, ...]:
        k = [0, 0, 0, 0]
        for p, c in self.w.items:
            k[[L(i) for i in range(4)].index(c.seq[0])] += p.degree * c.length
        return tuple(k)


def mobius_global(pair: PairWX) -> int:
    out = 1
    for p in set(pair.w.support) | set(pair.x.support):
        out *= mobius_local(pair.w.chain_at(p), pair.x.chain_at(p))
        if out == 0:
            return 0
    return out


@dataclass(frozen=True)
class CombFunctions:
    gamma: int
    rank: int
    supp: int
    kappa: int
    E: int | None


def comb_functions(x: SaturatedElement, w: SaturatedElement | None = None,
                   k: Sequence[int] | None = None) -> CombFunctions:
    g, r, s = x.gamma, x.rank, x.supp
    E = None
    if k is None and w is not None:
        k = PairWX(w, x).k
    if k is not None:
        E = (4 * x.occurrences(BOTTOM)
             + 3 * sum(x.occurrences(line(i, j)) for i in range(4) for j in (1, 2))
             + 2 * (x.occurrences(V1) + x.occurrences(V2))
             + 2 * sum(x.occurrences(L(i)) for i in range(4))
             - 2 * sum(k))
    return CombFunctions(g, r, s, 2 * g - r - 2 * s, E)


def enumerate_saturated_above(w: SaturatedElement, gamma_max: int, deg_max: int, q: int) -> Iterator[SaturatedElement]:
    """All saturated x >= w supported on points of degree <= deg_max with gamma(x) <= gamma_max."""
    if any(p.degree > deg_max for p in w.support):
        return
    pts = points_up_to(q, deg_max)
    options = []
    base_gamma = w.gamma
    for p in pts:
        f0 = w.chain_at(p)
        budget = (gamma_max - base_gamma) // p.degree + f0.gamma
        options.append([(c, p.degree * (c.gamma - f0.gamma)) for c in chains_above(f0, budget)])

    def rec(i: int, extra: int, acc: dict):
        if i == len(pts):
            yield SaturatedElement.from_dict(acc)
            return
        for c, dg in options[i]:
            if base_gamma + extra + dg > gamma_max:
                continue
            acc[pts[i]] = c
            yield from rec(i + 1, extra + dg, acc)
            del acc[pts[i]]

    if base_gamma > gamma_max:
        return
    yield from rec(0, 0, {})
