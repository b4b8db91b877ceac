"""Finite fields, binary forms on P^1, closed points, divisors and incidence rows.

Field elements are stored as integer *codes*: the base-p digits of a code are
the coefficients of the element in the polynomial basis of F_p[x]/(modulus).
For prime fields the code is simply the residue.  The canonical element order
(0, 1, g, g^2, ...) is kept separately in ``FieldTable.order``.

Binary forms are homogeneous in (u, v); a form of degree n is the coefficient
tuple (c_0, ..., c_n) of sum c_j u^(n-j) v^j.  The point at infinity is the
form v.  Dehomogenizing at v = 1 gives a polynomial in u whose coefficient of
u^(n-j) is c_j.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

DEFAULT_Q_BOUND = 1 << 16


class ConfigurationError(ValueError):
    """Unsupported field size or malformed point configuration."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ConfigurationError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ConfigurationError(f"q={q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- arithmetic in F_p[x] used only to build extension-field tables ---------

def _pmod_mul(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Multiply low-first polynomials over F_p modulo a monic ``mod``."""
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return (prod + [0] * e)[:e]


def _find_primitive_modulus(p: int, e: int) -> list[int]:
    """First monic degree-e polynomial over F_p (lexicographic) whose root x generates F_{p^e}^*."""
    q = p**e
    factors = _prime_factors(q - 1)
    for tail in itertools.product(range(p), repeat=e):
        mod = list(reversed(tail)) + [1]  # low-first, monic
        if mod[0] == 0:
            continue
        # order of x must be exactly q - 1 (this also forces irreducibility)
        x = [0, 1] + [0] * (e - 2) if e > 1 else [0]

        def xpow(n: int) -> list[int]:
            result = [1] + [0] * (e - 1)
            base = x[:]
            while n:
                if n & 1:
                    result = _pmod_mul(result, base, mod, p)
                base = _pmod_mul(base, base, mod, p)
                n >>= 1
            return result

        one = [1] + [0] * (e - 1)
        if xpow(q - 1) != one:
            continue
        if all(xpow((q - 1) // r) != one for r in factors):
            return mod
    raise ConfigurationError(f"no primitive polynomial of degree {e} over F_{p}")


class FieldTable:
    """Arithmetic tables for F_q with q = p^e."""

    def __init__(self, q: int, bound: int = DEFAULT_Q_BOUND):
        if q > bound:
            raise ConfigurationError(f"q={q} exceeds the configured bound {bound}")
        self.p, self.e = _factor_prime_power(q)
        self.q = q
        p, e = self.p, self.e
        if e == 1:
            self.modulus = None
            factors = _prime_factors(q - 1)
            self.gen = next(g for g in range(1, q) if q == 2 or
                            all(pow(g, (q - 1) // r, q) != 1 for r in factors))
        else:
            self.modulus = tuple(_find_primitive_modulus(p, e))
            self.gen = p  # the class of x
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        if e == 1:
            v = 1
            for k in range(q - 1):
                exp[k] = v
                v = v * self.gen % q
        else:
            mod = list(self.modulus)
            v = [1] + [0] * (e - 1)
            x = [0, 1] + [0] * (e - 2)
            for k in range(q - 1):
                exp[k] = sum(d * p**i for i, d in enumerate(v))
                v = _pmod_mul(v, x, mod, p)
        exp[q - 1:2 * (q - 1)] = exp[: q - 1]
        for k in range(q - 1):
            log[exp[k]] = k
        self._exp = exp
        self._log = log
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        self.order: tuple[int, ...] = (0,) + tuple(self._exp_l[: q - 1])
        self.rank = {c: i for i, c in enumerate(self.order)}
        self._add_tab: np.ndarray | None = None
        self._mul_tab: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"FieldTable(q={self.q})"

    # scalar arithmetic on codes
    def add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        out, scale = 0, 1
        for _ in range(self.e):
            out += ((x % self.p + y % self.p) % self.p) * scale
            x //= self.p
            y //= self.p
            scale *= self.p
        return out

    def neg(self, x: int) -> int:
        if self.e == 1:
            return (-x) % self.p
        if self.p == 2:
            return x
        out, scale = 0, 1
        for _ in range(self.e):
            out += ((-(x % self.p)) % self.p) * scale
            x //= self.p
            scale *= self.p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp_l[self._log_l[x] + self._log_l[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._exp_l[(self.q - 1 - self._log_l[x]) % (self.q - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            return 1 if n == 0 else 0
        return self._exp_l[(self._log_l[x] * n) % (self.q - 1)]

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    def element_order(self, x: int) -> int:
        """Multiplicative order, computed by repeated multiplication."""
        if x == 0:
            raise ValueError("0 has no multiplicative order")
        n, y = 1, x
        while y != 1:
            y = self.mul(y, x)
            n += 1
        return n

    # vectorized helpers for small q
    @property
    def add_table(self) -> np.ndarray:
        if self._add_tab is None:
            c = np.arange(self.q)
            if self.e == 1:
                self._add_tab = (c[:, None] + c[None, :]) % self.p
            elif self.p == 2:
                self._add_tab = c[:, None] ^ c[None, :]
            else:
                tab = np.zeros((self.q, self.q), dtype=np.int64)
                scale = 1
                for _ in range(self.e):
                    dx = (c // scale) % self.p
                    tab += ((dx[:, None] + dx[None, :]) % self.p) * scale
                    scale *= self.p
                self._add_tab = tab
        return self._add_tab

    @property
    def mul_table(self) -> np.ndarray:
        if self._mul_tab is None:
            c = np.arange(self.q)
            lg = self._log
            tab = self._exp[(lg[:, None] + lg[None, :]) % (self.q - 1)]
            tab[0, :] = 0
            tab[:, 0] = 0
            self._mul_tab = tab
        return self._mul_tab

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add_table[a, b]

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.add_table.argmin(axis=1)[a]  # the unique y with a + y = 0

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over F_q for integer code arrays (2-D)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = self.vadd(out, self.mul_table[a[:, k][:, None], b[k][None, :]])
        return out

    def span(self, basis: np.ndarray) -> np.ndarray:
        """All q^r vectors of the row span of an r x n basis (rows in canonical coefficient order)."""
        basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
        r = basis.shape[0]
        if r == 0:
            return np.zeros((1, basis.shape[1]), dtype=np.int64)
        coeffs = np.array(list(itertools.product(self.order, repeat=r)), dtype=np.int64)
        return self.matmul(coeffs, basis)


@functools.lru_cache(maxsize=None)
def field(q: int) -> FieldTable:
    """Shared FieldTable for F_q (tables are immutable after construction)."""
    return FieldTable(q)


# -- linear algebra over F_q --------------------------------------------------

def rref(rows: np.ndarray, F: FieldTable) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q; returns (nonzero rows, pivot columns)."""
    m = [list(map(int, r)) for r in np.asarray(rows, dtype=np.int64)]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = F.neg(m[i][c])
                m[i] = [F.add(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return np.array(m[:r], dtype=np.int64).reshape(r, ncols), pivots


def rank(rows: np.ndarray, F: FieldTable) -> int:
    if np.size(rows) == 0:
        return 0
    return len(rref(rows, F)[1])


def nullspace(rows: np.ndarray, ncols: int, F: FieldTable) -> np.ndarray:
    """Basis (as rows) of {x : rows @ x = 0}."""
    if np.size(rows) == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(rows, F)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = F.neg(int(r[i, f]))
    return basis


# -- univariate polynomials (low-first code lists) ---------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], F: FieldTable) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int], F: FieldTable) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    inv = F.inv(b[-1])
    quo = [0] * (len(a) - len(b) + 1)
    rem = a[:]
    for k in range(len(a) - len(b), -1, -1):
        c = F.mul(rem[k + len(b) - 1], inv)
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = F.sub(rem[k + j], F.mul(c, y))
    return _trim(quo), _trim(rem[: len(b) - 1])


def poly_monic(a: Sequence[int], F: FieldTable) -> list[int]:
    a = _trim(list(a))
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(inv, x) for x in a]


def poly_gcd(a: Sequence[int], b: Sequence[int], F: FieldTable) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_divmod(a, b, F)[1]
    return poly_monic(a, F)


def poly_powmod(base: Sequence[int], n: int, mod: Sequence[int], F: FieldTable) -> list[int]:
    result = [1]
    base = poly_divmod(base, mod, F)[1]
    while n:
        if n & 1:
            result = poly_divmod(poly_mul(result, base, F), mod, F)[1]
        base = poly_divmod(poly_mul(base, base, F), mod, F)[1]
        n >>= 1
    return result


def is_irreducible(f: Sequence[int], F: FieldTable) -> bool:
    """Ben-Or test for a monic low-first polynomial of degree >= 1."""
    f = _trim(list(f))
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = poly_powmod(h, F.q, f, F)
        diff = _trim([F.sub(a, b) for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(poly_gcd(f, diff, F)) > 1:
            return False
    return True


# -- binary forms, closed points, divisors -----------------------------------

@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form sum c_j u^(n-j) v^j over F_q."""

    q: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def affine(self) -> list[int]:
        """Dehomogenization at v = 1 as a low-first polynomial in u."""
        return _trim(list(reversed(self.coeffs)))

    def order_at_infinity(self) -> int:
        """Power of v dividing the form (number of leading zero coefficients)."""
        n = 0
        for c in self.coeffs:
            if c:
                break
            n += 1
        return n

    def scale(self, lam: int) -> "BinaryForm":
        F = field(self.q)
        return BinaryForm(self.q, tuple(F.mul(lam, c) for c in self.coeffs))

    def evaluate(self, u: int, v: int) -> int:
        F = field(self.q)
        n = self.degree
        total = 0
        for j, c in enumerate(self.coeffs):
            total = F.add(total, F.mul(c, F.mul(F.pow(u, n - j), F.pow(v, j))))
        return total


def combine(lam: tuple[int, int], f1: BinaryForm, f2: BinaryForm) -> BinaryForm:
    """The form lam_1 f1 + lam_2 f2 (same degree)."""
    F = field(f1.q)
    return BinaryForm(f1.q, tuple(F.add(F.mul(lam[0], x), F.mul(lam[1], y))
                                  for x, y in zip(f1.coeffs, f2.coeffs)))


@dataclass(frozen=True)
class ClosedPoint:
    """Galois orbit on P^1(F_q-bar): monic irreducible in u, or infinity (the form v)."""

    q: int
    coeffs: tuple[int, ...]  # monic, leading first; empty tuple for infinity

    @property
    def is_infinity(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return 1 if self.is_infinity else len(self.coeffs) - 1

    def form(self) -> BinaryForm:
        if self.is_infinity:
            return BinaryForm(self.q, (0, 1))
        return BinaryForm(self.q, self.coeffs)

    def affine(self) -> list[int]:
        return list(reversed(self.coeffs))

    def sort_key(self) -> tuple:
        F = field(self.q)
        if self.is_infinity:
            return (1, 1, ())
        if self.degree == 1:
            return (1, 0, (F.rank[F.neg(self.coeffs[1])],))
        return (self.degree, 0, tuple(F.rank[c] for c in self.coeffs[1:]))

    def __lt__(self, other: "ClosedPoint") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.is_infinity else ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, q: int, text: str) -> "ClosedPoint":
        text = text.strip()
        if text == "inf":
            return cls(q, ())
        coeffs = tuple(int(x) for x in text.split(","))
        pt = cls(q, coeffs)
        if coeffs[0] != 1 or not is_irreducible(pt.affine(), field(q)):
            raise PreconditionError(f"{text!r} is not a monic irreducible polynomial over F_{q}")
        return pt


def rational_point(q: int, x: int | None) -> ClosedPoint:
    """The degree-1 point u - x v, or infinity for x = None."""
    if x is None:
        return ClosedPoint(q, ())
    return ClosedPoint(q, (1, field(q).neg(x)))


@functools.lru_cache(maxsize=None)
def closed_points(q: int, d: int) -> tuple[ClosedPoint, ...]:
    """All closed points of degree d in canonical order."""
    F = field(q)
    if d < 1:
        raise PreconditionError("closed point degree must be >= 1")
    if d == 1:
        return tuple(rational_point(q, x) for x in F.order) + (ClosedPoint(q, ()),)
    out = []
    for tail in itertools.product(F.order, repeat=d):
        coeffs = (1,) + tail
        if tail[-1] == 0:
            continue
        if is_irreducible(list(reversed(coeffs)), F):
            out.append(ClosedPoint(q, coeffs))
    return tuple(out)


def points_up_to(q: int, d: int) -> tuple[ClosedPoint, ...]:
    return tuple(p for e in range(1, d + 1) for p in closed_points(q, e))


def count_closed_points(q: int, d: int) -> int:
    """Number of closed points of degree d (necklace formula, plus infinity at d = 1)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(d // e) * q**e
    return total // d + (1 if d == 1 else 0)


def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


@dataclass(frozen=True)
class Divisor:
    """Effective divisor on P^1: sorted (point, multiplicity) pairs."""

    items: tuple[tuple[ClosedPoint, int], ...] = ()

    @classmethod
    def from_dict(cls, mults: dict) -> "Divisor":
        return cls(tuple(sorted(((p, m) for p, m in mults.items() if m > 0),
                                key=lambda pm: pm[0].sort_key())))

    @property
    def degree(self) -> int:
        return sum(p.degree * m for p, m in self.items)

    @property
    def support(self) -> frozenset:
        return frozenset(p for p, _ in self.items)

    def mult(self, point: ClosedPoint) -> int:
        for p, m in self.items:
            if p == point:
                return m
        return 0

    def disjoint(self, other: "Divisor") -> bool:
        return not (self.support & other.support)

    def __add__(self, other: "Divisor") -> "Divisor":
        d = dict(self.items)
        for p, m in other.items:
            d[p] = d.get(p, 0) + m
        return Divisor.from_dict(d)

    def __str__(self) -> str:
        if not self.items:
            return "0"
        return " + ".join(f"{m}*[{p}]" for p, m in self.items)


class WholeCurve:
    """Sentinel: both forms vanish identically."""

    def __repr__(self) -> str:
        return "WholeCurve"


WHOLE_CURVE = WholeCurve()


@functools.lru_cache(maxsize=None)
def divisors_of_degree(q: int, n: int) -> tuple[Divisor, ...]:
    """All effective divisors of degree n, in a deterministic order."""
    pts = points_up_to(q, n) if n > 0 else ()
    out: list[Divisor] = []

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(Divisor(tuple(acc)))
            return
        for idx in range(start, len(pts)):
            pt = pts[idx]
            d = pt.degree
            for m in range(1, remaining // d + 1):
                acc.append((pt, m))
                rec(idx + 1, remaining - m * d, acc)
                acc.pop()

    rec(0, n, [])
    return tuple(out)


def enumerate_Uk(q: int, k: Sequence[int], max_point_degree: int | None = None) -> Iterator[tuple[Divisor, ...]]:
    """Tuples (T_1..T_4) with deg T_i = k_i and pairwise disjoint supports."""
    if any(x < 0 for x in k):
        raise PreconditionError("k_i must be >= 0")
    pools = []
    for ki in k:
        divs = divisors_of_degree(q, ki)
        if max_point_degree is not None:
            divs = tuple(D for D in divs if all(p.degree <= max_point_degree for p, _ in D.items))
        pools.append(divs)

    def rec(i: int, used: frozenset, acc: list):
        if i == len(pools):
            yield tuple(acc)
            return
        for D in pools[i]:
            if D.support & used:
                continue
            acc.append(D)
            yield from rec(i + 1, used | D.support, acc)
            acc.pop()

    yield from rec(0, frozenset(), [])


def factor_form(f: BinaryForm) -> Divisor:
    """Divisor of zeros of a nonzero binary form (trial division by closed points)."""
    if f.is_zero:
        raise PreconditionError("the zero form has no divisor")
    F = field(f.q)
    mults: dict[ClosedPoint, int] = {}
    n_inf = f.order_at_infinity()
    if n_inf:
        mults[ClosedPoint(f.q, ())] = n_inf
    g = poly_monic(f.affine(), F)
    d = 1
    while len(g) - 1 >= d:
        if 2 * d > len(g) - 1:
            # what remains is irreducible
            mults[ClosedPoint(f.q, tuple(reversed(g)))] = 1
            break
        for pt in closed_points(f.q, d):
            if pt.is_infinity:
                continue
            pa = pt.affine()
            while len(g) - 1 >= d:
                quo, rem = poly_divmod(g, pa, F)
                if rem:
                    break
                g = quo
                mults[pt] = mults.get(pt, 0) + 1
        d += 1
    return Divisor.from_dict(mults)


def gcd_forms(f: BinaryForm, g: BinaryForm) -> Divisor | WholeCurve:
    """Greatest common divisor of two binary forms as a divisor on P^1."""
    if f.is_zero and g.is_zero:
        return WHOLE_CURVE
    if f.is_zero:
        return factor_form(g)
    if g.is_zero:
        return factor_form(f)
    F = field(f.q)
    n_inf = min(f.order_at_infinity(), g.order_at_infinity())
    aff = poly_gcd(f.affine(), g.affine(), F)
    D = factor_form(BinaryForm(f.q, tuple(reversed(aff)))) if len(aff) > 1 else Divisor()
    if n_inf:
        D = D + Divisor(((ClosedPoint(f.q, ()), n_inf),))
    return D


def is_nowhere_vanishing(pair: Sequence[BinaryForm]) -> bool:
    """The two coordinate forms share no root on P^1 (and are not both zero)."""
    res = gcd_forms(pair[0], pair[1])
    return res is not WHOLE_CURVE and res.degree == 0


# -- the blown-up point configuration ----------------------------------------

def _functional(q: int, x: int | None) -> tuple[int, int]:
    """Linear functional on F_q^2 whose kernel is the line through (x, 1) (or (1, 0) for infinity)."""
    if x is None:
        return (0, 1)
    return (1, field(q).neg(x))


@dataclass(frozen=True)
class PointConfig:
    """Four points (p_i, p_i') of P^1 x P^1; entries are field codes or None for infinity."""

    q: int
    p: tuple
    pprime: tuple

    def __post_init__(self):
        for side in (self.p, self.pprime):
            if len(side) != 4 or len(set(side)) != 4:
                raise ConfigurationError("the four points on each factor must be pairwise distinct")
            for x in side:
                if x is not None and not (0 <= x < self.q):
                    raise ConfigurationError(f"{x} is not an element code of F_{self.q}")

    def functional(self, i: int, side: int) -> tuple[int, int]:
        """phi_{i,side}: the functional cutting out the line l_{i,side} (side 1 or 2, i = 0..3)."""
        return _functional(self.q, (self.p if side == 1 else self.pprime)[i])

    def is_del_pezzo(self) -> bool:
        """No (1,1)-curve passes through all four points."""
        F = field(self.q)
        rows = []
        for x, y in zip(self.p, self.pprime):
            hx = (1, 0) if x is None else (x, 1)
            hy = (1, 0) if y is None else (y, 1)
            rows.append([F.mul(a, b) for a in hx for b in hy])
        return rank(np.array(rows), F) == 4


@functools.lru_cache(maxsize=None)
def default_config(q: int) -> PointConfig:
    """First four points of P^1(F_q) in canonical order (infinity last); the second factor
    uses the first reordering of the same points giving a genuine del Pezzo surface, or
    the identity when none exists (q = 3)."""
    F = field(q)
    pts = (list(F.order) + [None])[:4]
    if len(pts) < 4 or q < 3:
        raise ConfigurationError("surface-dependent computations need q >= 3")
    for perm in itertools.permutations(pts):
        cfg = PointConfig(q, tuple(pts), tuple(perm))
        if cfg.is_del_pezzo():
            return cfg
    return PointConfig(q, tuple(pts), tuple(pts))


def phi(cfg: PointConfig, i: int, side: int, pair: Sequence[BinaryForm]) -> BinaryForm:
    return combine(cfg.functional(i, side), pair[0], pair[1])


def intersection_multiplicity(s: Sequence[BinaryForm], t: Sequence[BinaryForm], i: int,
                              cfg: PointConfig | None = None) -> Divisor | WholeCurve:
    """gcd(phi_{i,1}(s), phi_{i,2}(t)) for nowhere-vanishing section pairs s, t (i = 0..3)."""
    cfg = cfg or default_config(s[0].q)
    if not is_nowhere_vanishing(s) or not is_nowhere_vanishing(t):
        raise PreconditionError("s and t must be nowhere vanishing")
    return gcd_forms(phi(cfg, i, 1, s), phi(cfg, i, 2, t))


# -- incidence rows -----------------------------------------------------------

def _remainder_rows(n: int, pt: ClosedPoint, m: int, F: FieldTable) -> np.ndarray:
    """(m*d) x (n+1) matrix R with R @ c = coefficients of (form c) mod pi^m."""
    d = pt.degree
    rows = np.zeros((m * d, n + 1), dtype=np.int64)
    if pt.is_infinity:
        for j in range(min(m, n + 1)):
            rows[j, j] = 1
        return rows
    pm = [1]
    for _ in range(m):
        pm = poly_mul(pm, pt.affine(), F)
    for j in range(n + 1):
        mono = [0] * (n - j) + [1]  # u^(n-j)
        rem = poly_divmod(mono, pm, F)[1]
        for r, c in enumerate(rem):
            rows[r, j] = c
    return rows


@functools.lru_cache(maxsize=4096)
def _remainder_rows_cached(n: int, pt: ClosedPoint, m: int) -> np.ndarray:
    out = _remainder_rows(n, pt, m, field(pt.q))
    out.setflags(write=False)
    return out


def divisibility_rows(n: int, functional: tuple[int, int], pi: ClosedPoint, m: int) -> np.ndarray:
    """Rows on the 2(n+1) coefficients of a pair (F_1, F_2) of degree-n forms whose joint kernel is
    {functional(F) = l_1 F_1 + l_2 F_2 divisible by pi^m}."""
    if m < 1:
        raise PreconditionError("multiplicity must be >= 1")
    F = field(pi.q)
    R = _remainder_rows_cached(n, pi, m)
    return np.hstack([F.vmul(np.full_like(R, functional[0]), R),
                      F.vmul(np.full_like(R, functional[1]), R)])
