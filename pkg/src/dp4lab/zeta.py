"""Euler products over closed points of P^1: the Tamagawa constant, the virtual height zeta function
and its residue, coefficient cross-checks, the Manin-type predictor and the Betti-bound constant.

Products truncated at small degree are exact rationals.  Past a size threshold the product is
evaluated in high-precision floating point (mpmath) and reported with its decimal value only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath

from .ffpoly import ConfigurationError, count_closed_points
from .picard import ShrunkCone, alpha_constant, ehrhart_count

DEFAULT_D = 25
#: |log((1-x)^6 (1+6x+x^2))| <= C_LOG * x^2 for 0 < x <= 1/2
C_LOG = 21
#: exact products are attempted while sum_d d * N_d stays below this
EXACT_LIMIT = 4000
_DPS = 60


class DomainError(ValueError):
    """A numeric series was evaluated outside its region of convergence."""


def surface_point_count(q: int, d: int) -> int:
    if d < 1:
        raise ValueError("d must be >= 1")
    return q ** (2 * d) + 6 * q**d + 1


def closed_point_bound(q: int, d: int) -> float:
    return q**d / d + q ** (d / 2)


def _local_tamagawa(q: int, d: int) -> Fraction:
    """(1 - q^-d)^6 #S(F_{q^d}) / q^{2d}."""
    x = Fraction(1, q**d)
    return (1 - x) ** 6 * surface_point_count(q, d) / q ** (2 * d)


def _log_tail(q: int, D: int, C: float = C_LOG) -> float:
    """sum_{d > D} (q^d/d + q^{d/2}) * C * q^{-2d}."""
    tot, d = 0.0, D + 1
    while True:
        term = C * closed_point_bound(q, d) * q ** (-2.0 * d)
        tot += term
        if term < 1e-30 * max(tot, 1e-300):
            return tot
        d += 1


@dataclass(frozen=True)
class EulerValue:
    q: int
    D: int
    exact: Fraction | None
    decimal: mpmath.mpf
    tail_bound: float

    def to_dict(self) -> dict:
        return {"q": self.q, "D": self.D,
                "value_num": None if self.exact is None else self.exact.numerator,
                "value_den": None if self.exact is None else self.exact.denominator,
                "value_decimal": mpmath.nstr(self.decimal, 30),
                "tail_bound": self.tail_bound}


class EulerProduct:
    """prefactor * prod_{d <= D} factor(d)^{N_d}, accumulated degree by degree."""

    def __init__(self, q: int, factor: Callable[[int, int], Fraction], prefactor: Fraction = Fraction(1),
                 C: float = C_LOG):
        self.q, self.factor, self.prefactor, self.C = q, factor, Fraction(prefactor), C
        self.D = 0
        self._exact: Fraction | None = Fraction(1)
        self._size = 0
        with mpmath.workdps(_DPS):
            self._log = mpmath.mpf(0)

    def extend(self) -> "EulerProduct":
        d = self.D + 1
        n = count_closed_points(self.q, d)
        f = self.factor(self.q, d)
        with mpmath.workdps(_DPS):
            self._log += n * mpmath.log(mpmath.mpf(f.numerator) / f.denominator)
        self._size += d * n
        if self._exact is not None and self._size <= EXACT_LIMIT:
            self._exact *= f**n
        else:
            self._exact = None
        self.D = d
        return self

    def extend_to(self, D: int) -> "EulerProduct":
        while self.D < D:
            self.extend()
        return self

    @property
    def value(self) -> EulerValue:
        with mpmath.workdps(_DPS):
            pre = mpmath.mpf(self.prefactor.numerator) / self.prefactor.denominator
            dec = pre * mpmath.exp(self._log)
        exact = None if self._exact is None else self.prefactor * self._exact
        T = _log_tail(self.q, self.D, self.C)
        return EulerValue(self.q, self.D, exact, dec, float(abs(dec)) * math.expm1(T))


def tamagawa_product(q: int) -> EulerProduct:
    pre = Fraction(q**2) / (1 - Fraction(1, q)) ** 6
    return EulerProduct(q, _local_tamagawa, pre)


def tamagawa(q: int, D: int = DEFAULT_D) -> EulerValue:
    if D < 0:
        raise ValueError("D must be >= 0")
    return tamagawa_product(q).extend_to(D).value


# -- virtual height zeta function ---------------------------------------------------

def _check_t(q: int, t: Sequence) -> tuple[Fraction, ...]:
    t = tuple(Fraction(x) for x in t)
    if len(t) != 4:
        raise ValueError("t must have 4 entries")
    if any(abs(x) >= q for x in t):
        raise DomainError("the local series converges only for |t_i| < q")
    return t


def virtual_zeta_factor(q: int, d: int, t: Sequence) -> Fraction:
    """Local factor at a degree-d point, summed in closed form (t numeric)."""
    t = _check_t(q, t)
    x = Fraction(1, q**d)
    out = (1 - x) ** 3 * (1 + 3 * x)
    for ti in t:
        r = ti**d * x
        out += r / (1 - r) * (1 - x) ** 3 * (1 + x)
    return out


Series = dict  # monomial exponent 4-tuple -> Fraction


def virtual_zeta_factor_formal(q: int, d: int, caps: Sequence[int]) -> Series:
    """Local factor as a polynomial in t_1..t_4, keeping exponents e_i <= caps[i]."""
    x = Fraction(1, q**d)
    out: Series = {(0, 0, 0, 0): 1 - 6 * x**2 + 8 * x**3 - 3 * x**4}
    for i in range(4):
        for m in range(1, caps[i] // d + 1):
            e = [0, 0, 0, 0]
            e[i] = d * m
            out[tuple(e)] = Fraction(q) ** (d * m) * (x ** (2 * m) - 2 * x ** (2 * m + 1)
                                                     + 2 * x ** (2 * m + 3) - x ** (2 * m + 4))
    return out


def series_mul(A: Series, B: Series, caps: Sequence[int]) -> Series:
    out: Series = {}
    for ea, ca in A.items():
        for eb, cb in B.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if any(v > c for v, c in zip(e, caps)):
                continue
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def format_series(S: Series) -> list[str]:
    return [f"{c} * t^{e}" for e, c in sorted(S.items())]


def truncated_zeta(q: int, deg_max: int, caps: Sequence[int]) -> Series:
    """prod over closed points of degree <= deg_max of the formal local factors."""
    acc: Series = {(0, 0, 0, 0): Fraction(1)}
    for d in range(1, deg_max + 1):
        f = virtual_zeta_factor_formal(q, d, caps)
        for _ in range(count_closed_points(q, d)):
            acc = series_mul(acc, f, caps)
    return acc


# -- residue -----------------------------------------------------------------------

def residue_factor_closed(q: int, d: int) -> Fraction:
    x = Fraction(1, q**d)
    return (1 - x) ** 6 * (1 + 6 * x + x**2)


def residue_factor_abel(q: int, d: int) -> Fraction:
    """prod_i (1 - r_i) * factor(t) at t = (1,1,1,1), with r_i = (t_i/q)^d."""
    x = Fraction(1, q**d)
    return (1 - x) ** 4 * virtual_zeta_factor(q, d, (1, 1, 1, 1))


@dataclass(frozen=True)
class ResidueComparison:
    q: int
    D: int
    closed_form: EulerValue
    abel_limit: EulerValue
    per_factor_exact: bool

    @property
    def difference(self):
        a, b = self.closed_form, self.abel_limit
        if a.exact is not None and b.exact is not None:
            return a.exact - b.exact
        return a.decimal - b.decimal


def residue_product(q: int, abel: bool = False) -> EulerProduct:
    pre = 1 / (1 - Fraction(1, q)) ** 4
    return EulerProduct(q, residue_factor_abel if abel else residue_factor_closed, pre)


def residue_compare(q: int, D: int = DEFAULT_D, exact_degrees: int = 4) -> ResidueComparison:
    """Residue of the virtual height zeta function in closed form and through the normalized product."""
    if D < 0:
        raise ValueError("D must be >= 0")
    ok = all(residue_factor_closed(q, d) == residue_factor_abel(q, d)
             for d in range(1, min(D, exact_degrees) + 1))
    return ResidueComparison(q, D, residue_product(q).extend_to(D).value,
                             residue_product(q, abel=True).extend_to(D).value, ok)


# -- Moebius coefficient comparison ------------------------------------------------

@dataclass(frozen=True)
class CoefficientComparison:
    q: int
    k: tuple[int, ...]
    deg_max: int
    poset_sum: Fraction
    product_coefficient: Fraction

    @property
    def difference(self) -> Fraction:
        return self.poset_sum - self.product_coefficient


def mobius_coefficient_compare(q: int, k: Sequence[int], deg_max: int,
                               series_deg_max: int | None = None) -> CoefficientComparison:
    """Poset-side sum q^{sum k} sum mu q^{-gamma} against the t^k coefficient of the Euler product."""
    from .strata import main_term_virtual

    if series_deg_max is None:
        series_deg_max = deg_max
    if series_deg_max != deg_max:
        raise ConfigurationError("both sides must use the same degree truncation")
    k = tuple(k)
    poset = Fraction(q) ** sum(k) * main_term_virtual(q, k, None, deg_max)
    coeff = truncated_zeta(q, deg_max, k).get(k, Fraction(0))
    return CoefficientComparison(q, k, deg_max, poset, coeff)


def poset_sum_untruncated(q: int, m: int, D: int = DEFAULT_D) -> mpmath.mpf:
    """Coefficient of (t_1..t_4)^m in the full virtual zeta function: points of degree <= m enter
    exactly through the poset sum, higher-degree points only through their constant terms."""
    from .strata import main_term_virtual

    head = Fraction(q) ** (4 * m) * main_term_virtual(q, (m,) * 4, None, m)
    with mpmath.workdps(_DPS):
        tail = mpmath.mpf(0)
        for d in range(m + 1, D + 1):
            f = virtual_zeta_factor(q, d, (0, 0, 0, 0))
            tail += count_closed_points(q, d) * mpmath.log(mpmath.mpf(f.numerator) / f.denominator)
        return mpmath.mpf(head.numerator) / head.denominator * mpmath.exp(tail)


# -- predictor and constants -------------------------------------------------------

@dataclass(frozen=True)
class PredictorReport:
    q: int
    d: int
    eps: Fraction
    alpha: Fraction
    alpha_mode: str
    tau: EulerValue
    predicted: mpmath.mpf
    ehrhart_form: mpmath.mpf | None
    notes: str

    def to_dict(self) -> dict:
        return {"q": self.q, "d": self.d, "eps": str(self.eps), "alpha": str(self.alpha),
                "alpha_mode": self.alpha_mode, "tau": mpmath.nstr(self.tau.decimal, 20),
                "tau_D": self.tau.D, "predicted": mpmath.nstr(self.predicted, 20),
                "ehrhart_form": None if self.ehrhart_form is None else mpmath.nstr(self.ehrhart_form, 20),
                "notes": self.notes}


def manin_predictor(q: int, eps: Fraction | int = 0, d: int = 1, D: int = DEFAULT_D,
                    ehrhart_max: int = 30, dilation: int = 30) -> PredictorReport:
    """(1 - 1/q)^-1 alpha tau q^d d^5, with the Ehrhart-sum form for d <= ehrhart_max."""
    eps = Fraction(eps)
    cone = None if eps == 0 else ShrunkCone(eps)
    al = alpha_constant(cone, mode="exact" if cone is None else "lattice", dilation=dilation)
    tau = tamagawa(q, D)
    with mpmath.workdps(_DPS):
        a = mpmath.mpf(al.value.numerator) / al.value.denominator
        pred = a * tau.decimal * mpmath.mpf(q) ** d * mpmath.mpf(d) ** 5 / (1 - mpmath.mpf(1) / q)
        ehr = None
        if d <= ehrhart_max:
            ehr = mpmath.mpf(0)
            prev = 0
            for h in range(d + 1):
                cur = ehrhart_count(cone, h)
                ehr += (cur - prev) * tau.decimal * mpmath.mpf(q) ** h
                prev = cur
    return PredictorReport(q, d, eps, al.value, al.mode, tau, pred, ehr,
                           "leading-order form; the Ehrhart-sum form is reported for comparison only")


def betti_constant(n: int, degrees: Sequence[int]) -> int:
    """(max(d_r, 2) + 2)^(2n + 4 + sum d_i) for a complete intersection of the given degrees."""
    degrees = list(degrees)
    if not degrees or any(b < a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be a nonempty nondecreasing list")
    return (max(degrees[-1], 2) + 2) ** (2 * n + 4 + sum(degrees))
