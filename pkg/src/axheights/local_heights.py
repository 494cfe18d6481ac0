"""Local height functions for y^2 = x^3 + a*x.

Non-archimedean heights are exact rational multiples of log(p), read off a
closed-form case split keyed on reduction type; they are only converted to
floating point at final summation.  The archimedean height is Tate's
rapidly converging series.  For a < 0 the series runs on the curve itself,
with the first term rewritten through x^4 z = (x^2 - a)^2 so that a small
or negative x never divides by zero.  For a > 0 the real locus contains
(0, 0), so the series runs on the model translated by sqrt(a),

    y^2 = x^3 - 3*sqrt(a)*x^2 + 4*a*x - 2*a^(3/2),

whose points all have x' >= sqrt(a); translation does not change the
archimedean local height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import factorize, legendre_symbol, log_abs, ord_int, ord_p
from .curve import Curve, Point, x_after_doubling
from .errors import NotMinimal, TorsionPoint, ZeroX

DEFAULT_TERMS = 40

_CORR_NONE = "otherwise"


@dataclass(frozen=True)
class ReductionData:
    """Reduction type of the curve at one prime."""

    prime: int
    kodaira: str  # "I0", "II", "III", "I0*", "I2*", "I3*", "III*"
    tamagawa: int
    ord_delta: int
    tate_step: int
    trace: str

    def __str__(self) -> str:
        return (
            f"p={self.prime}: {self.kodaira}, c={self.tamagawa}, "
            f"ord_p(disc)={self.ord_delta} [{self.trace}]"
        )


@dataclass(frozen=True)
class NonArchLocalHeight:
    """lambda_p(P) = coefficient * log(prime), exactly."""

    prime: int
    coefficient: Fraction
    correction: Fraction
    correction_tag: str

    @property
    def value(self) -> float:
        return float(self.coefficient) * math.log(self.prime)


@dataclass(frozen=True)
class ArchHeightValue:
    """Truncated Tate series value with its certified geometric tail bound."""

    value: float
    tail_bound: float
    terms_used: int


def bad_primes(curve: Curve) -> list[int]:
    """Primes of bad reduction, i.e. the primes dividing 2a."""
    return sorted(set(factorize(2 * curve.a)))


def classify_reduction(curve: Curve, p: int) -> ReductionData:
    """Kodaira symbol, Tamagawa index and ord_p(disc) at the prime p.

    This is a closed-form lookup, not a general Tate's-algorithm engine;
    the trace records which Tate step decides the type, for auditing.
    """
    if not curve.is_minimal:
        raise NotMinimal(f"a = {curve.a} is not fourth-power-free")
    a = curve.a
    if p == 2:
        return _classify_two(a)
    e = ord_int(a, p)
    ord_delta = 3 * e
    if e == 0:
        return ReductionData(p, "I0", 1, 0, 1, "step 1: good reduction")
    if e == 1:
        return ReductionData(p, "III", 2, 3, 4, "step 4: ord(b8) = 2")
    if e == 2:
        c = 4 if legendre_symbol(-a // (p * p), p) == 1 else 2
        trace = f"step 6: cubic T^3 + (a/p^2)T separable; (-a/p^2 | p) = {1 if c == 4 else -1}"
        return ReductionData(p, "I0*", c, 6, 6, trace)
    if e == 3:
        return ReductionData(p, "III*", 2, 9, 9, "step 9: ord(a) = 3")
    raise NotMinimal(f"ord_{p}(a) = {e} >= 4 on a minimal model")


def _classify_two(a: int) -> ReductionData:
    ord_delta = 6 + 3 * ord_int(a, 2)
    r4 = a % 4
    if r4 == 1:
        return ReductionData(2, "II", 1, ord_delta, 3, "step 3: a6' = a+1 = 2*odd")
    if r4 == 3:
        return ReductionData(2, "III", 2, ord_delta, 4, "step 4: b8' = 12 mod 16")
    if r4 == 2:
        return ReductionData(2, "III", 2, ord_delta, 4, "step 4: ord(b8) = 2")
    if a % 8 == 0:
        return ReductionData(2, "III*", 2, ord_delta, 9, "step 9: ord(a) = 3")
    # a = 4 mod 8: step 7 with a double root, split by a mod 32 / mod 64
    r32, r64 = a % 32, a % 64
    if r32 == 12:
        return ReductionData(2, "I2*", 2, ord_delta, 7, "step 7: quadratic irreducible")
    if r32 == 28:
        return ReductionData(2, "I2*", 4, ord_delta, 7, "step 7: quadratic splits")
    if r64 in (20, 36):
        return ReductionData(2, "I3*", 2, ord_delta, 7, "step 7: Y^2+Y+1 at depth 3")
    if r64 in (4, 52):
        return ReductionData(2, "I3*", 4, ord_delta, 7, "step 7: Y^2+Y at depth 3")
    raise AssertionError(f"unreachable 2-adic class for a = {a}")


def _correction_odd(a: int, p: int, x: Fraction) -> tuple[Fraction, str]:
    e = ord_int(a, p)
    if 1 <= e <= 3 and ord_p(x, p) > 0:
        return Fraction(e, 4), f"p^{e}||a, ord_p(x) > 0"
    return Fraction(0), _CORR_NONE


def _correction_two(a: int, x: Fraction) -> tuple[Fraction, str]:
    ord2x = ord_p(x, 2)
    if a % 4 in (2, 3):
        # ord_2(x + a) on the literal reading: with an even denominator the
        # valuation is negative and the case cannot fire.  x + a = 0 counts
        # as valuation +infinity.
        s = x + a
        if s == 0 or ord_p(s, 2) > 0:
            return Fraction(1, 4), "a = 2,3 mod 4, ord_2(x+a) > 0"
        return Fraction(0), _CORR_NONE
    r64 = a % 64
    if r64 in (12, 20, 36, 44) and ord2x > 0:
        return Fraction(1, 2), "a = 12,20,36,44 mod 64, ord_2(x) > 0"
    if r64 in (4, 28, 52, 60) and ord2x > 1:
        return Fraction(1, 2), "a = 4,28,52,60 mod 64, ord_2(x) > 1"
    if a % 8 == 0 and ord2x > 0:
        return Fraction(3, 4), "a = 0 mod 8, ord_2(x) > 0"
    if r64 in (28, 60) and ord2x == 1:
        return Fraction(3, 4), "a = 28,60 mod 64, ord_2(x) = 1"
    if r64 in (4, 52) and ord2x == 1:
        return Fraction(7, 8), "a = 4,52 mod 64, ord_2(x) = 1"
    return Fraction(0), _CORR_NONE


def lambda_nonarch(curve: Curve, point: Point, p: int) -> NonArchLocalHeight:
    """Exact local height at a finite prime for an affine nontorsion point.

    coefficient = (1/2) max(0, -ord_p(x)) + (1/12) ord_p(disc) - correction.
    """
    if not curve.is_minimal:
        raise NotMinimal(f"a = {curve.a} is not fourth-power-free")
    if curve.is_torsion(point):
        raise TorsionPoint(f"{point} is a torsion point")
    x = point.x
    a = curve.a
    max_term = Fraction(max(0, -ord_p(x, p)))
    delta_term = Fraction(ord_int(curve.discriminant, p), 12)
    if p == 2:
        correction, tag = _correction_two(a, x)
    else:
        correction, tag = _correction_odd(a, p, x)
    coefficient = Fraction(1, 2) * max_term + delta_term - correction
    return NonArchLocalHeight(p, coefficient, correction, tag)


# ---------------------------------------------------------------------------
# Tate series, scale-free iterations.
#
# a < 0: with t = sqrt|a|/x on the identity component, one doubling maps
#        t -> 4t(1-t^2)/(1+t^2)^2 and the series term is z = (1+t^2)^2.
# a > 0: with w = sqrt(a)/x' on the translated model, one doubling maps
#        w -> 4w(1-w)(w^2+(1-w)^2)/z(w) and z(w) = 1 - 8(w(1-w))^2,
#        which makes 1/2 <= z <= 1 evident.
# ---------------------------------------------------------------------------


def _step_neg(t: float) -> float:
    s = t * t
    return 4.0 * t * (1.0 - s) / ((1.0 + s) ** 2)


def _z_pos(w: float) -> float:
    s = w * (1.0 - w)
    return 1.0 - 8.0 * s * s


def _step_pos(w: float) -> float:
    v = 1.0 - w
    return 4.0 * w * v * (w * w + v * v) / _z_pos(w)


def z_value(curve: Curve, point: Point) -> float:
    """The Tate-series term z for this point on the appropriate model.

    a < 0: z = (1 - a/x^2)^2 on the curve itself (x != 0 required).
    a > 0: z = 1 - 8(w(1-w))^2 with w = sqrt(a)/(x + sqrt(a)).
    """
    if point.is_infinity:
        raise ZeroX("z is undefined at infinity")
    x = point.x
    if curve.a < 0:
        if x == 0:
            raise ZeroX("z is undefined at x = 0 for a < 0")
        try:
            t2 = float(Fraction(curve.a) / (x * x))
        except OverflowError:
            return math.inf
        return (1.0 - t2) ** 2
    w = _translated_w(curve.a, x)
    return _z_pos(w)


def _translated_w(a: int, x: Fraction) -> float:
    """w = sqrt(a)/(x + sqrt(a)) for a > 0, x >= 0, safe for huge x."""
    if x == 0:
        return 1.0
    lq = log_abs(x) - 0.5 * math.log(a)  # log of q = x/sqrt(a)
    if lq > 300.0:
        return math.exp(-lq)
    q = math.exp(lq)
    return 1.0 / (1.0 + q)


def tail_bound(terms: int) -> float:
    """Geometric bound on the dropped tail: sum_{k>terms} 4^-k log(4) / 8."""
    return math.log(4.0) / (24.0 * 4.0**terms)


def lambda_archimedean(
    curve: Curve, point: Point, terms: int = DEFAULT_TERMS
) -> ArchHeightValue:
    """Archimedean local height by the truncated Tate series.

    Sums the terms k = 0..terms; the remainder is below tail_bound(terms).
    Exact rationals enter only through log of (x^2 - a) and of x, taken
    with big-integer logs, so huge coordinates never overflow.
    """
    if terms < 1:
        raise ValueError("terms must be a positive integer")
    if curve.is_torsion(point):
        raise TorsionPoint(f"{point} is a torsion point")
    a = curve.a
    x = point.x
    if a < 0:
        # k = 0 term via x^4 z = (x^2 - a)^2; then iterate from 2P, which
        # lies on the identity component so every t_k is in (0, 1).
        # log z = 2 log(1 + t^2), so the k-th term is 4^-k log1p(t^2)/4.
        first = 0.25 * log_abs(x * x - a)
        x2 = x_after_doubling(a, x)
        t = math.exp(0.5 * math.log(-a) - log_abs(x2))
        series = 0.0
        weight = 0.25
        for _ in range(terms):
            weight *= 0.25
            if t == 0.0:
                break
            series += weight * math.log1p(t * t)
            t = _step_neg(t)
        value = first + series - log_abs(curve.discriminant) / 12.0
    else:
        la = math.log(a)
        lq = log_abs(x) - 0.5 * la
        if lq > 300.0:
            log_u0, w = lq, math.exp(-lq)
        else:
            q = math.exp(lq)
            log_u0, w = math.log1p(q), 1.0 / (1.0 + q)
        first = 0.25 * la + 0.5 * log_u0 + 0.125 * math.log(_z_pos(w))
        series = 0.0
        weight = 0.125
        for _ in range(terms):
            weight *= 0.25
            w = _step_pos(w)
            if w == 0.0:
                break
            series += weight * math.log(_z_pos(w))
        value = first + series - log_abs(curve.discriminant) / 12.0
    return ArchHeightValue(value=value, tail_bound=tail_bound(terms), terms_used=terms)
