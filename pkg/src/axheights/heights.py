"""Naive and canonical heights, the limit-definition oracle, and the
denominator analysis of x(nP).

The canonical height is assembled from local heights: the truncated Tate
series at the archimedean place plus exact rational multiples of log(p) at
the finite places.  The limit oracle recomputes it independently from the
definition (1/2) lim h(2^n P) / 4^n in exact arithmetic, and is the main
cross-check for the decomposition path.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import factorize, is_rational_square, ord_int
from .curve import Curve, Point, x_after_doubling
from .errors import DepthExceeded, InfinityPoint, NotMinimal, TorsionPoint
from .local_heights import (
    DEFAULT_TERMS,
    ArchHeightValue,
    NonArchLocalHeight,
    lambda_archimedean,
    lambda_nonarch,
)

MAX_DOUBLINGS = 10

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class HeightBreakdown:
    """Canonical height with its place-by-place contributions.

    naive and difference refer to the model the point was given on; the
    canonical height itself is model-independent and is computed on the
    fourth-power-free model.  When the denominator of x is too large to
    factor, the good primes dividing it contribute through the single
    aggregate bulk_denominator_log = (1/2) log(coprime-to-2a part) instead
    of itemised terms; canonical = archimedean + sum(terms) + bulk.
    """

    naive: float
    canonical: float
    archimedean: ArchHeightValue | None
    nonarch_terms: tuple[NonArchLocalHeight, ...]
    difference: float
    error_bound: float
    is_torsion: bool = False
    bulk_denominator_log: float = 0.0


@dataclass(frozen=True)
class DenominatorRecord:
    """x(nP) = A_n / B_n in lowest terms."""

    n: int
    A: int
    B: int
    ord2_B: int


def naive_height(point: Point) -> float:
    """h(P) = log max(|s|, |t|) for x(P) = s/t in lowest terms."""
    if point.is_infinity:
        raise InfinityPoint("naive height of the point at infinity")
    return naive_height_x(point.x)


def naive_height_x(x: Fraction) -> float:
    return math.log(max(abs(x.numerator), x.denominator))


def _to_minimal(curve: Curve, point: Point) -> tuple[Curve, Point, int]:
    minimal, s = curve.minimalize()
    if s == 1 or point.is_infinity:
        return minimal, point, s
    return minimal, Point(point.x / s**2, point.y / s**3), s


def height_primes(curve: Curve, point: Point) -> list[int]:
    """Primes that can contribute to lambda_p: those dividing 2a or the
    denominator of x(P).  Everywhere else the local height is zero."""
    primes = set(factorize(2 * curve.a))
    if point.x.denominator > 1:
        primes |= set(factorize(point.x.denominator))
    return sorted(primes)


#: denominators beyond this are not itemised prime by prime
_ITEMIZE_LIMIT = 10**18


def canonical_height(
    curve: Curve, point: Point, terms: int = DEFAULT_TERMS
) -> HeightBreakdown:
    """hhat(P) via local decomposition, with a certified error bound.

    Non-minimal a is handled by minimalizing the curve and mapping the point
    through (x, y) -> (x/s^2, y/s^3); torsion points (including O) report
    canonical height 0 with an empty breakdown.
    """
    curve._require(point)
    naive = 0.0 if point.is_infinity else naive_height(point)
    minimal, q, _ = _to_minimal(curve, point)
    if q.is_infinity or minimal.is_torsion(q):
        return HeightBreakdown(
            naive=naive,
            canonical=0.0,
            archimedean=None,
            nonarch_terms=(),
            difference=naive / 2.0,
            error_bound=0.0,
            is_torsion=True,
        )
    arch = lambda_archimedean(minimal, q, terms)
    core_primes = sorted(factorize(2 * minimal.a))
    bulk = q.x.denominator
    for p in core_primes:
        while bulk % p == 0:
            bulk //= p
    prime_list = list(core_primes)
    bulk_log = 0.0
    if bulk > 1:
        if bulk <= _ITEMIZE_LIMIT:
            prime_list += sorted(factorize(bulk))
        else:
            # aggregate of (1/2) max(0, -ord_p x) log p over the good primes
            # dividing the denominator; their corrections are all zero
            bulk_log = 0.5 * math.log(bulk)
    locals_ = tuple(lambda_nonarch(minimal, q, p) for p in prime_list)
    contributions = [arch.value, bulk_log] + [t.value for t in locals_]
    canonical = math.fsum(contributions)
    # one ulp per floating log evaluation, plus the series tail
    error = arch.tail_bound + _EPS * sum(abs(c) for c in contributions) + 4 * _EPS * abs(canonical)
    return HeightBreakdown(
        naive=naive,
        canonical=canonical,
        archimedean=arch,
        nonarch_terms=locals_,
        difference=naive / 2.0 - canonical,
        error_bound=error,
        bulk_denominator_log=bulk_log,
    )


def limit_oracle(curve: Curve, point: Point, doublings: int = 6) -> float:
    """(1/2) h(2^n P) / 4^n in exact arithmetic: the definition itself.

    Independent of the local decomposition; agreement between the two is
    the core correctness check.
    """
    if doublings < 1 or doublings > MAX_DOUBLINGS:
        raise DepthExceeded(f"doublings must be in 1..{MAX_DOUBLINGS}")
    if curve.is_torsion(point):
        raise TorsionPoint(f"{point} is torsion; the limit is trivially 0")
    x = point.x
    for _ in range(doublings):
        x = x_after_doubling(curve.a, x)
    return naive_height_x(x) / (2.0 * 4.0**doublings)


def denominator_sequence(curve: Curve, point: Point, upto: int) -> list[DenominatorRecord]:
    """A_n/B_n = x(nP) in lowest terms for n = 1..upto."""
    if not curve.is_minimal:
        raise NotMinimal(f"a = {curve.a} is not fourth-power-free")
    if curve.is_torsion(point):
        raise TorsionPoint(f"{point} is torsion")
    records = []
    current = point
    for n in range(1, upto + 1):
        x = current.x
        records.append(
            DenominatorRecord(n, x.numerator, x.denominator, ord_int(x.denominator, 2))
        )
        current = curve._add_raw(current, point)
    return records


def nonarch_sum_identity(curve: Curve, point: Point) -> tuple[bool, dict[int, Fraction]]:
    """Exact check of the doubled-point identity

        sum_p lambda_p(2P) = log|delta| + (1/12) log|disc|
                             - (1/2) log 2 * [a = 4 mod 16 and ord_2(x(2P)) > 0]

    where x(2P) = alpha^2/delta^2 in lowest terms.  Both sides are compared
    prime by prime as exact rational coefficients of log p; returns the
    overall verdict and the per-prime residues (all zero on success).
    """
    if not curve.is_minimal:
        raise NotMinimal(f"a = {curve.a} is not fourth-power-free")
    if curve.is_torsion(point):
        raise TorsionPoint(f"{point} is torsion")
    two_p = curve.double(point)
    x2 = two_p.x
    delta = is_rational_square(Fraction(x2.denominator))
    if delta is None or is_rational_square(x2) is None:
        return False, {}
    delta = int(delta)
    indicator = curve.a % 16 == 4 and x2 != 0 and ord_int(x2.numerator, 2) > 0
    primes = set(factorize(2 * curve.a))
    if delta > 1:
        primes |= set(factorize(delta))
    residues: dict[int, Fraction] = {}
    for p in sorted(primes):
        lhs = lambda_nonarch(curve, two_p, p).coefficient
        rhs = Fraction(ord_int(delta, p)) + Fraction(ord_int(curve.discriminant, p), 12)
        if p == 2 and indicator:
            rhs -= Fraction(1, 2)
        residues[p] = lhs - rhs
    return all(r == 0 for r in residues.values()), residues
