"""The curve family y^2 = x^3 + a*x: exact point arithmetic, torsion,
the square-class map and the descent shape of a rational point."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arithmetic import (
    factorize,
    fourth_power_free_part,
    isqrt_exact,
    ord_int,
    squarefree_decompose,
)
from .errors import NotMinimal, NotOnCurve, ZeroInput, ZeroX


@dataclass(frozen=True)
class Point:
    """A rational point: affine (x, y) or the point at infinity (None, None)."""

    x: Fraction | None = None
    y: Fraction | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "Point":
        if self.is_infinity:
            return self
        return Point(self.x, -self.y)

    def __str__(self) -> str:
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


INFINITY = Point()


def affine(x, y) -> Point:
    """Build an affine point from any Fraction-convertible coordinates."""
    return Point(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class TorsionStructure:
    """Torsion subgroup kind ("Z4", "Z2xZ2" or "Z2") and its affine points."""

    kind: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class DescentForm:
    """P = (b1*M^2/e^2, b1*M*N/e^3) with a = b1*b2 and N^2 = b1*M^4 + b2*e^4."""

    b1: int
    b2: int
    M: int
    N: int
    e: int


@dataclass(frozen=True)
class Curve:
    """y^2 = x^3 + a*x for a nonzero integer a."""

    a: int

    def __post_init__(self):
        if self.a == 0:
            raise ZeroInput("a must be nonzero (a = 0 is singular for heights)")

    @property
    def discriminant(self) -> int:
        return -64 * self.a**3

    @property
    def is_minimal(self) -> bool:
        return fourth_power_free_part(self.a)[1] == 1

    def minimalize(self) -> tuple["Curve", int]:
        """The fourth-power-free model and the scale s with a = a' * s^4.

        Points map by (x, y) -> (x/s^2, y/s^3).
        """
        a4f, s = fourth_power_free_part(self.a)
        return (self if s == 1 else Curve(a4f)), s

    def contains(self, point: Point) -> bool:
        """True iff the point satisfies y^2 = x^3 + a*x exactly."""
        if point.is_infinity:
            return True
        return point.y * point.y == point.x**3 + self.a * point.x

    def _require(self, *points: Point) -> None:
        for p in points:
            if not self.contains(p):
                raise NotOnCurve(f"{p} is not on y^2 = x^3 + {self.a}x")

    def double(self, point: Point) -> Point:
        """2P; returns infinity for P = O and for 2-torsion (y = 0)."""
        self._require(point)
        return self._double_raw(point)

    def _double_raw(self, point: Point) -> Point:
        if point.is_infinity or point.y == 0:
            return INFINITY
        x, y = point.x, point.y
        lam = (3 * x * x + self.a) / (2 * y)
        x2 = lam * lam - 2 * x
        return Point(x2, lam * (x - x2) - y)

    def add(self, p: Point, q: Point) -> Point:
        """Chord-tangent group law."""
        self._require(p, q)
        return self._add_raw(p, q)

    def _add_raw(self, p: Point, q: Point) -> Point:
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if p.y == -q.y:
                return INFINITY
            return self._double_raw(p)
        lam = (q.y - p.y) / (q.x - p.x)
        x3 = lam * lam - p.x - q.x
        return Point(x3, lam * (p.x - x3) - p.y)

    def multiply(self, n: int, point: Point) -> Point:
        """n*P by binary double-and-add on exact rationals."""
        self._require(point)
        if n < 0:
            n, point = -n, -point
        result, base = INFINITY, point
        while n:
            if n & 1:
                result = self._add_raw(result, base)
            n >>= 1
            if n:
                base = self._double_raw(base)
        return result

    def torsion_subgroup(self) -> TorsionStructure:
        """The rational torsion subgroup.

        Z4 exactly when the fourth-power-free model has a = 4, Z2xZ2 when -a
        is a perfect square, Z2 otherwise.  On a non-minimal model the Z4
        points are carried back through (x, y) -> (s^2 x, s^3 y).
        """
        return _torsion_cached(self.a)

    def is_torsion(self, point: Point) -> bool:
        """True iff the point has finite order."""
        self._require(point)
        return point.is_infinity or point in self.torsion_subgroup().points


@lru_cache(maxsize=65536)
def _torsion_cached(a: int) -> TorsionStructure:
    zero = affine(0, 0)
    # a = 4 s^4 (minimal model a = 4) detected by two integer square roots,
    # so no factorisation is ever needed here
    if a > 0 and a % 4 == 0:
        s2 = isqrt_exact(a // 4)
        s = isqrt_exact(s2) if s2 is not None else None
        if s is not None:
            s2, s3 = s * s, s**3
            return TorsionStructure(
                "Z4", (zero, affine(2 * s2, 4 * s3), affine(2 * s2, -4 * s3))
            )
    root = isqrt_exact(-a)
    if root is not None:
        return TorsionStructure("Z2xZ2", (affine(root, 0), affine(-root, 0), zero))
    return TorsionStructure("Z2", (zero,))


def x_after_doubling(a: int, x: Fraction) -> Fraction:
    """x(2P) = (x^2 - a)^2 / (4(x^3 + a x)), the x-only duplication map."""
    return (x * x - a) ** 2 / (4 * (x**3 + a * x))


def alpha(curve: Curve, point: Point) -> int:
    """Square class of x(P) in Q*/Q*^2, as a squarefree integer.

    alpha(O) = 1 and alpha((0,0)) is the squarefree part of a; this map is a
    homomorphism, which is what forces x(2P) to be a rational square.
    """
    curve._require(point)
    if point.is_infinity:
        return 1
    if point.x == 0:
        return squarefree_decompose(curve.a)[0]
    return squarefree_decompose(point.x.numerator * point.x.denominator)[0]


def descent_form(curve: Curve, point: Point) -> DescentForm:
    """Recover (b1, b2, M, N, e) for an affine point with x != 0.

    e is the square root of the denominator of x (minimality guarantees the
    denominators are e^2, e^3); b1 collects, prime by prime, the full power
    of p from the numerator when it fits inside a, and ord_p(a) otherwise,
    so that gcd(b2, M) = 1.  Any failure of the lowest-terms gcd shape
    raises NotMinimal.
    """
    if not curve.is_minimal:
        raise NotMinimal(f"a = {curve.a} is not fourth-power-free")
    curve._require(point)
    if point.is_infinity or point.x == 0:
        raise ZeroX("descent form needs an affine point with x != 0")
    x, y = point.x, point.y
    e = isqrt_exact(x.denominator)
    if e is None or y.denominator != e**3:
        raise NotMinimal(f"denominators of {point} are not of the shape e^2, e^3")
    m = x.numerator
    b1 = 1 if m > 0 else -1
    for p, mu in factorize(m).items():
        alpha_p = ord_int(curve.a, p)
        eps = mu if mu <= alpha_p else alpha_p
        if eps % 2 != mu % 2:
            raise NotMinimal(f"numerator power of {p} in x has no valid split")
        b1 *= p**eps
    M = isqrt_exact(m // b1)
    if M is None:
        raise NotMinimal("numerator of x is not b1 * M^2")
    if curve.a % b1 != 0:
        raise NotMinimal("b1 does not divide a")
    b2 = curve.a // b1
    N_frac = y / Fraction(b1 * M, e**3)
    if N_frac.denominator != 1:
        raise NotMinimal("y is not of the shape b1*M*N/e^3")
    N = N_frac.numerator
    if N * N != b1 * M**4 + b2 * e**4:
        raise NotMinimal("descent identity N^2 = b1*M^4 + b2*e^4 failed")
    for u, v in ((b1, e), (b2, M), (e, M), (M, N), (e, N)):
        if gcd(u, v) != 1:
            raise NotMinimal(f"gcd condition failed on ({u}, {v})")
    return DescentForm(b1=b1, b2=b2, M=M, N=N, e=e)
