import random
from fractions import Fraction

import pytest

from axheights.arithmetic import is_rational_square, squarefree_decompose
from axheights.curve import INFINITY, Curve, affine, alpha, descent_form
from axheights.errors import NotOnCurve, ZeroInput, ZeroX


def test_on_curve_examples():
    assert Curve(3).contains(affine(1, 2))
    assert Curve(-2).contains(affine(-1, 1))
    assert not Curve(3).contains(affine(1, 3))
    assert Curve(3).contains(INFINITY)


def test_curve_invariants():
    c = Curve(3)
    assert c.discriminant == -64 * 27
    assert c.is_minimal
    assert not Curve(48).is_minimal
    with pytest.raises(ZeroInput):
        Curve(0)


def test_double_examples():
    c = Curve(3)
    two_p = c.double(affine(1, 2))
    # x(2P) = (x^2 - a)^2 / (4 y^2) = (1 - 3)^2 / 16 = 1/4
    assert two_p.x == Fraction(1, 4)
    assert c.contains(two_p)
    assert two_p == affine(Fraction(1, 4), Fraction(-7, 8))
    assert Curve(4).double(affine(2, 4)) == affine(0, 0)
    assert Curve(5).double(affine(0, 0)) == INFINITY
    with pytest.raises(NotOnCurve):
        c.double(affine(1, 3))


def test_add_examples():
    c = Curve(3)
    p = affine(1, 2)
    assert c.add(p, INFINITY) == p
    assert c.add(INFINITY, p) == p
    assert c.add(p, -p) == INFINITY
    assert c.add(p, p) == c.double(p)


def test_multiply_examples():
    c3 = Curve(3)
    p = affine(1, 2)
    assert c3.multiply(0, p) == INFINITY
    assert c3.multiply(1, p) == p
    assert c3.multiply(2, p) == c3.double(p)
    assert c3.multiply(-1, p) == -p
    assert Curve(4).multiply(4, affine(2, 4)) == INFINITY


def test_group_law_fuzz():
    # associativity and inverse on small multiples of a generator
    for a, gen in ((3, affine(1, 2)), (-2, affine(-1, 1)), (-5, affine(5, 10))):
        c = Curve(a)
        pts = [c.multiply(n, gen) for n in range(-3, 4)]
        rng = random.Random(42)
        for _ in range(25):
            p, q, r = rng.choice(pts), rng.choice(pts), rng.choice(pts)
            assert c.add(c.add(p, q), r) == c.add(p, c.add(q, r))
        for p in pts:
            assert c.add(p, -p) == INFINITY


@pytest.mark.parametrize(
    "a,kind,xs",
    [
        (4, "Z4", {Fraction(0), Fraction(2)}),
        (-1, "Z2xZ2", {Fraction(0), Fraction(1), Fraction(-1)}),
        (3, "Z2", {Fraction(0)}),
    ],
)
def test_torsion_examples(a, kind, xs):
    t = Curve(a).torsion_subgroup()
    assert t.kind == kind
    assert {p.x for p in t.points} == xs


def test_torsion_orders():
    for a in (4, -1, 3, -9, 7, -36):
        c = Curve(a)
        t = c.torsion_subgroup()
        order = 4 if t.kind == "Z4" else 2
        for p in t.points:
            assert c.contains(p)
            assert c.multiply(order, p) == INFINITY


def test_torsion_on_non_minimal_model():
    # a = 64 = 4 * 2^4 is isomorphic to a = 4, so its torsion is Z4 with the
    # points carried through (x, y) -> (4x, 8y)
    t = Curve(64).torsion_subgroup()
    assert t.kind == "Z4"
    assert affine(8, 32) in t.points
    for p in t.points:
        assert Curve(64).contains(p)


def test_is_torsion():
    assert Curve(4).is_torsion(affine(2, -4))
    assert not Curve(3).is_torsion(affine(1, 2))
    assert Curve(-2).is_torsion(INFINITY)


def test_square_class_parity():
    # x(nP) is a square for n even and u * (square) for n odd, u the
    # squarefree part of x(P)
    for a, gen in ((3, affine(1, 2)), (-2, affine(-1, 1)), (-5, affine(5, 10))):
        c = Curve(a)
        u = squarefree_decompose(gen.x.numerator * gen.x.denominator)[0]
        for n in range(1, 7):
            q = c.multiply(n, gen)
            if q.is_infinity or q.x == 0:
                continue
            if n % 2 == 0:
                assert is_rational_square(q.x) is not None
            else:
                assert is_rational_square(q.x / u) is not None


def test_alpha_examples_and_homomorphism():
    assert alpha(Curve(5), affine(0, 0)) == 5
    assert alpha(Curve(3), affine(1, 2)) == 1
    assert alpha(Curve(3), affine(Fraction(1, 4), Fraction(-7, 8))) == 1
    assert alpha(Curve(3), INFINITY) == 1
    for a, gen in ((3, affine(1, 2)), (-5, affine(5, 10))):
        c = Curve(a)
        pts = [c.multiply(n, gen) for n in range(1, 5)]
        for p in pts:
            for q in pts:
                s = c.add(p, q)
                prod = alpha(c, s) * alpha(c, p) * alpha(c, q)
                assert is_rational_square(Fraction(prod)) is not None


def test_descent_form_examples():
    d = descent_form(Curve(3), affine(1, 2))
    assert (d.b1, d.b2, d.M, d.e) == (1, 3, 1, 1)
    assert d.N * d.N == d.b1 * d.M**4 + d.b2 * d.e**4 == 4

    d = descent_form(Curve(-2), affine(-1, 1))
    assert (d.b1, d.b2, d.M, d.e) == (-1, 2, 1, 1)
    assert d.N * d.N == 1

    d = descent_form(Curve(3), affine(Fraction(1, 4), Fraction(-7, 8)))
    assert (d.b1, d.b2, d.M, d.e) == (1, 3, 1, 2)
    assert d.N == -7
    assert d.N * d.N == d.b1 * d.M**4 + d.b2 * d.e**4 == 49


def test_descent_form_reconstructs_point():
    rng = random.Random(5)
    for a, gen in ((3, affine(1, 2)), (-2, affine(-1, 1)), (-5, affine(-1, 2))):
        c = Curve(a)
        for n in (1, 2, 3, 4):
            p = c.multiply(n, gen)
            if p.is_infinity or p.x == 0:
                continue
            d = descent_form(c, p)
            assert Fraction(d.b1 * d.M * d.M, d.e * d.e) == p.x
            assert Fraction(d.b1 * d.M * d.N, d.e**3) == p.y
            assert d.N * d.N == d.b1 * d.M**4 + d.b2 * d.e**4


def test_descent_form_errors():
    with pytest.raises(ZeroX):
        descent_form(Curve(4), affine(0, 0))
    from axheights.errors import NotMinimal

    with pytest.raises(NotMinimal):
        descent_form(Curve(48), affine(4, 16))


def test_alpha_requires_curve_point():
    with pytest.raises(NotOnCurve):
        alpha(Curve(3), affine(1, 3))


def test_minimalize():
    minimal, s = Curve(48).minimalize()
    assert minimal.a == 3 and s == 2
    minimal, s = Curve(3).minimalize()
    assert minimal.a == 3 and s == 1
