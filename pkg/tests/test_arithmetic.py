import math
import random
from fractions import Fraction

import pytest

from axheights.arithmetic import (
    divisors,
    factorize,
    fourth_power_free_part,
    is_fourth_power_free,
    is_prime,
    is_rational_square,
    legendre_symbol,
    log_abs,
    ord_p,
    parse_rational,
    squarefree_decompose,
    squarefree_divisors,
)
from axheights.errors import (
    FactorizationBudgetExceeded,
    NotOddPrime,
    NotPrime,
    ZeroInput,
)


@pytest.mark.parametrize(
    "x,p,expected",
    [(48, 2, 4), (Fraction(1, 4), 2, -2), (7, 5, 0), (Fraction(-7, 8), 2, -3)],
)
def test_ord_p_examples(x, p, expected):
    assert ord_p(x, p) == expected


def test_ord_p_errors():
    with pytest.raises(ZeroInput):
        ord_p(0, 2)
    with pytest.raises(NotPrime):
        ord_p(6, 4)


def test_ord_p_additive():
    rng = random.Random(101)
    for _ in range(300):
        x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6)) * rng.choice([1, -1])
        y = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        p = rng.choice([2, 3, 5, 7, 11, 13])
        assert ord_p(x * y, p) == ord_p(x, p) + ord_p(y, p)


@pytest.mark.parametrize("n,expected", [(12, (3, 2)), (-18, (-2, 3)), (7, (7, 1))])
def test_squarefree_examples(n, expected):
    assert squarefree_decompose(n) == expected


def test_squarefree_roundtrip_fuzzed():
    rng = random.Random(7)
    for _ in range(400):
        n = rng.randint(1, 10**7) * rng.choice([1, -1])
        u, v = squarefree_decompose(n)
        assert u * v * v == n
        assert (u > 0) == (n > 0)
        # independent squarefreeness check by trial division
        m = abs(u)
        for q in range(2, int(math.isqrt(m)) + 1):
            assert m % (q * q) != 0


@pytest.mark.parametrize("a,expected", [(48, (3, 2)), (-32, (-2, 2)), (7, (7, 1))])
def test_fourth_power_free_examples(a, expected):
    assert fourth_power_free_part(a) == expected


def test_fourth_power_free_roundtrip():
    rng = random.Random(13)
    for _ in range(300):
        a = rng.randint(1, 10**8) * rng.choice([1, -1])
        a4f, s = fourth_power_free_part(a)
        assert a4f * s**4 == a
        assert is_fourth_power_free(a4f)


@pytest.mark.parametrize(
    "x,expected",
    [
        (Fraction(9, 4), Fraction(3, 2)),
        (Fraction(2), None),
        (Fraction(0), Fraction(0)),
        (Fraction(-4), None),
    ],
)
def test_is_rational_square_examples(x, expected):
    assert is_rational_square(x) == expected


def test_is_rational_square_exhaustive_small():
    # the stated grid: all x = i/j with |i|, j <= 200
    for i in range(-200, 201):
        for j in range(1, 201):
            x = Fraction(i, j)
            r = is_rational_square(x)
            ok = (
                x >= 0
                and math.isqrt(x.numerator) ** 2 == x.numerator
                and math.isqrt(x.denominator) ** 2 == x.denominator
            )
            assert (r is not None) == ok
            if r is not None:
                assert r >= 0 and r * r == x


@pytest.mark.parametrize("n,p,expected", [(1, 3, 1), (-1, 3, -1), (2, 7, 1), (3, 3, 0)])
def test_legendre_examples(n, p, expected):
    assert legendre_symbol(n, p) == expected


def test_legendre_errors():
    with pytest.raises(NotOddPrime):
        legendre_symbol(3, 2)
    with pytest.raises(NotOddPrime):
        legendre_symbol(3, 9)


def test_legendre_against_brute_force():
    for p in [q for q in range(3, 100) if is_prime(q)]:
        residues = {(k * k) % p for k in range(1, p)}
        for n in range(-p, p + 1):
            sym = legendre_symbol(n, p)
            if n % p == 0:
                assert sym == 0
            elif n % p in residues:
                assert sym == 1
            else:
                assert sym == -1


def test_factorize_roundtrip():
    rng = random.Random(23)
    for _ in range(200):
        n = rng.randint(2, 10**12)
        fac = factorize(n)
        out = 1
        for p, e in fac.items():
            assert is_prime(p)
            out *= p**e
        assert out == n


def test_factorize_budget_gives_up():
    # a 66-digit semiprime is far beyond a 2000-iteration rho budget
    p = 2**127 - 1
    q = 2**89 - 1
    assert is_prime(p) and is_prime(q)
    with pytest.raises(FactorizationBudgetExceeded):
        factorize(p * q, budget=2000)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert squarefree_divisors(12) == [1, 2, 3, 6]
    assert squarefree_divisors(-50) == [1, 2, 5, 10]


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-12") == Fraction(-12)
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_log_abs_huge():
    n = 10**5000 + 7
    assert abs(log_abs(Fraction(n)) - 5000 * math.log(10)) < 1e-9
    assert abs(log_abs(Fraction(1, n)) + 5000 * math.log(10)) < 1e-9
