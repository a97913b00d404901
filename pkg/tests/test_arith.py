import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmpolar.arith import (
    Discriminant,
    decompose_discriminant,
    divisors,
    factorize,
    is_fundamental,
    is_prime,
    kronecker,
)
from qmpolar.errors import DomainError


def test_factorize_primorial():
    assert factorize(9699690).factors == (
        (2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1)
    )


def test_factorize_trivial_cases():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(-12).factors == ((2, 2), (3, 1))


def test_factorize_zero_rejected():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorize_beyond_trial_division():
    n = 1000003 * 1000033
    assert factorize(n).factors == ((1000003, 1), (1000033, 1))


@settings(max_examples=200)
@given(st.integers(min_value=2, max_value=10**6))
def test_factorize_reconstructs(n):
    assert factorize(n).value == n


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


def test_kronecker_unit_modulus():
    for a in (-7, -1, 0, 1, 3, 10):
        assert kronecker(a, 1) == 1


def test_kronecker_shared_factor():
    assert kronecker(0, 3) == 0
    assert kronecker(6, 3) == 0
    assert kronecker(-56, 2) == 0


def test_kronecker_brute_legendre():
    # oracle: exhaustive residue squaring modulo an odd prime
    for p in (3, 5, 7, 11, 13):
        squares = {(x * x) % p for x in range(1, p)}
        for a in range(-30, 30):
            expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
            assert kronecker(a, p) == expected, (a, p)
    assert kronecker(-24, 5) == 1


@settings(max_examples=200)
@given(
    st.integers(min_value=-300, max_value=300),
    st.integers(min_value=-300, max_value=300),
    st.integers(min_value=-300, max_value=300),
)
def test_kronecker_multiplicative(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


def _brute_decompose(v):
    # oracle: largest square divisor with fundamental quotient
    best = None
    f = 1
    while f * f <= abs(v):
        if v % (f * f) == 0 and is_fundamental(v // (f * f)):
            best = (v // (f * f), f)
        f += 1
    return best


@pytest.mark.parametrize("v,expected", [(-60, (-15, 2)), (-24, (-24, 1)), (4, (4, 1))])
def test_decompose_examples(v, expected):
    d = decompose_discriminant(v)
    assert (d.fundamental_part, d.conductor) == expected
    assert _brute_decompose(v) == expected


def test_decompose_rejects_non_discriminants():
    for v in (0, 2, 3, -2, -14, 7):
        with pytest.raises(DomainError):
            decompose_discriminant(v)


@settings(max_examples=200)
@given(st.integers(min_value=-5000, max_value=5000))
def test_decompose_fundamental_fixed_point(v):
    if v == 0 or v % 4 in (2, 3):
        return
    d = decompose_discriminant(v)
    assert d.value == d.fundamental_part * d.conductor**2
    again = decompose_discriminant(d.fundamental_part)
    assert again.conductor == 1
    assert again.fundamental_part == d.fundamental_part


def test_discriminant_invariant_enforced():
    with pytest.raises(AssertionError):
        Discriminant(-60, -60, 2)


def test_is_prime_deterministic_set():
    assert is_prime(2) and is_prime(10**9 + 7)
    assert not is_prime(1) and not is_prime(561) and not is_prime(10**12 + 1)
