"""Arbitrary-precision integer utilities: factorization, Kronecker symbols,
discriminant decomposition.

Everything here is pure and deterministic; results are exact Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import DomainError

# Trial division handles everything below this bound; beyond it we switch to
# Miller-Rabin plus Brent's cycle-finding rho with a fixed parameter schedule,
# so output stays deterministic.
_TRIAL_BOUND = 10**6

# Deterministic Miller-Rabin witness set, valid for all n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeFactorization:
    """Factored form of |n|: sorted list of (prime, exponent) pairs."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        assert primes == sorted(primes) and len(set(primes)) == len(primes)
        assert all(e >= 1 and is_prime(p) for p, e in self.factors)

    @property
    def value(self) -> int:
        v = 1
        for p, e in self.factors:
            v *= p**e
        return v

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (witness set valid below 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_brent(n: int) -> int:
    """Brent's rho with a fixed deterministic schedule; n composite, odd."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def factorize(n: int) -> PrimeFactorization:
    """Factor |n| into primes; n = 0 is a domain error."""
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel over residues coprime to 30
    p = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p < _TRIAL_BOUND:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += increments[i]
        i = (i + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                factors[m] = factors.get(m, 0) + 1
                continue
            d = _rho_brent(m)
            stack.extend((d, m // d))
    return PrimeFactorization(tuple(sorted(factors.items())))


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the full extension of the Jacobi symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


@dataclass(frozen=True)
class Discriminant:
    """Integer discriminant split as fundamental_part * conductor**2."""

    value: int
    fundamental_part: int
    conductor: int

    def __post_init__(self) -> None:
        assert self.value == self.fundamental_part * self.conductor**2
        assert is_fundamental(self.fundamental_part)


def is_fundamental(d: int) -> bool:
    """True for fundamental discriminants (1 is allowed as the trivial one)."""
    if d == 0:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def decompose_discriminant(v: int) -> Discriminant:
    """Write v = d0 * f**2 with d0 a fundamental discriminant."""
    if v == 0 or v % 4 in (2, 3):
        raise DomainError(f"{v} is not a discriminant (need v = 0,1 mod 4)")
    sign = 1 if v > 0 else -1
    square_part = 1
    squarefree = 1
    for p, e in factorize(v).factors:
        square_part *= p ** (e // 2)
        if e % 2:
            squarefree *= p
    s = sign * squarefree
    if s % 4 == 1:
        return Discriminant(v, s, square_part)
    # s = 2,3 mod 4: the fundamental part is 4s and v = 0 mod 4 forces
    # square_part even.
    assert square_part % 2 == 0
    return Discriminant(v, 4 * s, square_part // 2)
