"""Class numbers of quadratic orders over Q via binary quadratic forms.

Definite discriminants are handled by counting primitive reduced forms,
indefinite ones by counting cycles of reduced forms; fundamental units of
real quadratic orders come from the purely periodic continued fraction of
the reduced quadratic irrational (b0 + sqrt(D))/2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import is_fundamental, kronecker
from .errors import DomainError, InconsistencyError

_memo_lock = threading.Lock()
_h_imag_memo: dict[int, int] = {}
_h_real_memo: dict[int, tuple[int, int]] = {}
_pell_memo: dict[int, "PellUnit"] = {}


@dataclass(frozen=True)
class ReducedFormCount:
    """Class-number result together with the method that produced it."""

    discriminant: int
    h: int
    method: str  # definite-enumeration | indefinite-cycles | analytic-oracle

    def __post_init__(self) -> None:
        assert self.h >= 1


@dataclass(frozen=True)
class PellUnit:
    """Minimal solution of x^2 - D*y^2 = 4*norm_sign, i.e. the fundamental
    unit (x + y*sqrt(D))/2 of the real quadratic order of discriminant D."""

    discriminant: int
    x: int
    y: int
    norm_sign: int

    def __post_init__(self) -> None:
        assert self.norm_sign in (1, -1)
        assert self.x > 0 and self.y > 0
        if self.x * self.x - self.discriminant * self.y * self.y != 4 * self.norm_sign:
            raise InconsistencyError(
                f"pell unit ({self.x},{self.y}) fails its defining equation for {self.discriminant}"
            )


def _check_disc(d: int) -> None:
    if d % 4 in (2, 3):
        raise DomainError(f"{d} = 2,3 mod 4 is not a discriminant")


def class_number_imag(d: int) -> int:
    """Number of classes of primitive positive definite forms of discriminant d < 0.

    Enumerates b over [0, sqrt(|d|/3)] with b = d mod 2 and the divisors a of
    (b^2 + |d|)/4 in [max(b,1), sqrt(.)]; forms with b = 0, b = a or a = c
    count once, the rest twice (for the +-b pair).
    """
    if d >= 0:
        raise DomainError(f"class_number_imag needs d < 0, got {d}")
    _check_disc(d)
    with _memo_lock:
        if d in _h_imag_memo:
            return _h_imag_memo[d]
    ad = -d
    count = 0
    g2 = gcd
    for b in range(ad & 1, isqrt(ad // 3) + 1, 2):
        n4 = (b * b + ad) >> 2
        for a in range(max(b, 1), isqrt(n4) + 1):
            if n4 % a == 0:
                c = n4 // a
                if g2(g2(a, b), c) == 1:
                    count += 1 if (b == 0 or b == a or a == c) else 2
    assert count >= 1
    with _memo_lock:
        _h_imag_memo[d] = count
    return count


def analytic_h(d: int) -> int:
    """Independent oracle for class_number_imag on fundamental d < -4:
    h = (w / 2|d|) * |sum_{k=1}^{|d|-1} kronecker(d,k) * k| with w = 2.

    The character values are filled in multiplicatively from the primes via
    a smallest-prime-factor sieve; the defining sum itself is unchanged.
    """
    if d >= -4:
        raise DomainError(f"analytic_h needs d < -4, got {d}")
    _check_disc(d)
    if not is_fundamental(d):
        raise DomainError(f"analytic_h needs a fundamental discriminant, got {d}")
    ad = -d
    spf = list(range(ad))
    i = 2
    while i * i < ad:
        if spf[i] == i:
            for j in range(i * i, ad, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    chi = [0] * ad
    chi[1] = 1
    chi_p: dict[int, int] = {}
    total = 1  # k = 1 contributes chi(1)*1
    for k in range(2, ad):
        p = spf[k]
        if p == k:
            c = kronecker(d, p)
            chi_p[p] = c
        else:
            c = chi[k // p] * chi_p[p]
        chi[k] = c
        if c:
            total += c * k
    if total % ad:
        raise InconsistencyError(f"character sum {total} not divisible by {ad}")
    h = abs(total) // ad
    assert h >= 1
    return h


def pell_unit(d: int) -> PellUnit:
    """Fundamental unit of the order of discriminant d > 0 (non-square).

    Runs the continued fraction of the reduced quadratic irrational
    (b + sqrt(d))/2, b the largest integer of the right parity below sqrt(d);
    the expansion is purely periodic and the convergents at the period give
    the minimal solution of x^2 - d*y^2 = +-4, with norm sign (-1)^period.
    """
    if d <= 0:
        raise DomainError(f"pell_unit needs d > 0, got {d}")
    _check_disc(d)
    s = isqrt(d)
    if s * s == d:
        raise DomainError(f"pell_unit needs a non-square, got {d}")
    with _memo_lock:
        if d in _pell_memo:
            return _pell_memo[d]
    b = s if (s - d) % 2 == 0 else s - 1
    p, q = b, 2
    q_prev, q_cur = 1, 0  # q_{-2}, q_{-1}
    period = 0
    while True:
        a = (p + s) // q
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        p = a * q - p
        q = (d - p * p) // q
        period += 1
        if (p, q) == (b, 2):
            break
    y = q_cur
    x = b * q_cur + 2 * q_prev
    unit = PellUnit(d, x, y, 1 if period % 2 == 0 else -1)
    with _memo_lock:
        _pell_memo[d] = unit
    return unit


def _reduced_indefinite_forms(d: int, s: int) -> set[tuple[int, int, int]]:
    """All primitive reduced forms (a,b,c) of discriminant d > 0:
    0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b."""
    forms: set[tuple[int, int, int]] = set()
    for b in range(2 - (d & 1), s + 1, 2):
        m4 = (d - b * b) >> 2
        if m4 <= 0:
            continue
        for a in range(1, isqrt(m4) + 1):
            if m4 % a:
                continue
            for aa in (a, m4 // a):
                # need sqrt(d) - b < 2*aa < sqrt(d) + b, i.e.
                # (2*aa + b)^2 > d and (2*aa - b < 0 or (2*aa - b)^2 < d)
                lo = 2 * aa + b
                hi = 2 * aa - b
                if lo * lo > d and (hi < 0 or hi * hi < d):
                    c = -(m4 // aa)
                    if gcd(gcd(aa, b), -c) == 1:
                        forms.add((aa, b, c))
                        forms.add((-aa, b, -c))
                if aa == m4 // a:
                    break
    return forms


def _rho(form: tuple[int, int, int], d: int, s: int) -> tuple[int, int, int]:
    """Reduction step on reduced indefinite forms: a cycle generator."""
    _, b, c = form
    m = 2 * abs(c)
    r = s - ((s + b) % m)
    return (c, r, (r * r - d) // (4 * c))


def class_number_real(d: int) -> tuple[int, int]:
    """(h_wide, h_narrow) for the real quadratic order of discriminant d > 0.

    h_narrow counts cycles of primitive reduced indefinite forms; the
    ordinary class number equals it when the fundamental unit has norm -1
    and half of it otherwise.
    """
    if d <= 0:
        raise DomainError(f"class_number_real needs d > 0, got {d}")
    _check_disc(d)
    s = isqrt(d)
    if s * s == d:
        raise DomainError(f"class_number_real needs a non-square, got {d}")
    with _memo_lock:
        if d in _h_real_memo:
            return _h_real_memo[d]
    forms = _reduced_indefinite_forms(d, s)
    cycles = 0
    while forms:
        start = next(iter(forms))
        cycles += 1
        f = start
        while True:
            forms.discard(f)
            f = _rho(f, d, s)
            if f == start:
                break
    h_narrow = cycles
    if pell_unit(d).norm_sign == -1:
        h_wide = h_narrow
    else:
        if h_narrow % 2:
            raise InconsistencyError(f"odd narrow class number {h_narrow} with norm +1 unit at {d}")
        h_wide = h_narrow // 2
    result = (h_wide, h_narrow)
    with _memo_lock:
        _h_real_memo[d] = result
    return result


def class_number_of_order(d: int) -> int:
    """Ordinary class number h(d) for any discriminant d (sign dispatch)."""
    return class_number_imag(d) if d < 0 else class_number_real(d)[0]


def real_unit_index(d0: int, f: int) -> int:
    """Index [O_{d0}^* : O_{d0 f^2}^*]: least k with eps_{d0}^k in the suborder.

    A unit (x + y*sqrt(d0))/2 lies in the order of conductor f exactly when
    f divides y.
    """
    u0 = pell_unit(d0)
    x, y = u0.x, u0.y
    cx, cy = x, y
    k = 1
    while cy % f:
        cx, cy = (cx * x + cy * y * d0) // 2, (cx * y + cy * x) // 2
        k += 1
    return k
