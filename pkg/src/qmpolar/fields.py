"""The totally real base field F: either Q or a real quadratic field Q(sqrt m).

Field elements are exact: x + y*sqrt(m) with Fraction coordinates (y = 0 and
m = None for Q).  Class data for the quadratic case comes from the binary
quadratic form engine; the narrow/wide relation is read off the norm of the
fundamental unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .arith import factorize
from .bqf import PellUnit, class_number_real, pell_unit
from .errors import DomainError, SearchExhaustedError, UnsupportedConfigurationError

_GENERATOR_WINDOW_SLACK = 16  # extra width of the y-window in generator searches


@dataclass(frozen=True)
class BaseField:
    """Q (m is None) or Q(sqrt m) with cached class and unit data."""

    m: Optional[int]
    disc: int
    degree: int
    h: int
    h_plus: int
    fundamental_unit: Optional["FieldElt"]
    sigma_space_dim: int

    def __post_init__(self) -> None:
        assert self.h_plus == self.h * 2 ** (self.degree - self.sigma_space_dim)

    @property
    def is_rational(self) -> bool:
        return self.m is None

    @property
    def restricted(self) -> bool:
        """True when h(F) > 1; principality-dependent operations refuse."""
        return self.h > 1

    def one(self) -> "FieldElt":
        return FieldElt(self, Fraction(1), Fraction(0))

    def elt(self, x, y=0) -> "FieldElt":
        return FieldElt(self, Fraction(x), Fraction(y))

    def __repr__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt{self.m})"


@dataclass(frozen=True)
class FieldElt:
    """Exact element x + y*sqrt(m) of the base field."""

    field: BaseField
    x: Fraction
    y: Fraction

    def _lift(self, other) -> "FieldElt":
        if isinstance(other, FieldElt):
            assert other.field.m == self.field.m
            return other
        return FieldElt(self.field, Fraction(other), Fraction(0))

    def __add__(self, other) -> "FieldElt":
        o = self._lift(other)
        return FieldElt(self.field, self.x + o.x, self.y + o.y)

    def __sub__(self, other) -> "FieldElt":
        o = self._lift(other)
        return FieldElt(self.field, self.x - o.x, self.y - o.y)

    def __neg__(self) -> "FieldElt":
        return FieldElt(self.field, -self.x, -self.y)

    def __mul__(self, other) -> "FieldElt":
        o = self._lift(other)
        m = self.field.m or 0
        return FieldElt(
            self.field,
            self.x * o.x + m * self.y * o.y,
            self.x * o.y + self.y * o.x,
        )

    __rmul__ = __mul__
    __radd__ = __add__

    def __truediv__(self, other) -> "FieldElt":
        o = self._lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        inv = FieldElt(self.field, o.x / n, -o.y / n) if not self.field.is_rational else FieldElt(self.field, 1 / o.x, Fraction(0))
        return self * inv

    def conj(self) -> "FieldElt":
        return FieldElt(self.field, self.x, -self.y)

    def norm(self) -> Fraction:
        """Norm to Q: the element itself for Q, x^2 - m*y^2 otherwise."""
        if self.field.is_rational:
            return self.x
        return self.x * self.x - self.field.m * self.y * self.y

    def trace(self) -> Fraction:
        return self.x if self.field.is_rational else 2 * self.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational_value(self) -> bool:
        return self.y == 0

    def sign_at(self, place: int) -> int:
        """Exact sign of the image under the place-th real embedding
        (place 0 sends sqrt(m) to +sqrt(m), place 1 to -sqrt(m))."""
        if self.is_zero():
            return 0
        x, y = self.x, self.y
        if place == 1:
            y = -y
        if y == 0:
            return 1 if x > 0 else -1
        if x == 0:
            return 1 if y > 0 else -1
        if x > 0 and y > 0:
            return 1
        if x < 0 and y < 0:
            return -1
        # mixed signs: compare x^2 with m*y^2
        lhs = x * x
        rhs = self.field.m * y * y
        if x > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign_at(i) for i in range(self.field.degree))

    def is_totally_positive(self) -> bool:
        return all(s > 0 for s in self.signs())

    def is_integral(self) -> bool:
        """Membership in the ring of integers R_F."""
        if self.field.is_rational:
            return self.x.denominator == 1
        m = self.field.m
        if m % 4 == 1:
            a, b = 2 * self.x, 2 * self.y
            return a.denominator == 1 and b.denominator == 1 and (a - b) % 2 == 0
        return self.x.denominator == 1 and self.y.denominator == 1

    def sqrt_in_field(self) -> Optional["FieldElt"]:
        """Exact square root inside F, or None."""
        if self.field.is_rational:
            r = _fraction_sqrt(self.x)
            return None if r is None else FieldElt(self.field, r, Fraction(0))
        if self.y == 0:
            r = _fraction_sqrt(self.x)
            if r is not None:
                return FieldElt(self.field, r, Fraction(0))
            r = _fraction_sqrt(self.x / self.field.m)
            if r is not None:
                return FieldElt(self.field, Fraction(0), r)
            return None
        # p + q*sqrt(m): solve (a + b sqrt m)^2, a^2 + m b^2 = p, 2ab = q
        n = _fraction_sqrt(self.norm())
        if n is None:
            return None
        for root in (n, -n):
            a2 = (self.x + root) / 2
            a = _fraction_sqrt(a2)
            if a is not None and a != 0:
                b = self.y / (2 * a)
                cand = FieldElt(self.field, a, b)
                if cand * cand == self:
                    return cand
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElt):
            other = self._lift(other)
        return self.field.m == other.field.m and self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.field.m, self.x, self.y))

    def __repr__(self) -> str:
        if self.field.is_rational or self.y == 0:
            return str(self.x)
        return f"{self.x}+{self.y}*sqrt{self.field.m}"


def _fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


_field_cache: dict[Optional[int], BaseField] = {}


def make_field(m: Optional[int] = None) -> BaseField:
    """Construct Q (m None) or Q(sqrt m) for squarefree m > 1."""
    if m in _field_cache:
        return _field_cache[m]
    if m is None:
        field = BaseField(None, 1, 1, 1, 1, None, 1)
        _field_cache[None] = field
        return field
    if m <= 1:
        raise DomainError(f"need m > 1 for a real quadratic field, got {m}")
    if any(e > 1 for _, e in factorize(m).factors):
        raise DomainError(f"{m} is not squarefree")
    disc = m if m % 4 == 1 else 4 * m
    h, _h_narrow = class_number_real(disc)
    unit = pell_unit(disc)
    # express (x + y*sqrt(disc))/2 in terms of sqrt(m)
    if m % 4 == 1:
        ux, uy = Fraction(unit.x, 2), Fraction(unit.y, 2)
    else:
        ux, uy = Fraction(unit.x, 2), Fraction(unit.y)
    sigma_dim = 2 if unit.norm_sign == -1 else 1
    h_plus = h * 2 ** (2 - sigma_dim)
    field = BaseField(m, disc, 2, h, h_plus, None, sigma_dim)
    object.__setattr__(field, "fundamental_unit", FieldElt(field, ux, uy))
    eps = field.fundamental_unit
    assert eps.is_integral() and abs(eps.norm()) == 1
    assert int(eps.norm()) == unit.norm_sign
    _field_cache[m] = field
    return field


def units_mod_squares(field: BaseField) -> list[FieldElt]:
    """Representatives of R_F^* / (R_F^*)^2: {1,-1} for Q, {±1, ±eps} else."""
    one = field.one()
    if field.is_rational:
        return [one, -one]
    eps = field.fundamental_unit
    return [one, -one, eps, -eps]


def tp_units_mod_squares(field: BaseField) -> list[FieldElt]:
    """Representatives of totally positive units modulo squares."""
    one = field.one()
    if field.is_rational:
        return [one]
    eps = field.fundamental_unit
    if int(eps.norm()) == -1:
        return [one]
    tp = eps if eps.is_totally_positive() else -eps
    assert tp.is_totally_positive()
    return [one, tp]


@dataclass(frozen=True)
class PrimeOver2:
    """A prime of R_F over 2: principal generator, ramification e, residue f."""

    pi: FieldElt
    e: int
    f: int

    @property
    def norm(self) -> int:
        return 2**self.f


def find_generator_of_norm(field: BaseField, target: int, bound: int = 40) -> Optional[FieldElt]:
    """Small-coefficient search for an integral element of |norm| = target."""
    if field.is_rational:
        return field.elt(target)
    m = field.m
    half = m % 4 == 1
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            x = field.elt(i, j)
            if abs(x.norm()) == target:
                return x
            if half:
                x = field.elt(Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2))
                if abs(x.norm()) == target:
                    return x
    return None


def primes_over_2(field: BaseField) -> tuple[PrimeOver2, ...]:
    """The primes of R_F over 2, with principal generators (needs h(F) = 1)."""
    if field.is_rational:
        return (PrimeOver2(field.elt(2), 1, 1),)
    if field.restricted:
        raise UnsupportedConfigurationError("2-adic machinery needs h(F) = 1")
    m = field.m
    if m % 8 == 1:
        pi = find_generator_of_norm(field, 2)
        if pi is None:
            raise UnsupportedConfigurationError(f"no small generator of norm 2 in Q(sqrt{m})")
        return (PrimeOver2(pi, 1, 1), PrimeOver2(pi.conj(), 1, 1))
    if m % 8 == 5:
        return (PrimeOver2(field.elt(2), 1, 2),)
    pi = find_generator_of_norm(field, 2)
    if pi is None:
        raise UnsupportedConfigurationError(f"no small generator of norm 2 in Q(sqrt{m})")
    return (PrimeOver2(pi, 2, 1),)


def valuation(x: FieldElt, pi: FieldElt, cap: int = 64) -> int:
    """v_q(x) for the principal prime q = (pi), by exact division."""
    if x.is_zero():
        return cap
    v = 0
    cur = x
    while v < cap:
        nxt = cur / pi
        if not nxt.is_integral():
            return v
        cur = nxt
        v += 1
    return cap


@dataclass(frozen=True)
class FieldIdeal:
    """Ideal of R_F described by its norm and (optionally) a generator."""

    field: BaseField
    norm: int
    generator: Optional[FieldElt] = None

    def __post_init__(self) -> None:
        assert self.norm >= 1
        if self.generator is not None:
            assert abs(self.generator.norm()) == self.norm


def totally_positive_generator(ideal: FieldIdeal) -> Optional[FieldElt]:
    """A totally positive generator of the ideal, or None when no unit
    multiple of any generator is totally positive.

    Requires h(F) = 1; with a generator supplied only its unit orbit
    {±g, ±g*eps} is inspected, otherwise a bounded coefficient window is
    searched for elements of the right norm first.
    """
    field = ideal.field
    if field.restricted:
        raise UnsupportedConfigurationError(
            f"totally positive generator search needs h(F) = 1, got h = {field.h}"
        )
    if field.is_rational:
        return field.elt(ideal.norm)
    candidates: list[FieldElt] = []
    if ideal.generator is not None:
        candidates.append(ideal.generator)
    else:
        m = field.m
        ymax = isqrt(ideal.norm // m) + 1 + _GENERATOR_WINDOW_SLACK
        half = m % 4 == 1
        denominators = (1, 2) if half else (1,)
        for den in denominators:
            for ynum in range(0, den * ymax + 1):
                y = Fraction(ynum, den)
                for target in (ideal.norm, -ideal.norm):
                    x2 = target + m * y * y
                    if x2 < 0:
                        continue
                    x = _fraction_sqrt(x2)
                    if x is None:
                        continue
                    cand = FieldElt(field, x, y)
                    if cand.is_integral() and abs(cand.norm()) == ideal.norm:
                        candidates.append(cand)
        if not candidates:
            raise SearchExhaustedError(
                f"no element of norm ±{ideal.norm} in the search window"
            )
    eps = field.fundamental_unit
    for g in candidates:
        for u in (field.one(), -field.one(), eps, -eps):
            adjusted = g * u
            if adjusted.is_totally_positive():
                return adjusted
    return None
