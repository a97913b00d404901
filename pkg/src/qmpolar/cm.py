"""Quadratic CM-type extensions L = F(sqrt(-delta)): conductor of the ring
R_F[sqrt(-delta)], the lattice of orders above it, class numbers of those
orders, and the unit-norm exponents feeding the counting formulas.

The conductor is supported at primes over 2 prime to delta.  Its exponent at
such a prime q is found constructively: the largest a <= e(q) for which some
b satisfies b^2 = -delta mod q^{2a} with v(2b) >= a, which is exactly the
condition for (b + sqrt(-delta))/pi^a to be integral.  The result is checked
against the digit-expansion rule, which for quadratic base fields is never
in its undetermined region.

Class numbers of suborders come from the conductor formula

    h(S) = h(L) |(O_L/f O_L)^*| / ( |(R_F/f)^*| [O_L^* : S^*] ),

with the two totient factors evaluated by the standard local formulas and
the unit index by reducing a generating system of O_L^* into the finite
quotient group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iproduct
from typing import Optional

from .arith import decompose_discriminant, factorize
from .bqf import class_number_imag, class_number_real, pell_unit, real_unit_index
from .errors import (
    AmbiguousConductorError,
    DeskScaleExceededError,
    DomainError,
    InconsistencyError,
    UnsupportedConfigurationError,
)
from .fields import BaseField, FieldElt, PrimeOver2, make_field, primes_over_2, valuation
from .quartic import (
    ClassData,
    class_data_biquadratic,
    class_data_cm_quartic,
    class_data_generic,
    span_f2,
    unit_class,
)

DESK_SCALE_DISC_BOUND = 10**8


# --------------------------------------------------------------------------
# elements of L


@dataclass(frozen=True)
class LElt:
    """A + B*alpha with alpha = sqrt(-delta)."""

    ext: "CMExtension"
    a: FieldElt
    b: FieldElt

    def __add__(self, other: "LElt") -> "LElt":
        return LElt(self.ext, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "LElt") -> "LElt":
        return LElt(self.ext, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "LElt":
        return LElt(self.ext, -self.a, -self.b)

    def __mul__(self, other: "LElt") -> "LElt":
        d = self.ext.delta
        return LElt(
            self.ext,
            self.a * other.a - d * (self.b * other.b),
            self.a * other.b + self.b * other.a,
        )

    def conj(self) -> "LElt":
        return LElt(self.ext, self.a, -self.b)

    def relative_norm(self) -> FieldElt:
        return self.a * self.a + self.ext.delta * (self.b * self.b)

    def relative_trace(self) -> FieldElt:
        return self.a + self.a

    def absolute_norm(self) -> Fraction:
        return self.relative_norm().norm()

    def inverse(self) -> "LElt":
        n = self.relative_norm()
        if n.is_zero():
            raise ZeroDivisionError
        return LElt(self.ext, self.a / n, -(self.b / n))

    def is_integral(self) -> bool:
        """Membership in O_L = R_F<1, theta>, theta = (b0 + alpha)/g."""
        ext = self.ext
        bcoef = self.b * ext.theta_den
        acoef = self.a - (bcoef * ext.theta_b0) / ext.theta_den
        return bcoef.is_integral() and acoef.is_integral()

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, LElt) and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"({self.a}) + ({self.b})*alpha"


# --------------------------------------------------------------------------
# the extension datum


@dataclass
class CMExtension:
    """L = F(sqrt(-delta)) with conductor, discriminant and class data."""

    base: BaseField
    delta: FieldElt
    conductor_primes: tuple[tuple[PrimeOver2, int], ...]
    conductor_norm: int
    conductor_gen: FieldElt
    rel_disc_norm: int
    abs_disc: int
    theta_b0: FieldElt
    theta_den: FieldElt
    _class_data: Optional[ClassData] = dc_field(default=None, repr=False)
    _two_adic: Optional[tuple] = dc_field(default=None, repr=False)

    def elt(self, a, b=0) -> LElt:
        fa = a if isinstance(a, FieldElt) else self.base.elt(a)
        fb = b if isinstance(b, FieldElt) else self.base.elt(b)
        return LElt(self, fa, fb)

    def theta(self) -> LElt:
        one = self.base.one()
        return LElt(self, self.theta_b0 / self.theta_den, one / self.theta_den)

    @property
    def h_L(self) -> int:
        return self.class_data().h

    def class_data(self) -> ClassData:
        if self._class_data is None:
            self._class_data = _compute_class_data(self)
        return self._class_data

    def is_cm(self) -> bool:
        return self.delta.is_totally_positive()

    def two_adic_splitting(self) -> tuple[tuple[PrimeOver2, str], ...]:
        """Behaviour in L of every prime of F over 2."""
        if self._two_adic is None:
            out = []
            for q in primes_over_2(self.base):
                out.append((q, self._splitting_at_2(q)))
            self._two_adic = tuple(out)
        return self._two_adic

    def _splitting_at_2(self, q: PrimeOver2) -> str:
        if valuation(self.delta, q.pi, cap=2) == 1:
            return "ramified"
        d_rel = (self.base.elt(4) * self.delta) / (self.conductor_gen * self.conductor_gen)
        if valuation(d_rel, q.pi, cap=1) >= 1:
            return "ramified"
        k = 2 * q.e + 1
        return "split" if _square_mod_power(self.base, -self.delta, q.pi, k) else "inert"


def _square_mod_power(base: BaseField, x: FieldElt, pi: FieldElt, k: int) -> bool:
    """Is the q-adic unit x a square modulo q^k?  Residues are enumerated
    through i + j*w over 0 <= i, j < 2^k, which surjects onto R_F/q^k."""
    span = 2**k
    from .quartic import omega_elt

    w = omega_elt(base)
    for i in range(span):
        for j in range(span):
            b = base.elt(i) + base.elt(j) * w
            if valuation(b * b - x, pi, cap=k) >= k:
                return True
    return False


# --------------------------------------------------------------------------
# conductor


_conductor_cache: dict[tuple, CMExtension] = {}


def conductor(base: BaseField, delta) -> CMExtension:
    """Extension datum for L = F(sqrt(-delta)) with the exact conductor of
    R_F[sqrt(-delta)]."""
    if not isinstance(delta, FieldElt):
        delta = base.elt(delta)
    if delta.is_zero():
        raise DomainError("delta must be nonzero")
    if not delta.is_integral():
        raise DomainError("delta must be integral")
    if (-delta).sqrt_in_field() is not None:
        raise DomainError("-delta is a square in F; the extension collapses")
    key = (base.m, delta.x, delta.y)
    if key in _conductor_cache:
        return _conductor_cache[key]
    if base.is_rational:
        ext = _conductor_rational(base, delta)
    elif base.restricted:
        raise UnsupportedConfigurationError(
            f"the CM order machinery needs h(F) = 1, got h = {base.h}"
        )
    else:
        ext = _conductor_quadratic(base, delta)
    _conductor_cache[key] = ext
    return ext


def _conductor_rational(base: BaseField, delta: FieldElt) -> CMExtension:
    d = int(delta.x)
    disc = decompose_discriminant(-4 * d)
    f = disc.conductor
    dk = disc.fundamental_part
    if all(e == 1 for _, e in factorize(d).factors):
        expected = 2 if (-d) % 4 == 1 else 1
        assert f == expected
        _check_remark_rule_rational(d, f)
    two = PrimeOver2(base.elt(2), 1, 1)
    v2 = 0
    odd = f
    while odd % 2 == 0:
        odd //= 2
        v2 += 1
    if dk % 2:
        theta_b0 = base.elt(Fraction(dk * f, 2))
        assert (dk * f) % 2 == 0
    else:
        theta_b0 = base.elt(0)
    ext = CMExtension(
        base=base,
        delta=delta,
        conductor_primes=((two, v2),) if v2 else (),
        conductor_norm=f,
        conductor_gen=base.elt(f),
        rel_disc_norm=abs(dk),
        abs_disc=abs(dk),
        theta_b0=theta_b0,
        theta_den=base.elt(f),
    )
    th = ext.theta()
    assert th.relative_trace().is_integral() and th.relative_norm().is_integral()
    return ext


def _check_remark_rule_rational(d: int, f: int) -> None:
    """Digit-expansion rule at p = 2 (e = 1, residue representatives {0,1})."""
    if d % 2 == 0:
        assert f == 1
        return
    md = -d
    k = 1
    while (md - 1) % (2 ** (k + 1)) == 0 and k < 40:
        k += 1
    if k <= 2:
        a = k // 2
    elif k // 2 >= 1:
        a = 1
    else:  # pragma: no cover
        raise AmbiguousConductorError("undetermined 2-adic conductor exponent")
    assert f == 2**a, (d, f, a)


def _conductor_quadratic(base: BaseField, delta: FieldElt) -> CMExtension:
    for p, e in factorize(abs(int(delta.norm()))).factors:
        if p == 2 or e < 2:
            continue
        pp = base.elt(p)
        if ((delta / pp) / pp).is_integral():
            raise UnsupportedConfigurationError(
                f"delta has a square factor at the odd prime {p}; only squarefree deltas are supported"
            )
    cond: list[tuple[PrimeOver2, int]] = []
    for q in primes_over_2(base):
        vq = valuation(delta, q.pi, cap=3)
        if vq >= 2:
            raise UnsupportedConfigurationError("delta is not squarefree at a prime over 2")
        if vq == 1:
            continue
        a = _conductor_exponent_at(base, delta, q)
        _check_remark_rule_quadratic(base, delta, q, a)
        if a:
            cond.append((q, a))
    f_norm = 1
    f_gen = base.one()
    for q, a in cond:
        f_norm *= q.norm**a
        for _ in range(a):
            f_gen = f_gen * q.pi
    n4d = abs(int((base.elt(4) * delta).norm()))
    if n4d % (f_norm * f_norm):
        raise InconsistencyError("conductor norm does not divide the order discriminant")
    rel = n4d // (f_norm * f_norm)
    abs_disc = rel * base.disc**2
    if abs_disc > DESK_SCALE_DISC_BOUND:
        raise DeskScaleExceededError(f"|disc L| = {abs_disc} exceeds the desk-scale bound")
    b0 = _theta_witness(base, delta, cond)
    ext = CMExtension(
        base=base,
        delta=delta,
        conductor_primes=tuple(cond),
        conductor_norm=f_norm,
        conductor_gen=f_gen,
        rel_disc_norm=rel,
        abs_disc=abs_disc,
        theta_b0=b0,
        theta_den=f_gen,
    )
    th = ext.theta()
    if not (th.relative_trace().is_integral() and th.relative_norm().is_integral()):
        raise InconsistencyError("theta witness is not integral")
    return ext


def _witness_ok(base: BaseField, delta: FieldElt, b: FieldElt, pi: FieldElt, a: int) -> bool:
    return (
        valuation(b + b, pi, cap=a) >= a
        and valuation(b * b + delta, pi, cap=2 * a) >= 2 * a
    )


def _conductor_exponent_at(base: BaseField, delta: FieldElt, q: PrimeOver2) -> int:
    from .quartic import omega_elt

    w = omega_elt(base)
    for a in range(q.e, 0, -1):
        span = 2 ** (2 * a)
        for i in range(span):
            for j in range(span):
                b = base.elt(i) + base.elt(j) * w
                if _witness_ok(base, delta, b, q.pi, a):
                    return a
    return 0


def _residue_reps(base: BaseField, q: PrimeOver2) -> list[FieldElt]:
    if q.f == 1:
        return [base.elt(0), base.elt(1)]
    from .quartic import omega_elt

    w = omega_elt(base)
    return [base.elt(0), base.elt(1), w, base.elt(1) + w]


def _check_remark_rule_quadratic(
    base: BaseField, delta: FieldElt, q: PrimeOver2, a_computed: int
) -> None:
    md = -delta
    x0 = None
    for r in _residue_reps(base, q):
        if valuation(md - r, q.pi, cap=1) >= 1:
            x0 = r
            break
    assert x0 is not None
    k = valuation(md - x0, q.pi, cap=4 * q.e + 8)
    e = q.e
    if k <= e + 1:
        a_rule = k // 2
    elif k // 2 >= e:
        a_rule = e
    else:
        raise AmbiguousConductorError(
            f"conductor exponent undetermined at a prime over 2 (k = {k}, e = {e})"
        )
    assert a_rule == a_computed, (k, e, a_rule, a_computed)


def _theta_witness(
    base: BaseField, delta: FieldElt, cond: list[tuple[PrimeOver2, int]]
) -> FieldElt:
    if not cond:
        return base.elt(0)
    from .quartic import omega_elt

    w = omega_elt(base)
    span = 2 ** (2 * max(a for _, a in cond) + 2)
    for i in range(span):
        for j in range(span):
            b = base.elt(i) + base.elt(j) * w
            if all(_witness_ok(base, delta, b, q.pi, a) for q, a in cond):
                return b
    raise InconsistencyError("no integral generator witness found")  # pragma: no cover


# --------------------------------------------------------------------------
# class data dispatch


def _compute_class_data(ext: CMExtension) -> ClassData:
    base = ext.base
    if base.is_rational:
        d0 = _fundamental_disc_rational(ext)
        h = class_number_imag(d0) if d0 < 0 else class_number_real(d0)[0]
        return ClassData(h, [ext.elt(-1)], "quadratic-delegation")
    if ext.delta.is_rational_value():
        return class_data_biquadratic(ext)
    if ext.is_cm():
        return class_data_cm_quartic(ext)
    return class_data_generic(ext)


def _fundamental_disc_rational(ext: CMExtension) -> int:
    return decompose_discriminant(-4 * int(ext.delta.x)).fundamental_part


def classgroup_small(ext: CMExtension) -> tuple[int, int, dict]:
    """(h(O_L), |disc L|, provenance) for the maximal order of L."""
    if ext.abs_disc > DESK_SCALE_DISC_BOUND:
        raise DeskScaleExceededError(f"|disc L| = {ext.abs_disc} exceeds the desk-scale bound")
    data = ext.class_data()
    th = ext.theta()
    info = {
        "method": data.method,
        "theta_trace": str(th.relative_trace()),
        "theta_norm": str(th.relative_norm()),
        "conductor_norm": ext.conductor_norm,
    }
    return data.h, ext.abs_disc, info


# --------------------------------------------------------------------------
# order lattice


@dataclass
class CMOrderDescriptor:
    """Order of conductor dividing the conductor of R_F[sqrt(-delta)]."""

    extension: CMExtension
    conductor_exponents: tuple[int, ...]
    conductor_divisor_norm: int
    h_S: int
    e_S: int
    e_S_plus: int
    ample: Optional[bool]

    @property
    def is_maximal(self) -> bool:
        return self.conductor_divisor_norm == 1


def order_lattice(ext: CMExtension) -> list[CMOrderDescriptor]:
    """One descriptor per ideal divisor of the conductor."""
    if ext.base.is_rational:
        return _order_lattice_rational(ext)
    return _order_lattice_quadratic(ext)


def order_class_number(order: CMOrderDescriptor) -> int:
    return order.h_S


def unit_norm_exponents(order: CMOrderDescriptor) -> tuple[int, int]:
    return order.e_S, order.e_S_plus


def eichler_count(order: CMOrderDescriptor) -> int:
    """h(S)/h(F), the number of conjugacy classes of optimal embeddings."""
    h_f = order.extension.base.h
    if order.h_S % h_f:
        raise InconsistencyError(f"h(S) = {order.h_S} not divisible by h(F) = {h_f}")
    return order.h_S // h_f


def pollack_count(order: CMOrderDescriptor) -> int:
    """2^(e_S - 1) h(S) / h(F), the count of twisted conjugation classes."""
    num = 2**order.e_S * order.h_S
    den = 2 * order.extension.base.h
    if num % den:
        raise InconsistencyError(f"non-integral twisted class count {num}/{den}")
    return num // den


# ---- F = Q ----------------------------------------------------------------


def _order_lattice_rational(ext: CMExtension) -> list[CMOrderDescriptor]:
    out = []
    for f in factorize(ext.conductor_norm).divisors() if ext.conductor_norm > 1 else [1]:
        h = _order_h_rational(ext, f)
        e, ep = _unit_exponents_rational(ext, f)
        out.append(CMOrderDescriptor(ext, (f,), f, h, e, ep, True))
    out.sort(key=lambda s: s.conductor_divisor_norm)
    return out


def _order_h_rational(ext: CMExtension, f: int) -> int:
    """Class number of the order of conductor f, by direct enumeration of the
    unit group of O_K/f O_K."""
    d0 = _fundamental_disc_rational(ext)
    h0 = class_number_imag(d0) if d0 < 0 else class_number_real(d0)[0]
    if f == 1:
        return h0
    cnt = _unit_count_quotient_rational(d0, f)
    phi = _euler_phi(f)
    if d0 < 0:
        w0 = 6 if d0 == -3 else 4 if d0 == -4 else 2
        idx = w0 // 2
    else:
        idx = real_unit_index(d0, f)
    num = h0 * cnt
    den = phi * idx
    if num % den:
        raise InconsistencyError(f"order class number is not integral: {num}/{den}")
    return num // den


def _euler_phi(f: int) -> int:
    out = f
    for p, _ in factorize(f).factors:
        out = out // p * (p - 1)
    return out


def _unit_count_quotient_rational(d0: int, f: int) -> int:
    """|(O_K/f O_K)^*| over the basis {1, (d0+sqrt d0)/2}: x = i + j*w is a
    unit exactly when its norm is prime to f."""
    cnt = 0
    for i in range(f):
        for j in range(f):
            n4 = (2 * i + j * d0) ** 2 - d0 * j * j
            assert n4 % 4 == 0
            if math.gcd(n4 // 4, f) == 1:
                cnt += 1
    return cnt


def _unit_exponents_rational(ext: CMExtension, f: int) -> tuple[int, int]:
    d = int(ext.delta.x)
    if d > 0:
        return 1, 0  # imaginary quadratic: unit norms are all 1
    d0 = _fundamental_disc_rational(ext)
    unit = pell_unit(d0 * f * f)
    return (0 if unit.norm_sign == -1 else 1), 0


# ---- real quadratic F ------------------------------------------------------


def _order_lattice_quadratic(ext: CMExtension) -> list[CMOrderDescriptor]:
    ample = True if ext.base.h_plus == ext.base.h else None
    ranges = [range(a + 1) for _, a in ext.conductor_primes]
    out = []
    for exps in iproduct(*ranges) if ranges else [()]:
        norm = 1
        for (q, _), c in zip(ext.conductor_primes, exps):
            norm *= q.norm**c
        h, e, ep = _order_data_quadratic(ext, exps)
        out.append(CMOrderDescriptor(ext, tuple(exps), norm, h, e, ep, ample))
    out.sort(key=lambda s: s.conductor_divisor_norm)
    return out


def _order_data_quadratic(ext: CMExtension, exps: tuple[int, ...]) -> tuple[int, int, int]:
    base = ext.base
    data = ext.class_data()
    if not any(exps):
        span = data.norm_classes_span(ext)
        return data.h, _exponent_from_span(base, span), _exponent_plus_from_span(base, span)
    # totient factors
    num_units = 1
    den_units = 1
    split_of = {qq.pi: s for qq, s in ext.two_adic_splitting()}
    for (q, _a), c in zip(ext.conductor_primes, exps):
        if c == 0:
            continue
        nq = q.norm
        den_units *= nq**c - nq ** (c - 1)
        spl = split_of[q.pi]
        if spl == "split":
            num_units *= (nq**c - nq ** (c - 1)) ** 2
        elif spl == "inert":
            num_units *= nq ** (2 * c) - nq ** (2 * (c - 1))
        else:
            num_units *= nq ** (2 * c) - nq ** (2 * c - 1)
    g_div = base.one()
    for (q, _a), c in zip(ext.conductor_primes, exps):
        for _ in range(c):
            g_div = g_div * q.pi
    idx, kernel_span = _unit_image_data(ext, g_div, exps)
    num = data.h * num_units
    den = den_units * idx
    if num % den:
        raise InconsistencyError(f"order class number is not integral: {num}/{den}")
    return num // den, _exponent_from_span(base, kernel_span), _exponent_plus_from_span(base, kernel_span)


def _exponent_from_span(base: BaseField, span: set[tuple[int, int]]) -> int:
    full = 4  # |R_F^*/(R_F^*)^2| for a real quadratic field
    e = int(math.log2(full // len(span)))
    assert 2 ** e * len(span) == full
    return e


def _exponent_plus_from_span(base: BaseField, span: set[tuple[int, int]]) -> int:
    eps = base.fundamental_unit
    if int(eps.norm()) == -1:
        return 0  # totally positive units are squares
    tp = eps if eps.is_totally_positive() else -eps
    cls = unit_class(base, tp)
    return 0 if cls in span else 1


def _unit_image_data(ext: CMExtension, g_div: FieldElt, exps) -> tuple[int, set]:
    """([O_L^* : S^*], norm classes of S^*) for S = R_F + f' O_L, f' = (g_div).

    The unit generators are reduced into the finite group
    G = (O_L/f' O_L)^* / (R_F/f')^*.  Working in the product of G with the
    norm-class group, the subgroup generated by the pairs (image, norm class)
    yields both the unit index (size of the G-projection) and the norm
    classes of S^* (pairs with trivial G-component).
    """
    base = ext.base
    data = ext.class_data()
    gens = [u for u in data.unit_gens]
    r_units = _r_unit_residues(ext, g_div, exps)
    classes: list[LElt] = []  # representatives of distinct G-classes

    def same_class(x: LElt, y: LElt) -> bool:
        for r in r_units:
            if _in_ideal(ext, x - y * ext.elt(r), g_div):
                return True
        return False

    def locate(x: LElt) -> int:
        for i, c in enumerate(classes):
            if same_class(x, c):
                return i
        classes.append(x)
        return len(classes) - 1

    identity = locate(ext.elt(1))
    gen_pairs = [(u, locate(u), unit_class(base, u.relative_norm())) for u in gens]
    # closure of the subgroup of G x (norm classes) generated by the pairs
    reps: dict[tuple[int, tuple[int, int]], LElt] = {(identity, (0, 0)): ext.elt(1)}
    frontier = [(identity, (0, 0))]
    while frontier:
        key = frontier.pop()
        x = reps[key]
        for u, _gi, gc in gen_pairs:
            y = x * u
            new_key = (locate(y), (key[1][0] ^ gc[0], key[1][1] ^ gc[1]))
            if new_key not in reps:
                reps[new_key] = y
                frontier.append(new_key)
    idx = len({k[0] for k in reps})
    kernel_classes = {k[1] for k in reps if k[0] == identity}
    return idx, span_f2(kernel_classes)


def _r_unit_residues(ext: CMExtension, g_div: FieldElt, exps) -> list[FieldElt]:
    """Residues of (R_F/f')^* lifted to small elements."""
    from .quartic import omega_elt

    base = ext.base
    w = omega_elt(base)
    span = 2 ** (2 * max((c for c in exps), default=0) + 1)
    out = []
    for i in range(span):
        for j in range(span):
            r = base.elt(i) + base.elt(j) * w
            ok = True
            for (q, _a), c in zip(ext.conductor_primes, exps):
                if c and valuation(r, q.pi, cap=1) >= 1:
                    ok = False
                    break
            if ok:
                out.append(r)
    return out


def _in_ideal(ext: CMExtension, z: LElt, g_div: FieldElt) -> bool:
    if g_div == ext.base.one():
        return z.is_zero()
    w = LElt(ext, z.a / g_div, z.b / g_div)
    return w.is_integral()


# convenience re-export for counting code


def norm_classes_of_maximal_order(ext: CMExtension) -> set[tuple[int, int]]:
    return ext.class_data().norm_classes_span(ext)
