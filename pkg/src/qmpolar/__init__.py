"""qmpolar: exact class-number arithmetic for counting principal line bundles
and polarizations on abelian varieties with quaternionic multiplication."""

from .arith import Discriminant, PrimeFactorization, decompose_discriminant, factorize, kronecker
from .bqf import PellUnit, analytic_h, class_number_imag, class_number_real, pell_unit
from .errors import (
    AmbiguousConductorError,
    DeskScaleExceededError,
    DomainError,
    InconsistencyError,
    QmpolarError,
    SearchExhaustedError,
    UnsupportedConfigurationError,
)
from .fields import BaseField, FieldElt, FieldIdeal, make_field, tp_units_mod_squares, units_mod_squares
from .quat import (
    PureQuaternion,
    QuaternionAlgebra,
    discriminant_of,
    global_index,
    hilbert_symbol,
    local_index,
)
from .counts import (
    PolarizationProfile,
    QMContext,
    make_context,
    pi_one_surface,
    pi_profile,
    pi_total,
    pi_zero,
    polarizable,
    principal_existence,
)

__all__ = [
    "AmbiguousConductorError",
    "BaseField",
    "DeskScaleExceededError",
    "Discriminant",
    "DomainError",
    "FieldElt",
    "FieldIdeal",
    "InconsistencyError",
    "PellUnit",
    "PolarizationProfile",
    "PrimeFactorization",
    "PureQuaternion",
    "QMContext",
    "QmpolarError",
    "QuaternionAlgebra",
    "SearchExhaustedError",
    "UnsupportedConfigurationError",
    "analytic_h",
    "class_number_imag",
    "class_number_real",
    "decompose_discriminant",
    "discriminant_of",
    "factorize",
    "global_index",
    "hilbert_symbol",
    "kronecker",
    "local_index",
    "make_context",
    "make_field",
    "pell_unit",
    "pi_one_surface",
    "pi_profile",
    "pi_total",
    "pi_zero",
    "polarizable",
    "principal_existence",
    "tp_units_mod_squares",
    "units_mod_squares",
]
