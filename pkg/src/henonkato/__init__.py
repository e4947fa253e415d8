"""Exact normal forms of generalized Hénon maps at infinity and the combinatorics
of their Kato surfaces."""

from .errors import (
    HenonKatoError,
    InconsistentNormalFormError,
    NotHenonTypeError,
    SolverContradiction,
    TypeUndefinedError,
    UnrealizableTargetError,
    ValidationError,
)
from .gaussian import GaussianRational
from .series import LaurentSeries, Series
from .henon import HenonFactor, HenonMap, degrees, rotate, theta_conjugate, validate
from .germ import NormalForm, PsiChain, h_hat, normal_form, psi_chain
from .kato import (
    KatoInvariants,
    TowerDescription,
    b2,
    build_henon_tower,
    cyclic_equal,
    dloussky_closed,
    invariants_closed,
    simulate_tower,
    type_from_support,
)
from .reconstruct import (
    TargetParameters,
    convert_parametrization,
    degrees_from_normal_form,
    henon_from_normal_form,
    solve_surjectivity,
)
from .decide import conjugate_near_infinity, conjugate_via_normal_forms, kato_biholomorphic

__version__ = "0.1.0"
