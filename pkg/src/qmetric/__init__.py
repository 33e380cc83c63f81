"""Quantum metrics on truncated filtered algebras."""

from .core import (
    BetaSequence,
    DomainSeparationReport,
    Element,
    FilteredAlgebra,
    LevelOutOfRange,
    SeminormReport,
    Tail,
    ZeroResidual,
    beta_from_element,
    beta_squared_from_element,
    conditional_expectation,
    domain_separation_report,
    lip_seminorm,
    residual,
    residual_decay,
    sup_norm,
    trace,
)
from .instances import (
    CantorModel,
    IntervalModel,
    UhfModel,
    cantor_closed_form_mk,
    chi,
    chi_expansion_check,
    chi_tail,
    closed_form_mk,
    orthogonality_check,
    p1,
    pauli_site,
    phi,
    product_table_check,
    rademacher,
)
from .mk import (
    AgreementViolated,
    DistanceReport,
    MatrixKindUnsupported,
    StateFunctional,
    WitnessMismatch,
    check_agreement,
    mk_distance,
    pure_state,
    push_agreement,
    random_state,
    sandwich_bounds,
    with_bounds,
)
from .numerics import (
    LpProblem,
    LpSolution,
    NumericalFailure,
    solve_lp,
    spectral_norm,
)
