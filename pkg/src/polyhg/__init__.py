"""polyhg: polynomial hypergroups on the nonnegative integers.

Recurrence-defined orthogonal polynomial families, exact linearization
coefficients, Haar weights, hypergroup convolution, characters and Fourier
transforms, chain sequences and continued fractions, plus named
verification suites that re-derive the quantitative claims behind the two
flagship families (the discrete q-family and the symmetric three-parameter
family) at desk scale.
"""

__version__ = "0.1.0"

from .scalars import (
    DEFAULT_PRECISION,
    DomainError,
    InvariantViolation,
    Scalar,
    parse_scalar,
    scalar_str,
    sqrt_scalar,
    working_precision,
)
from .families import (
    CoefficientSequence,
    LittleQLegendre,
    AssocPollaczek,
    PollaczekParams,
    RandomWalk,
    RandomWalkParams,
    SyntheticFamily,
    TransformBundle,
    assoc_pollaczek_coeffs,
    aux_eval,
    basis_coefficients,
    critical_points,
    laguerre_eval,
    laguerre_ratio,
    little_q_legendre_coeffs,
    pollaczek_phi,
    random_walk_coeffs,
    transform_params,
)
from .hypergroup import (
    HSequence,
    LinearizationTable,
    Norms,
    PropertyPReport,
    haar_partial_sum_identity,
)
from .spectrum import (
    Character,
    DiscreteMeasure,
    GrowthProfile,
    SupportInterval,
    character,
    character_limit_series,
    derivative_growth,
    eval_poly,
    fourier,
    integrate_poly_power,
    q_hypergeometric_R,
    q_measure,
    q_pochhammer,
    support_interval,
)
from .chainseq import (
    ABQuantities,
    ChainSequenceProbe,
    CfQuote,
    ab_quantities,
    chi_tau,
    maximal_parameters,
    minimal_parameters,
    pollaczek_claims_ab,
    pollaczek_psi,
    ratio_bound_check,
    ratio_threshold_index,
    worpitzky_cf,
)
