"""qrlab: a numerical laboratory for quantum real numbers.

Physical qualities are Hermitian operators; their values are sections
over open regions (conditions) of density-state space rather than single
reals.  The package provides the operator and state-space geometry, the
qr-number calculus with interval-valued ranges, an exact finite Heyting
algebra of truth values, collimation and location predicates, qr-number
equations of motion, and deterministic reproductions of the Bell-Bohm,
Born-rule, Lueders and double-slit results.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptySectionError,
    ExtentError,
    NumericError,
    PropertyViolation,
    QrlabError,
    SamplingError,
    ValidationError,
)
from .operators import (
    HermitianOperator,
    SpectralDecomposition,
    commutator_hermitian,
    eig_decompose,
    grid_position_operator,
    identity,
    random_hermitian,
    sigma_x,
    sigma_y,
    sigma_z,
    spectral_projection,
    spin_along,
    tensor,
    tensor_hermitian,
    trace_norm,
)
from .states import (
    Ball,
    Condition,
    DensityState,
    basis_state,
    conditions_intersect,
    contains,
    gaussian_wavepacket,
    intersect_condition,
    maximally_mixed,
    perturb_nonzero,
    pure_state,
    sample_states,
    singlet_state,
    state_from_bloch,
    trace_distance,
)
from .qrnum import (
    ExtendedQr,
    QrNumber,
    RangeInterval,
    covariance_transform,
    eval_at,
    eval_range,
    extend_by_zero,
    order_extent,
    qr_add,
    qr_apply,
    qr_mul,
    qr_scale,
    qr_sub,
    transform_condition,
)
from .logic import (
    BasisPoset,
    TruthValue,
    implies,
    join,
    lem_counterexample,
    locate_proposition,
    meet,
    neg,
)
from .collimation import (
    CollimationReport,
    HeisenbergReport,
    heisenberg_check,
    is_eps_located,
    is_eps_sharp,
    is_strictly_eps_sharp,
    spread,
)
from .dynamics import (
    EvolutionComparison,
    ModelSpec,
    PhaseSection,
    compare_evolutions,
    evolve_density,
    heisenberg_average_evolve,
    qr_hamilton_evolve,
    time_grid,
)
from .experiments import (
    ChshResult,
    EnsembleSpec,
    ExperimentReport,
    SlitReport,
    bell_bohm,
    chsh,
    dichotomic_ensemble,
    double_slit_instance,
    double_slit_location,
    lueders_experiment,
)
