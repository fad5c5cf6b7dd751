"""etaforge: exact eta invariants of coupled Dirac operators on circle
bundles over Kähler bases, with closed forms cross-validated against
brute-force oracles."""

from .cohomology import (
    CohClass,
    Geometry,
    char_class,
    hrr_chi,
    index_integral,
    integrate,
    projective_like_geometry,
    surface_geometry,
)
from .errors import (
    EtaforgeError,
    InvalidDolbeaultData,
    NoConsistentConvention,
    ProviderConsistencyError,
    SeriesDomainError,
    UnknownHodgeData,
    UsageError,
)
from .eta import (
    DEFAULT_CONVENTIONS,
    ApsCheck,
    CalibrationResult,
    ConventionSet,
    EtaValue,
    adiabatic_limit,
    aps_difference_check,
    asymptotic_eta,
    calibrate,
    exact_eta,
    transgression,
)
from .flow import Crossing, FlowResult, flow_in_delta_closed, flow_in_delta_oracle, flow_in_s_oracle
from .forms import (
    EndForm,
    GaussRat,
    KahlerModel,
    ScalarForm,
    build_tensors,
    constant_curvature_block,
    identity_suite,
    parity_count,
    parity_expected,
    trace_expansion_check,
)
from .hodge import HodgeProvider, HrrVanishingHodge, SurfaceHodge, TableHodge, hodge_number
from .measure import LaplaceCheck, ModelPoint, NearZeroBound, laplace_check, limit_measure_apply, near_zero_bound
from .scalars import ParamScalar, TruncSeries, fractional_part, universal_series
from .spectrum import (
    DolbeaultProvider,
    EigRecord,
    QuadSurd,
    alternating_multiplicity,
    finite_eta_partial,
    kernel_dimension,
    type1_eigenvalues,
    type2_eigenvalues,
    type2_records,
    validate_epsilon,
)

__version__ = "0.1.0"
