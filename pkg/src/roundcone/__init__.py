"""Orthogonal projections of infinite round cones onto subspaces of R^n."""

from .cone import Flavor, RoundCone, contains, translate
from .errors import DimensionError, RegimeError, RoundConeError, WitnessSearchError
from .kernels import BACKEND
from .linalg import (
    Decomposition,
    SubspaceBasis,
    angle_between,
    angle_to_complement,
    angle_to_subspace,
    orthonormalize,
    project,
)
from .oracle import (
    SampleMode,
    SamplerConfig,
    VerificationReport,
    empirical_projection_check,
    l2_counterexample,
    l2_discretized_experiment,
    sample_cone,
)
from .projection import (
    ClassifierPolicy,
    ProjectionClass,
    ProjectionTag,
    classify,
    classify_affine,
    inverse_aperture,
    l2_threshold,
    orthant_max_aperture,
    project_open_cone,
    projected_aperture,
)
from .reverse_cbs import (
    CbsCheck,
    check_projection_implication,
    check_sign_lemma,
    enhanced_cbs_condition,
)
from .witnesses import (
    Witness,
    antipodal_witness,
    border_witness,
    equality_witness,
    lift_to_cone,
)

__version__ = "0.1.0"
