"""Nonparametric statistics for directions and axes in Cartesian coordinates."""

__version__ = "0.1.0"

from .bootstrap import (  # noqa: E402
    BootstrapDistribution,
    Cone,
    CoverageResult,
    DistributionBand,
    DoubleCone,
    Interval,
    RootKind,
    UniformGenerator,
    VMFGenerator,
    bootstrap_distribution,
    confidence_cone,
    confidence_double_cone,
    coverage_simulation,
    critical_value,
    dispersion_interval,
    distribution_confidence,
    evaluate_root,
)
from .estimators import (  # noqa: E402
    AxialLocation,
    Box,
    ClosedBall,
    Hemisphere,
    Sphere,
    UserProjection,
    axial_dispersion,
    constrained_dispersion,
    constrained_mean,
    directional_dispersion,
    mean_axis,
    mean_direction,
    resultant_mean,
    scatter_matrix,
)
from .geometry import (  # noqa: E402
    PolarRecord,
    canonicalize_axis,
    cartesian_to_polar,
    lambert_project,
    normalize,
    polar_to_cartesian,
)
from .halfspace import (  # noqa: E402
    DirectionPool,
    draw_pool,
    halfspace_distance,
    projected_ks,
)
from .samples import AxisSample, DirectionSample  # noqa: E402
from .sampling import (  # noqa: E402
    SeedSpec,
    resample,
    sample_axial_vmf,
    sample_uniform_sphere,
    sample_vmf,
)
from .trend import TrendResult, linear_smoother_trend, running_mean_trend  # noqa: E402
