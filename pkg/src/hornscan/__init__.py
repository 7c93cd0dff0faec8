"""Design and beam-propagation verification of horn-shaped electrooptic scanners."""
from .design import (
    DesignParams,
    RectComparator,
    ScannerProfile,
    compare_designs,
    integrate_trajectory,
    rect_comparator,
    rect_required_index,
    rect_required_width,
    widen_profile,
)
from .domains import DomainPattern, Prism, build_domain_pattern
from .errors import (
    ComparisonError,
    ConfigError,
    ConvergenceError,
    GeometryError,
    HornscanError,
    MetricsError,
    NumericalBlowupError,
    SafetyError,
)
from .optics import (
    BeamSpec,
    DriveSpec,
    MaterialSpec,
    far_field_divergence,
    gaussian_radius,
    index_contrast,
    poling_safety,
    resolvable_spots,
    snell_magnify,
)
from .raster import GridSpec, IndexMap, rasterize_index
from .bpm import FieldState, SimReport, exit_metrics, launch_field, propagate, simulate_scan

__version__ = "0.1.0"
