"""mmsgeo: boundary measures on sampled metric measure spaces.

Discretizes metric measure spaces and estimates Minkowski contents,
relaxed contents, perimeters via Lipschitz recovery ramps, coarea-type
level integrals, the gauge Hausdorff measure, and Cheeger constants,
with verdict-style reports for the inequalities tying them together.
"""

__version__ = "0.1.0"

from .space_core import (  # noqa: F401
    BindingError,
    MetricAxiomError,
    ResolutionError,
    SampledSpace,
    ScalarField,
    SetIndicator,
    build_circle,
    build_cloud,
    build_explicit,
    build_fat_cantor_interval,
    build_from_graph,
    build_grid_box,
    fat_cantor_density,
    fat_cantor_marks,
    full_indicator,
    indicator_ball,
    indicator_box,
    measure,
)
