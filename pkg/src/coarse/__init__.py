"""Scale-quantified coarse geometry on finite metric spaces."""

__version__ = "0.1.0"

from .chains import (  # noqa: E402
    build_chain_graph,
    chain_component,
    chain_metric,
    check_r_convexity,
    is_r_connected,
)
from .cuts import (  # noqa: E402
    bisector_cut,
    find_min_cut,
    reachable_partition,
    verify_cut,
    verify_separator,
    zero_dim_partition,
)
from .dimension import (  # noqa: E402
    Cover,
    component_growth,
    cover_multiplicity,
    estimate_asdg,
    estimate_asdim,
    estimate_lsind,
    verify_certificate,
)
from .metric import (  # noqa: E402
    INF,
    CoarseInputError,
    FiniteMetricSpace,
    ball,
    hausdorff_distance,
    set_distance,
    validate_metric,
)
from .resemblance import (  # noqa: E402
    ScaleParams,
    alike_at_scale,
    coarse_control_profile,
    disjoint_at_scale,
    gap_profile,
    is_bounded_at,
    split_alike,
)
