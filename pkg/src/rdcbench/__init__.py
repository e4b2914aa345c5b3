"""Rate-distortion-complexity analysis of video codecs."""

from .appspace import (
    STREAMING_EXAMPLE,
    AppPoint,
    AppSpaceGrid,
    ApplicationModel,
    GridSpec,
    app_calculator,
    best_map,
    cost_difference,
    cost_surface,
)
from .bd import (
    BdResult,
    ProjectionSpec,
    bd_delta,
    bd_psnr,
    bd_rate_percent,
    delta_3d,
    delta_lambda,
    mse_to_db,
    psnr_from_mse,
    rotate_points,
)
from .dataset import (
    CodecDataset,
    RawMeasurement,
    RdcPoint,
    aggregate,
    load_dataset,
    load_table1,
    normalize_mse,
    normalize_rate,
    save_dataset,
)
from .rdccost import CostPlane, cloud_cost, curve_cost, linear_cost, plane_distance, project_onto_plane

__version__ = "0.1.0"
