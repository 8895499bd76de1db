from ._coneforge import (
    ConeForest,
    DoubleCone,
    box_dimension,
    cone_contains,
    disk_intersection_area,
    distance_interval,
    dual_contains,
    hausdorff_distance,
    iterate,
    line_at_distance,
    nikodym_patch,
    signed_distance,
    snap_scaled,
    verify_conditions,
)

__all__ = [
    "ConeForest",
    "DoubleCone",
    "box_dimension",
    "cone_contains",
    "disk_intersection_area",
    "distance_interval",
    "dual_contains",
    "hausdorff_distance",
    "iterate",
    "line_at_distance",
    "nikodym_patch",
    "signed_distance",
    "snap_scaled",
    "verify_conditions",
]
