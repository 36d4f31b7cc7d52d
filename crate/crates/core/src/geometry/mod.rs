//! Geometry of the gauge plane and of the `(b, c)` parameter plane.

mod optimal;
mod plane;
mod regions;
mod same_shape;

pub use optimal::{
    optimal_points_iee, optimal_points_iev, optimal_points_ivv, validate_point, OptimalPointSet,
    PointValidation,
};
pub use plane::{
    base_mu, plane_membership, plane_verdict, region_scan, MembershipFlags, PlanePoint,
    PlaneVerdict, RegionSample,
};
pub use regions::{
    bc_admissible, bc_class, bc_margins, bc_region_class, bc_scan, bisect_transition,
    bob_boundary, containment_scan, BcRegionClass, BcSample, Containment,
};
pub use same_shape::{
    circle_point, circle_points_in_bob, kye_boundary_classify, same_shape_structure,
    sea_anchor_transitions, KyeFacet, SameShapeRegime, SameShapeStructure, SeaAnchorTransitions,
};
