//! Covering procedures on unions of affine subspaces over a small prime
//! field, where components, dimensions and degrees are exactly computable.

pub mod field;
mod model;
mod nogaalon;
mod pinning;
mod random;

pub use model::{AffineSubspace, LinearVarietyModel, ModelRepr, Point, SubspaceFamily, SubspaceRepr, POINT_BUDGET};
pub use nogaalon::{brute_force_minimal_cover, nogaalon_cover, BruteForceCover, CoverStep, NogaAlonCover};
pub use pinning::{chow_pinning, Pinning};
pub use random::{random_cover_instance, random_family, random_subspace, random_subspace_of, CoverInstance};
