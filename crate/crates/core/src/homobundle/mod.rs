//! Homogeneous bundles on Grassmannians, their torus weights and the target catalog.

pub mod catalog;
mod invariants;
mod spec;

pub use catalog::{catalog, lookup, CatalogRow, NotFound, Pipeline};
pub use invariants::{bundle_lifts, tangent_chern_lift, topological_invariants, TopInvariants};
pub use spec::{dualize, euler_lift, schur_weights, BundleSummand, Carrier, Partition, SpecError, TargetSpec};
