//! Truncated graded quotient rings, Schur classes and Grassmannian integrals.

mod martin;
mod mpoly;
mod ring;
pub mod symfun;

pub use martin::{integrate_grassmann, schur, vandermonde, Grassmannian, IntegrateError};
pub use mpoly::{mono_degree, monomials_of_degree, MPoly, Mono};
pub use ring::{make_ring, Ring, RingElement, RingError, RingHandle, RingPresentation, WeightedElement};
