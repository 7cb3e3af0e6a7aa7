//! Exact rationals, dense matrices and univariate polynomials.

mod matrix;
pub(crate) mod poly;
mod rational;

pub use malachite_nz::integer::Integer;
pub use malachite_nz::natural::Natural;
pub use matrix::{ffdet, nullspace, polymatrix_kernel, KernelError, QMatrix};
pub use poly::{content_of, QPoly};
pub use rational::{ParseRationalError, Rational};

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> Integer {
    use malachite_base::num::arithmetic::traits::Factorial;
    Integer::from(Natural::factorial(n))
}
