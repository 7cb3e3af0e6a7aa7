//! Differential operators in `theta = q d/dq` with polynomial coefficients in `q`.

mod guess;
mod ore;
mod ratfn;
mod text;

pub use guess::{annihilator_at, annihilator_search, required_len, DEFAULT_GUARD};
pub use ore::{bvs_transform, ore_mul, OreOperator};
pub use ratfn::{ore_right_divide, Division, RatFn, RatOre};
pub use text::{parse_operator, parse_qpoly, render};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfError {
    #[error("division by an operator with zero leading coefficient")]
    ZeroDivisor,
    #[error("underdetermined; increase series length (kernel dimension {dim} at q-degree {d})")]
    Underdetermined { d: usize, dim: usize },
    #[error("series too short: need {needed} coefficients, have {got}")]
    TooShort { needed: usize, got: usize },
    #[error("cannot parse operator: {0}")]
    Parse(String),
}
