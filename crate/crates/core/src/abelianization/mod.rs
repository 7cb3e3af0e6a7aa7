//! Twisted toric I-functions and the abelian/nonabelian correspondence.

mod fast;
mod model;
pub mod pdelta;
mod series;
mod toric;

pub use model::{Integrator, Model, ModelError};
pub use series::{
    i_series, i_series_model, i_series_ring, mirror_map, model_for_row, sample_points, IScalarSeries, Parts,
    SeriesBuilder, SeriesError,
};
pub use toric::{
    abelianized_numerator, enumerate_degrees, omega_divide, pdelta_from_free, solve_in_ring, toric_coeff, Cone,
    Factor, ToricData, ToricError,
};
