//! Deviation estimates under mod-φ convergence, exact cumulant machinery for
//! dependency graphs, and exact or simulated oracles for the models they cover.

pub mod characters;
pub mod combi;
pub mod deviation;
pub mod er;
pub mod error;
pub mod expr;
pub mod law;
pub mod limiting;
pub mod models;
pub mod multidim;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Law = law::ReferenceLaw<f64>;
pub type Legendre = law::LegendrePoint<f64>;
pub type Psi = limiting::LimitingFunction<f64>;
pub type Model = deviation::ModPhiModel<f64>;
pub type Estimate = deviation::DeviationEstimate<f64>;
pub type Cumulants = deviation::CumulantModel<f64>;
