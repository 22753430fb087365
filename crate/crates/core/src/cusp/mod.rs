//! Triplet-derived data: invariants, exponents, unfolding, flat metric,
//! limit algebra and the constant-term checks.

pub mod eta;
pub mod limit;
pub mod periods;
pub mod triplet;
pub mod unfolding;

pub use eta::{eta, eta_inverse, eta_metric, EtaMetric};
pub use limit::{limit_algebra, LimitAlgebra};
pub use periods::{monomial_obstruction_check, period_normalization, PeriodSeries};
pub use triplet::{FlatIndex, Triplet};
pub use unfolding::{build_unfolding, Unfolding};
