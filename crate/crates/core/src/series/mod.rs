//! Truncated Euler-graded series in the flat coordinates t_1, t_{i,j}, t_mu
//! and q = e^{t_mu}.

pub mod flat;
pub mod qring;

pub use flat::{FlatMonomial, FlatPoint, FlatSeries, QValue, TermJson};
pub use qring::QPoly;
