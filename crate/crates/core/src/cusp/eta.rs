use num_traits::Zero;

use super::triplet::{FlatIndex, Triplet};
use crate::algebra::linalg::Mat;
use crate::algebra::{int, rat, Rational};

/// The flat metric η in flat-index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaMetric {
    pub triplet: Triplet,
    pub indices: Vec<FlatIndex>,
    pub matrix: Mat,
}

pub fn eta_metric(a: Triplet) -> EtaMetric {
    let indices = a.flat_indices();
    let matrix = indices.iter().map(|&x| indices.iter().map(|&y| eta(a, x, y)).collect()).collect();
    EtaMetric { triplet: a, indices, matrix }
}

/// η(x, y): 1 for {unit, mu}, 1/a_i for arm partners, 0 otherwise.
pub fn eta(a: Triplet, x: FlatIndex, y: FlatIndex) -> Rational {
    match (x, y) {
        (FlatIndex::Unit, FlatIndex::Mu) | (FlatIndex::Mu, FlatIndex::Unit) => int(1),
        (FlatIndex::Arm(i1, j1), FlatIndex::Arm(i2, j2)) if i1 == i2 && j1 as u32 + j2 as u32 == a.arm(i1) => {
            rat(1, a.arm(i1) as i64)
        }
        _ => Rational::zero(),
    }
}

/// Entry of η^{-1}: 1 for {unit, mu}, a_i for arm partners.
pub fn eta_inverse(a: Triplet, x: FlatIndex, y: FlatIndex) -> Rational {
    let e = eta(a, x, y);
    if e.is_zero() {
        e
    } else {
        e.recip()
    }
}

impl EtaMetric {
    pub fn get(&self, x: FlatIndex, y: FlatIndex) -> Rational {
        eta(self.triplet, x, y)
    }

    pub fn inverse_entry(&self, x: FlatIndex, y: FlatIndex) -> Rational {
        eta_inverse(self.triplet, x, y)
    }

    pub fn inverse_matrix(&self) -> Mat {
        self.indices
            .iter()
            .map(|&x| self.indices.iter().map(|&y| self.inverse_entry(x, y)).collect())
            .collect()
    }
}
