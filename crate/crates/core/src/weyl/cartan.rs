use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::linalg::{det_bareiss, inverse, Mat};
use crate::algebra::{fmt_rational, int, Rational};
use crate::cusp::{FlatIndex, Triplet};
use crate::error::{Error, Result};

/// Cartan matrix of the star-shaped diagram: a central vertex joined to
/// (i,1) for each arm, and (i,j) to (i,j+1) along each arm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub triplet: Triplet,
    /// Vertex labels: `Unit` is the central vertex "1".
    pub labels: Vec<FlatIndex>,
    pub matrix: Vec<Vec<i64>>,
}

/// Vector in the simple coroot basis.
pub type CorootVector = Vec<Rational>;

pub fn cartan_matrix(a: Triplet) -> CartanData {
    let mut labels = vec![FlatIndex::Unit];
    labels.extend(a.arm_indices().into_iter().map(|(i, j)| FlatIndex::Arm(i, j)));
    let n = labels.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for x in 0..n {
        matrix[x][x] = 2;
        for y in 0..n {
            if adjacent(labels[x], labels[y]) {
                matrix[x][y] = -1;
            }
        }
    }
    CartanData { triplet: a, labels, matrix }
}

fn adjacent(u: FlatIndex, v: FlatIndex) -> bool {
    match (u, v) {
        (FlatIndex::Unit, FlatIndex::Arm(_, 1)) | (FlatIndex::Arm(_, 1), FlatIndex::Unit) => true,
        (FlatIndex::Arm(i, j), FlatIndex::Arm(k, l)) => i == k && (j + 1 == l || l + 1 == j),
        _ => false,
    }
}

impl CartanData {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        x != y && self.matrix[x][y] != 0
    }

    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        det_bareiss(&m)
    }

    fn rational(&self) -> Mat {
        self.matrix.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    /// ⟨α_i, h⟩ = (A h)_i.
    pub fn root_pairing(&self, i: usize, h: &[Rational]) -> Rational {
        self.matrix[i].iter().zip(h).filter(|(&c, _)| c != 0).map(|(&c, x)| int(c) * x).sum()
    }

    /// The invariant form u^T A v on coroot vectors.
    pub fn form(&self, u: &[Rational], v: &[Rational]) -> Rational {
        (0..self.size()).map(|i| &u[i] * self.root_pairing(i, v)).sum()
    }

    /// r_i(h) = h − ⟨α_i, h⟩ α_i^∨.
    pub fn simple_reflection(&self, i: usize, h: &[Rational]) -> Result<CorootVector> {
        if i >= self.size() {
            return Err(Error::InvalidVertex(i));
        }
        let mut out = h.to_vec();
        out[i] -= self.root_pairing(i, h);
        Ok(out)
    }

    /// Applies r_{w[0]} ∘ … ∘ r_{w[last]}, rightmost first.
    pub fn apply_word(&self, word: &[usize], h: &[Rational]) -> Result<CorootVector> {
        let mut v = h.to_vec();
        for &i in word.iter().rev() {
            v = self.simple_reflection(i, &v)?;
        }
        Ok(v)
    }

    /// ω_j^∨ with ⟨α_i, ω_j^∨⟩ = δ_ij: the columns of A^{-1}.
    pub fn fundamental_coweights(&self) -> Result<Vec<CorootVector>> {
        if self.triplet.chi().is_zero() {
            return Err(Error::SingularCartan);
        }
        let inv = inverse(&self.rational()).map_err(|_| Error::SingularCartan)?;
        let n = self.size();
        Ok((0..n).map(|j| (0..n).map(|i| inv[i][j].clone()).collect()).collect())
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.to_string()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A": self.triplet,
            "labels": self.label_strings(),
            "cartan": self.matrix,
            "determinant": self.determinant().to_string(),
        })
    }
}

pub fn fundamental_coweights(a: Triplet) -> Result<Vec<CorootVector>> {
    cartan_matrix(a).fundamental_coweights()
}

/// Block Gram data of the Weyl-side intersection form. Every entry is a
/// rational multiple of the symbolic unit named by `tag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    pub tag: &'static str,
    pub main: Vec<Vec<i64>>,
    pub cross: Vec<Rational>,
    pub corner: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramReport {
    pub data: GramData,
    pub main_is_cartan: bool,
    pub cross_is_zero: bool,
    pub block_shape_ok: bool,
    /// The corner relative to +1/(2πi)²; should equal χ.
    pub corner_plus_tag: Rational,
    pub chi: Rational,
}

impl GramReport {
    pub fn passed(&self) -> bool {
        self.main_is_cartan && self.cross_is_zero && self.block_shape_ok && self.corner_plus_tag == self.chi
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.data.tag,
            "main": self.data.main,
            "cross": self.data.cross.iter().map(fmt_rational).collect::<Vec<_>>(),
            "corner": fmt_rational(&self.data.corner),
            "corner_plus_tag": fmt_rational(&self.corner_plus_tag),
            "main_is_cartan": self.main_is_cartan,
            "cross_is_zero": self.cross_is_zero,
            "block_shape_ok": self.block_shape_ok,
        })
    }
}

pub const GRAM_TAG: &str = "-1/(2*pi*i)^2";

pub fn gram_data(a: Triplet) -> Result<GramData> {
    if a.chi().is_zero() {
        return Err(Error::SingularCartan);
    }
    let c = cartan_matrix(a);
    let n = c.size();
    Ok(GramData { tag: GRAM_TAG, main: c.matrix, cross: vec![Rational::zero(); n], corner: -a.chi() })
}

pub fn gram_check(a: Triplet) -> Result<GramReport> {
    let data = gram_data(a)?;
    let c = cartan_matrix(a);
    let n = c.size();
    let block_shape_ok = data.main.len() == n && data.main.iter().all(|r| r.len() == n) && data.cross.len() == n;
    Ok(GramReport {
        main_is_cartan: data.main == c.matrix,
        cross_is_zero: data.cross.iter().all(Zero::is_zero),
        block_shape_ok,
        corner_plus_tag: -data.corner.clone(),
        chi: a.chi(),
        data,
    })
}

/// a1·a2·a3·χ, the expected Cartan determinant.
pub fn expected_determinant(a: Triplet) -> BigInt {
    let [a1, a2, a3] = a.a().map(|x| x as i64);
    BigInt::from(a1 * a2 + a1 * a3 + a2 * a3 - a1 * a2 * a3)
}

#[cfg(test)]
fn unit_vector(n: usize, i: usize) -> CorootVector {
    (0..n).map(|k| if k == i { int(1) } else { Rational::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn t(a: u32, b: u32, c: u32) -> Triplet {
        Triplet::new(a, b, c).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(cartan_matrix(t(2, 3, 5)).determinant(), BigInt::from(1));
        assert_eq!(cartan_matrix(t(2, 2, 2)).determinant(), BigInt::from(4));
        assert_eq!(cartan_matrix(t(2, 3, 7)).determinant(), BigInt::from(-1));
        assert_eq!(cartan_matrix(t(2, 3, 5)).size(), 8);
        assert_eq!(cartan_matrix(t(3, 3, 3)).determinant(), BigInt::from(0));
    }

    #[test]
    fn coweights() {
        let c = cartan_matrix(t(2, 2, 2));
        let w = c.fundamental_coweights().unwrap();
        for i in 0..4 {
            for (j, wj) in w.iter().enumerate() {
                assert_eq!(c.root_pairing(i, wj), if i == j { int(1) } else { int(0) });
            }
        }
        assert!(fundamental_coweights(t(2, 3, 5)).unwrap().iter().flatten().all(|x| x.is_integer()));
        assert_eq!(fundamental_coweights(t(2, 3, 6)), Err(Error::SingularCartan));
    }

    #[test]
    fn reflections() {
        let c = cartan_matrix(t(2, 3, 5));
        let e = unit_vector(8, 3);
        let r = c.simple_reflection(3, &e).unwrap();
        assert_eq!(r, e.iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(c.simple_reflection(8, &e), Err(Error::InvalidVertex(8)));
    }

    #[test]
    fn gram_examples() {
        let r = gram_check(t(2, 2, 2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.corner_plus_tag, rat(1, 2));
        assert_eq!(r.data.corner, rat(-1, 2));
        assert_eq!(gram_check(t(3, 3, 3)), Err(Error::SingularCartan));
    }
}
