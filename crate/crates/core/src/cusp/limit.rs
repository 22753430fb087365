use num_traits::Zero;

use super::triplet::{FlatIndex, Triplet};
use crate::algebra::linalg::{inverse, mat_vec, Mat};
use crate::algebra::{int, Monomial, Polynomial, Rational, Var};
use crate::error::{Error, Result};
use crate::quotient::{build_quotient, groebner_basis, IdealBasis, QuotientAlgebra};

/// C[x]/(x_i x_{i'}, a_i x_i^{a_i} − a_{i'} x_{i'}^{a_{i'}}) in the basis
/// {1} ∪ {x_i^j} ∪ {v}, with v the class of a_1 x_1^{a_1}.
#[derive(Clone, Debug)]
pub struct LimitAlgebra {
    pub triplet: Triplet,
    pub labels: Vec<FlatIndex>,
    quotient: QuotientAlgebra,
    to_labels: Mat,
    products: Vec<Vec<Vec<Rational>>>,
    representatives_agree: bool,
}

fn xpow(i: u8, e: u32) -> Polynomial {
    Polynomial::term(Monomial::from_exps([(Var::X(i), e as i32)]), int(1))
}

pub fn limit_ideal(a: Triplet) -> IdealBasis {
    let x = |i| Polynomial::var(Var::X(i));
    let arm_power = |i: u8| xpow(i, a.arm(i)).scale(&int(a.arm(i) as i64));
    IdealBasis::new(vec![
        &x(1) * &x(2),
        &x(2) * &x(3),
        &x(1) * &x(3),
        &arm_power(1) - &arm_power(2),
        &arm_power(2) - &arm_power(3),
    ])
}

/// Limit algebra; refuses triplets with an empty arm.
pub fn limit_algebra(a: Triplet) -> Result<LimitAlgebra> {
    if let Some(i) = a.has_degenerate_arm() {
        return Err(Error::DegenerateArm(i));
    }
    limit_algebra_allowing_empty_arms(a)
}

/// Same construction without the a_i >= 2 guard; arms with a_i = 1 simply
/// contribute no basis elements.
pub fn limit_algebra_allowing_empty_arms(a: Triplet) -> Result<LimitAlgebra> {
    let xs: Vec<Var> = (1..=3).map(Var::X).collect();
    let gb = groebner_basis(&limit_ideal(a))?;
    let quotient = build_quotient(&gb, &xs)?;
    let labels = a.flat_indices();
    let reps: Vec<Polynomial> = labels.iter().map(|&ix| representative(a, ix)).collect();
    // Columns: coordinates of labeled elements in the standard basis.
    let cols: Vec<Vec<Rational>> = reps.iter().map(|p| quotient.coords(p)).collect();
    let n = quotient.dimension();
    if cols.len() != n {
        return Err(Error::SingularMatrix);
    }
    let from_labels: Mat = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    let to_labels = inverse(&from_labels)?;
    let products = reps
        .iter()
        .map(|p| {
            reps.iter()
                .map(|r| mat_vec(&to_labels, &quotient.coords(&quotient.multiply(p, r))))
                .collect()
        })
        .collect();
    let v_forms: Vec<Polynomial> =
        (1..=3u8).map(|i| quotient.normal_form(&xpow(i, a.arm(i)).scale(&int(a.arm(i) as i64)))).collect();
    let representatives_agree = v_forms.windows(2).all(|w| w[0] == w[1]);
    Ok(LimitAlgebra { triplet: a, labels, quotient, to_labels, products, representatives_agree })
}

/// Polynomial representative: unit ↦ 1, (i,j) ↦ x_i^j, mu ↦ a_1 x_1^{a_1}.
pub fn representative(a: Triplet, ix: FlatIndex) -> Polynomial {
    match ix {
        FlatIndex::Unit => Polynomial::one(),
        FlatIndex::Arm(i, j) => xpow(i, j as u32),
        FlatIndex::Mu => xpow(1, a.arm(1)).scale(&int(a.arm(1) as i64)),
    }
}

impl LimitAlgebra {
    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    /// Whether a_1 x_1^{a_1}, a_2 x_2^{a_2}, a_3 x_3^{a_3} have equal normal forms.
    pub fn representatives_agree(&self) -> bool {
        self.representatives_agree
    }

    fn pos(&self, ix: FlatIndex) -> usize {
        self.labels.iter().position(|&l| l == ix).expect("index of this triplet")
    }

    /// Product of two basis elements, in labeled coordinates.
    pub fn product(&self, x: FlatIndex, y: FlatIndex) -> &[Rational] {
        &self.products[self.pos(x)][self.pos(y)]
    }

    /// Structure constant: coefficient of `z` in x∘y.
    pub fn structure_constant(&self, x: FlatIndex, y: FlatIndex, z: FlatIndex) -> Rational {
        self.product(x, y)[self.pos(z)].clone()
    }

    /// Labeled coordinates of an arbitrary polynomial class.
    pub fn label_coords(&self, p: &Polynomial) -> Vec<Rational> {
        mat_vec(&self.to_labels, &self.quotient.coords(p))
    }

    fn mul_coords(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dimension();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for (k, s) in self.products[i][j].iter().enumerate() {
                    if !s.is_zero() {
                        out[k] += &c * s;
                    }
                }
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dimension();
        (0..n).all(|i| (0..n).all(|j| self.products[i][j] == self.products[j][i]))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dimension();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_coords(&self.products[i][j], &unit_vec(n, k));
                    let right = self.mul_coords(&unit_vec(n, i), &self.products[j][k]);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn unit_is_identity(&self) -> bool {
        let n = self.dimension();
        let u = self.pos(FlatIndex::Unit);
        (0..n).all(|i| self.products[u][i] == unit_vec(n, i))
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = int(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn d4_products() {
        let l = limit_algebra(Triplet::new(2, 2, 2).unwrap()).unwrap();
        let x1 = FlatIndex::Arm(1, 1);
        assert_eq!(l.structure_constant(x1, x1, FlatIndex::Mu), rat(1, 2));
        assert!(l.product(x1, FlatIndex::Arm(2, 1)).iter().all(Zero::is_zero));
    }

    #[test]
    fn e8_shape() {
        let l = limit_algebra(Triplet::new(2, 3, 5).unwrap()).unwrap();
        assert_eq!(l.dimension(), 9);
        assert!(l.product(FlatIndex::Mu, FlatIndex::Mu).iter().all(Zero::is_zero));
        assert!(l.representatives_agree());
        assert!(l.is_commutative() && l.is_associative() && l.unit_is_identity());
    }

    #[test]
    fn empty_arms_refused() {
        let t = Triplet::new(1, 2, 3).unwrap();
        assert_eq!(limit_algebra(t).unwrap_err(), Error::DegenerateArm(1));
        let l = limit_algebra_allowing_empty_arms(t).unwrap();
        assert_eq!(l.dimension(), t.mu() as usize);
    }
}
