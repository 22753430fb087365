use std::collections::BTreeMap;

use num_traits::Zero;

use super::triplet::Triplet;
use crate::algebra::{int, rat, Monomial, Polynomial, Rational, Var};
use crate::error::Result;

/// F_A = Σ x_i^{a_i} − s_mu^{-1} x1x2x3 + s_1 + Σ s_{i,j} x_i^j, Laurent in s_mu.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub triplet: Triplet,
    pub poly: Polynomial,
}

pub fn build_unfolding(a: Triplet) -> Unfolding {
    let mut f = Polynomial::laurent_zero();
    for i in 1..=3u8 {
        f.add_term(Monomial::from_exps([(Var::X(i), a.arm(i) as i32)]), int(1));
    }
    f.add_term(
        Monomial::from_exps([(Var::X(1), 1), (Var::X(2), 1), (Var::X(3), 1), (Var::SMu, -1)]),
        int(-1),
    );
    f.add_term(Monomial::var(Var::SUnit), int(1));
    for (i, j) in a.arm_indices() {
        f.add_term(Monomial::from_exps([(Var::SArm(i, j), 1), (Var::X(i), j as i32)]), int(1));
    }
    Unfolding { triplet: a, poly: f }
}

impl Unfolding {
    /// Parameter variables with their Euler weights.
    pub fn parameter_weights(&self) -> Vec<(Var, Rational)> {
        let a = self.triplet;
        let mut out = vec![(Var::SUnit, int(1))];
        for (i, j) in a.arm_indices() {
            let ai = a.arm(i) as i64;
            out.push((Var::SArm(i, j), rat(ai - j as i64, ai)));
        }
        out.push((Var::SMu, a.chi()));
        out
    }

    /// E F with E = s_1∂_{s_1} + Σ ((a_i−j)/a_i) s_{i,j}∂_{s_{i,j}} + χ s_mu ∂_{s_mu}.
    pub fn euler_field_applied(&self) -> Polynomial {
        let mut out = Polynomial::laurent_zero();
        for (v, w) in self.parameter_weights() {
            let d = self.poly.diff(v).mul_term(&Monomial::var(v), &w);
            out = &out + &d;
        }
        out
    }

    /// F − E F − Σ (1/a_i) x_i ∂F/∂x_i, which vanishes identically.
    pub fn euler_residual(&self) -> Polynomial {
        let mut r = &self.poly - &self.euler_field_applied();
        for i in 1..=3u8 {
            let d = self.poly.diff(Var::X(i)).mul_term(&Monomial::var(Var::X(i)), &rat(1, self.triplet.arm(i) as i64));
            r = &r - &d;
        }
        r
    }

    /// The cusp polynomial f_A: all deformation parameters zero, s_mu fixed.
    pub fn cusp_polynomial(&self, s_mu: &Rational) -> Result<Polynomial> {
        let mut assign: BTreeMap<Var, Rational> = BTreeMap::new();
        assign.insert(Var::SUnit, Rational::zero());
        for (i, j) in self.triplet.arm_indices() {
            assign.insert(Var::SArm(i, j), Rational::zero());
        }
        assign.insert(Var::SMu, s_mu.clone());
        self.poly.eval(&assign)?.into_ordinary()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_identity_vanishes() {
        for a in [[2, 3, 7], [2, 2, 2], [1, 1, 1], [3, 4, 5]] {
            let t = Triplet::new(a[0], a[1], a[2]).unwrap();
            assert!(build_unfolding(t).euler_residual().is_zero(), "{t}");
        }
    }

    #[test]
    fn specialization_and_size() {
        let f = build_unfolding(Triplet::new(2, 2, 2).unwrap()).cusp_polynomial(&int(1)).unwrap();
        assert_eq!(f, Polynomial::parse("1*x1^2 + -1*x1*x2*x3 + 1*x2^2 + 1*x3^2").unwrap());
        assert_eq!(build_unfolding(Triplet::new(2, 3, 5).unwrap()).poly.len(), 12);
    }

    #[test]
    fn partial_derivative_of_cusp() {
        let f = build_unfolding(Triplet::new(2, 2, 2).unwrap()).cusp_polynomial(&int(1)).unwrap();
        assert_eq!(f.diff(Var::X(1)), Polynomial::parse("2*x1 + -1*x2*x3").unwrap());
    }
}
