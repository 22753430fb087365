//! Grothendieck residues on the Jacobian algebra of the cusp polynomial.
//!
//! The primary route builds the Bezoutian B(x,y) = det[(f_i(y_{<j}, x_{≥j}) −
//! f_i(y_{≤j}, x_{>j}))/(x_j − y_j)] of the partial derivatives f_i = ∂_i f.
//! Writing B ≡ Σ M_{γδ} x^γ y^δ modulo the ideal in both variable sets, the
//! residue pairing matrix is M^{-1}; this needs no Morse condition. The
//! second route, tr(M_g M_{Hess}^{-1}), is kept as a cross-check where the
//! Hessian is invertible in the quotient.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::algebra::{build_quotient, QuotientAlgebra};
use super::groebner::{groebner_basis, IdealBasis};
use crate::algebra::linalg::{det, inverse, mat_mul, Mat};
use crate::algebra::{int, Monomial, Polynomial, Rational, Var};
use crate::cusp::{build_unfolding, Triplet};
use crate::error::{Error, Result};

type Exps = [i32; 3];

/// Polynomial in two sets of three variables, x and y.
#[derive(Clone, Debug, Default)]
struct BiPoly(BTreeMap<(Exps, Exps), Rational>);

impl BiPoly {
    fn add(&mut self, key: (Exps, Exps), c: Rational) {
        let e = self.0.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::default();
        for ((ax, ay), c) in &self.0 {
            for ((bx, by), d) in &other.0 {
                let k = (
                    [ax[0] + bx[0], ax[1] + bx[1], ax[2] + bx[2]],
                    [ay[0] + by[0], ay[1] + by[1], ay[2] + by[2]],
                );
                out.add(k, c * d);
            }
        }
        out
    }

    fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &other.0 {
            out.add(*k, -c.clone());
        }
        out
    }

    fn plus(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &other.0 {
            out.add(*k, c.clone());
        }
        out
    }
}

fn x_exps(m: &Monomial) -> Exps {
    [m.exp(Var::X(1)), m.exp(Var::X(2)), m.exp(Var::X(3))]
}

/// Divided difference entry Θ_{ij} for the polynomial `f` in x1..x3.
fn theta(f: &Polynomial, j: usize) -> BiPoly {
    let mut out = BiPoly::default();
    for (m, c) in f.terms() {
        let e = x_exps(m);
        if e[j] == 0 {
            continue;
        }
        for l in 0..e[j] {
            let mut xe = [0; 3];
            let mut ye = [0; 3];
            for k in 0..3 {
                if k < j {
                    ye[k] = e[k];
                } else if k > j {
                    xe[k] = e[k];
                }
            }
            xe[j] = l;
            ye[j] = e[j] - 1 - l;
            out.add((xe, ye), c.clone());
        }
    }
    out
}

fn det3(m: &[Vec<BiPoly>]) -> BiPoly {
    let minor = |a: usize, b: usize, c: usize, d: usize| m[1][a].mul(&m[2][b]).sub(&m[1][c].mul(&m[2][d]));
    let t0 = m[0][0].mul(&minor(1, 2, 2, 1));
    let t1 = m[0][1].mul(&minor(0, 2, 2, 0));
    let t2 = m[0][2].mul(&minor(0, 1, 1, 0));
    t0.sub(&t1).plus(&t2)
}

/// Residue functional on the Jacobian algebra of one polynomial.
#[derive(Clone, Debug)]
pub struct JacobianResidue {
    pub f: Polynomial,
    quotient: QuotientAlgebra,
    /// Res(b_γ b_δ) for standard monomials b.
    pairing: Mat,
}

impl JacobianResidue {
    /// Residues for an arbitrary polynomial f in x1, x2, x3.
    pub fn new(f: Polynomial) -> Result<Self> {
        let xs: Vec<Var> = (1..=3).map(Var::X).collect();
        let partials: Vec<Polynomial> = xs.iter().map(|&v| f.diff(v)).collect();
        let gb = groebner_basis(&IdealBasis::new(partials.clone()))?;
        let quotient = build_quotient(&gb, &xs)?;
        let n = quotient.dimension();
        if n == 0 {
            return Err(Error::InfiniteQuotient);
        }
        let thetas: Vec<Vec<BiPoly>> =
            partials.iter().map(|p| (0..3).map(|j| theta(p, j)).collect()).collect();
        let b = det3(&thetas);
        let mut cache: HashMap<Exps, Vec<Rational>> = HashMap::new();
        let mut coords = |e: Exps| -> Vec<Rational> {
            cache.entry(e).or_insert_with(|| quotient.coords(&Polynomial::term(Monomial::x(e), int(1)))).clone()
        };
        let mut m = vec![vec![Rational::zero(); n]; n];
        for ((xe, ye), c) in &b.0 {
            let vx = coords(*xe);
            let vy = coords(*ye);
            for (g, a) in vx.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let ca = c * a;
                for (d, bb) in vy.iter().enumerate() {
                    if !bb.is_zero() {
                        m[g][d] += &ca * bb;
                    }
                }
            }
        }
        let pairing = inverse(&m).map_err(|_| Error::SingularMatrix)?;
        Ok(JacobianResidue { f, quotient, pairing })
    }

    /// f_A with all deformation parameters zero and the given s_mu.
    pub fn for_cusp(a: Triplet, s_mu: &Rational) -> Result<Self> {
        if s_mu.is_zero() {
            return Err(Error::LaurentPole);
        }
        Self::new(build_unfolding(a).cusp_polynomial(s_mu)?)
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    pub fn dimension(&self) -> usize {
        self.quotient.dimension()
    }

    pub fn residue(&self, g: &Polynomial) -> Rational {
        let one = self.quotient.index_of(&Monomial::one()).expect("1 is a standard monomial");
        self.quotient
            .coords(g)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &self.pairing[i][one])
            .sum()
    }

    /// Residue pairing matrix Res(b_i b_j) on the standard basis.
    pub fn pairing_matrix(&self) -> &Mat {
        &self.pairing
    }

    pub fn hessian(&self) -> Polynomial {
        let xs: Vec<Var> = (1..=3).map(Var::X).collect();
        let h: Vec<Vec<Polynomial>> =
            xs.iter().map(|&a| xs.iter().map(|&b| self.f.diff(a).diff(b)).collect()).collect();
        let m = |i: usize, j: usize| &h[i][j];
        let minor = |a: usize, b: usize, c: usize, d: usize| &(m(1, a) * m(2, b)) - &(m(1, c) * m(2, d));
        let t = &(m(0, 0) * &minor(1, 2, 2, 1)) - &(m(0, 1) * &minor(0, 2, 2, 0));
        &t + &(m(0, 2) * &minor(0, 1, 1, 0))
    }

    /// tr(M_g · M_{Hess}^{-1}); fails when the Hessian is a zero divisor.
    pub fn residue_by_trace(&self, g: &Polynomial) -> Result<Rational> {
        let mh = self.quotient.mult_matrix(&self.hessian());
        if det(&mh).is_zero() {
            return Err(Error::HessianNotInvertible);
        }
        let inv = inverse(&mh)?;
        let prod = mat_mul(&self.quotient.mult_matrix(g), &inv);
        Ok((0..prod.len()).map(|i| prod[i][i].clone()).sum())
    }
}

/// Residue of g on the Jacobian algebra of f_A at the given s_mu, with the
/// standard convention Σ g(p)/Hess(p).
pub fn grothendieck_residue(g: &Polynomial, a: Triplet, s_mu: &Rational) -> Result<Rational> {
    Ok(JacobianResidue::for_cusp(a, s_mu)?.residue(g))
}

/// Residue via the trace formula only.
pub fn grothendieck_residue_by_trace(g: &Polynomial, a: Triplet, s_mu: &Rational) -> Result<Rational> {
    JacobianResidue::for_cusp(a, s_mu)?.residue_by_trace(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn xyz() -> Polynomial {
        Polynomial::parse("1*x1*x2*x3").unwrap()
    }

    #[test]
    fn one_variable_sanity() {
        // Partials x1^2, x2, x3: the residue of g is its x1-coefficient.
        let f = Polynomial::parse("1/3*x1^3 + 1/2*x2^2 + 1/2*x3^2").unwrap();
        let r = JacobianResidue::new(f).unwrap();
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.residue(&Polynomial::var(Var::X(1))), int(1));
        assert_eq!(r.residue(&Polynomial::one()), int(0));
    }

    #[test]
    fn d4_values_both_routes() {
        let a = Triplet::new(2, 2, 2).unwrap();
        for s in [int(1), rat(1, 2), int(3)] {
            let r = JacobianResidue::for_cusp(a, &s).unwrap();
            assert_eq!(r.dimension(), 5);
            let cube = &s * &s * &s;
            assert_eq!(r.residue(&xyz()), -cube.clone());
            assert_eq!(r.residue_by_trace(&xyz()).unwrap(), -cube);
            assert_eq!(r.residue(&Polynomial::one()), int(0));
            for i in 1..=3 {
                assert_eq!(r.residue(&Polynomial::var(Var::X(i))), int(0));
            }
        }
    }

    #[test]
    fn hessian_not_invertible_reported() {
        let a = Triplet::new(2, 2, 3).unwrap();
        let r = JacobianResidue::for_cusp(a, &int(1)).unwrap();
        assert_eq!(r.residue_by_trace(&xyz()), Err(Error::HessianNotInvertible));
        assert_eq!(r.residue(&xyz()), int(-1));
    }
}
