use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::groebner::{normal_form, GroebnerBasis};
use crate::algebra::linalg::{mat_mul, Mat};
use crate::algebra::{fmt_rational, Monomial, Polynomial, Rational, Var};
use crate::error::{Error, Result};

/// Finite-dimensional quotient k[vars]/I presented by standard monomials.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    vars: Vec<Var>,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    tables: Vec<Mat>,
    gb: GroebnerBasis,
}

#[derive(Serialize)]
struct QuotientJson {
    vars: Vec<String>,
    basis: Vec<String>,
    tables: BTreeMap<String, Vec<Vec<String>>>,
}

impl QuotientAlgebra {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Multiplication table of the given variable: column j holds x·b_j.
    pub fn table(&self, v: Var) -> Option<&Mat> {
        self.vars.iter().position(|&w| w == v).map(|i| &self.tables[i])
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.gb)
    }

    /// Coordinates of the class of `p` in the standard-monomial basis.
    pub fn coords(&self, p: &Polynomial) -> Vec<Rational> {
        let r = self.normal_form(p);
        let mut v = vec![Rational::zero(); self.basis.len()];
        for (m, c) in r.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn from_coords(&self, v: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in self.basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn multiply(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.normal_form(&(a * b))
    }

    /// Matrix of multiplication by `p`.
    pub fn mult_matrix(&self, p: &Polynomial) -> Mat {
        let n = self.basis.len();
        let r = self.normal_form(p);
        let cols: Vec<Vec<Rational>> =
            self.basis.iter().map(|b| self.coords(&r.mul_term(b, &Rational::from_integer(1.into())))).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn tables_commute(&self) -> bool {
        for i in 0..self.tables.len() {
            for j in 0..i {
                if mat_mul(&self.tables[i], &self.tables[j]) != mat_mul(&self.tables[j], &self.tables[i]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tables = self
            .vars
            .iter()
            .zip(&self.tables)
            .map(|(v, t)| (v.to_string(), t.iter().map(|row| row.iter().map(fmt_rational).collect()).collect()))
            .collect();
        serde_json::to_value(QuotientJson {
            vars: self.vars.iter().map(Var::to_string).collect(),
            basis: self.basis.iter().map(Monomial::to_string).collect(),
            tables,
        })
        .expect("serializable")
    }
}

/// Builds the quotient by the ideal of `gb` in the variables `vars`.
/// Finite iff every variable has a pure power among the leading monomials.
pub fn build_quotient(gb: &GroebnerBasis, vars: &[Var]) -> Result<QuotientAlgebra> {
    let leads = gb.leading_monomials();
    if gb.is_unit_ideal() {
        return Ok(QuotientAlgebra {
            vars: vars.to_vec(),
            basis: Vec::new(),
            index: BTreeMap::new(),
            tables: vec![Vec::new(); vars.len()],
            gb: gb.clone(),
        });
    }
    let mut bounds = Vec::with_capacity(vars.len());
    for &v in vars {
        let pure = leads
            .iter()
            .filter(|m| m.exps().len() == 1 && m.exps()[0].0 == v)
            .map(|m| m.exps()[0].1)
            .min();
        match pure {
            Some(e) => bounds.push(e),
            None => return Err(Error::InfiniteQuotient),
        }
    }
    let mut basis = Vec::new();
    let mut exps = vec![0i32; vars.len()];
    loop {
        let m = Monomial::from_exps(vars.iter().copied().zip(exps.iter().copied()));
        if !leads.iter().any(|l| l.divides(&m)) {
            basis.push(m);
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                basis.sort();
                let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                let mut q = QuotientAlgebra { vars: vars.to_vec(), basis, index, tables: Vec::new(), gb: gb.clone() };
                q.tables = vars.iter().map(|&v| q.mult_matrix(&Polynomial::var(v))).collect();
                return Ok(q);
            }
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::groebner::{groebner_basis, IdealBasis};

    fn xs() -> Vec<Var> {
        (1..=3).map(Var::X).collect()
    }

    #[test]
    fn point_quotient() {
        let gens = xs().into_iter().map(Polynomial::var).collect();
        let gb = groebner_basis(&IdealBasis::new(gens)).unwrap();
        let q = build_quotient(&gb, &xs()).unwrap();
        assert_eq!(q.dimension(), 1);
        assert_eq!(q.basis(), &[Monomial::one()]);
    }

    #[test]
    fn infinite_detected() {
        let gb = groebner_basis(&IdealBasis::new(vec![Polynomial::var(Var::X(1))])).unwrap();
        assert!(matches!(build_quotient(&gb, &xs()), Err(Error::InfiniteQuotient)));
    }

    #[test]
    fn monomial_ideal_tables() {
        let gens = vec![
            Polynomial::var(Var::X(1)).pow(2),
            Polynomial::var(Var::X(2)).pow(3),
            Polynomial::var(Var::X(3)),
        ];
        let gb = groebner_basis(&IdealBasis::new(gens)).unwrap();
        let q = build_quotient(&gb, &xs()).unwrap();
        assert_eq!(q.dimension(), 6);
        assert!(q.tables_commute());
        let json = q.to_json();
        assert_eq!(json["basis"][0], "1");
    }
}
