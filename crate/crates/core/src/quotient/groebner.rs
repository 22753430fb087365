use std::collections::BTreeSet;

use num_traits::One;

use crate::algebra::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

/// Default bound on the number of S-pairs processed by Buchberger.
pub const DEFAULT_PAIR_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub generators: Vec<Polynomial>,
}

impl IdealBasis {
    pub fn new(generators: Vec<Polynomial>) -> Self {
        IdealBasis { generators }
    }
}

/// Reduced Gröbner basis: monic, inter-reduced, sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.leading().unwrap().0.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.iter().any(|p| p.leading().is_some_and(|(m, _)| m.is_one()))
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, self)
    }
}

fn monic(p: &Polynomial) -> Polynomial {
    let c = p.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
    p.scale(&(Rational::one() / c))
}

/// Full reduction of `p` modulo `divisors` (no term of the result is divisible
/// by a leading monomial of a divisor).
fn reduce(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = divisors
        .iter()
        .map(|g| {
            let (m, c) = g.leading().expect("nonzero divisor");
            (m.clone(), c.clone())
        })
        .collect();
    let mut rest = p.clone();
    let mut out = Polynomial::zero();
    while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let factor = m.div(&leads[i].0);
                let coef = &c / &leads[i].1;
                rest = &rest - &divisors[i].mul_term(&factor, &coef);
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                out.add_term(m, c);
            }
        }
    }
    out
}

fn s_poly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading().unwrap();
    let (mg, cg) = g.leading().unwrap();
    let l = mf.lcm(mg);
    &f.mul_term(&l.div(mf), &(Rational::one() / cf)) - &g.mul_term(&l.div(mg), &(Rational::one() / cg))
}

/// Buchberger's algorithm with normal pair selection and Buchberger's
/// coprime and chain criteria, followed by full inter-reduction.
pub fn groebner_basis(ideal: &IdealBasis) -> Result<GroebnerBasis> {
    groebner_basis_with_limit(ideal, DEFAULT_PAIR_LIMIT)
}

pub fn groebner_basis_with_limit(ideal: &IdealBasis, pair_limit: usize) -> Result<GroebnerBasis> {
    let mut basis: Vec<Polynomial> = ideal.generators.iter().filter(|p| !p.is_zero()).map(monic).collect();
    if basis.is_empty() {
        return Ok(GroebnerBasis { polys: Vec::new() });
    }
    // Pending pairs keyed by (lcm, i, j) so the smallest lcm is processed first.
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let lead = |p: &Polynomial| p.leading().unwrap().0.clone();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((lead(&basis[i]).lcm(&lead(&basis[j])), i, j));
        }
    }
    let mut processed = 0usize;
    while let Some(pair) = pairs.iter().next().cloned() {
        pairs.remove(&pair);
        let (l, i, j) = pair;
        processed += 1;
        if processed > pair_limit {
            return Err(Error::ResourceLimit(pair_limit));
        }
        let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let pending = |a: usize, b: usize| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            pairs.iter().any(|(_, x, y)| *x == a && *y == b)
        };
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && lead(&basis[k]).divides(&l) && !pending(i, k) && !pending(j, k)
        });
        if chain {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        let r = monic(&r);
        let n = basis.len();
        let lr = lead(&r);
        basis.push(r);
        for k in 0..n {
            pairs.insert((lead(&basis[k]).lcm(&lr), k, n));
        }
    }
    Ok(GroebnerBasis { polys: inter_reduce(basis) })
}

fn inter_reduce(basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let leads: Vec<Monomial> = basis.iter().map(|p| p.leading().unwrap().0.clone()).collect();
    // Drop elements whose leading monomial is divisible by another's.
    let mut keep: Vec<Polynomial> = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, lj)| {
            j != i && lj.divides(&leads[i]) && (lj != &leads[i] || j < i)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = keep[i].leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut tail = keep[i].clone();
        tail.add_term(lm.clone(), -lc.clone());
        let mut reduced = reduce(&tail, &others);
        reduced.add_term(lm, lc);
        out.push(monic(&reduced));
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Remainder of `p` modulo a Gröbner basis; unique.
pub fn normal_form(p: &Polynomial, g: &GroebnerBasis) -> Polynomial {
    if g.polys.is_empty() {
        return p.clone();
    }
    reduce(p, &g.polys)
}
