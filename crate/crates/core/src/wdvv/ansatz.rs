use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{int, rat, Rational};
use crate::cusp::limit::limit_algebra_allowing_empty_arms;
use crate::cusp::{eta, limit_algebra, FlatIndex, LimitAlgebra, Triplet};
use crate::error::{Error, Result};
use crate::series::{FlatMonomial, FlatSeries};

/// A fixed coefficient replacing the default normalization
/// coefficient(t_{1,1}t_{2,1}t_{3,1}q) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub monomial: FlatMonomial,
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionConfig {
    /// Maximal q-power.
    pub k: u32,
    /// Maximal total t-degree.
    pub d: u32,
    /// Fail when some coefficient stays undetermined; otherwise such
    /// coefficients are set to zero and listed in the result.
    pub strict: bool,
    /// Required when some a_i = 1.
    pub normalization: Option<Normalization>,
}

impl ReconstructionConfig {
    pub fn new(k: u32, d: u32) -> Self {
        ReconstructionConfig { k, d, strict: true, normalization: None }
    }

    /// `k` with the smallest admissible t-degree bound.
    pub fn auto(a: Triplet, k: u32) -> Self {
        Self::new(k, required_t_degree(a, k))
    }
}

/// Smallest D for which every monomial of Euler degree 2 with q-power at
/// most `k` fits: a monomial q^k Π t^m has arm weight 2 − kχ and every arm
/// weight is at least 1/a_max, so its degree is at most (2 − kχ)·a_max.
pub fn required_t_degree(a: Triplet, k: u32) -> u32 {
    let chi = a.chi();
    let neg = if chi.is_negative() { -chi } else { Rational::zero() };
    let bound = (int(2) + neg * int(k as i64)) * int(a.a_max() as i64);
    bound.floor().to_integer().try_into().unwrap_or(u32::MAX).max(3)
}

/// Correction-series monomials q^k Π t_{i,j}^m of Euler degree 2, with
/// k <= K and t-degree <= D; for k = 0 only single-arm monomials of degree
/// at least 3. Sorted by (k, t-degree, canonical order).
pub fn enumerate_unknowns(a: Triplet, cfg: &ReconstructionConfig) -> Result<Vec<FlatMonomial>> {
    enumerate_monomials(a, cfg.k, cfg.d, false)
}

/// Same enumeration, optionally with the mixed-arm k = 0 monomials.
pub fn enumerate_monomials(a: Triplet, k_max: u32, d_max: u32, include_mixed: bool) -> Result<Vec<FlatMonomial>> {
    let chi = a.chi();
    if chi.is_zero() {
        return Err(Error::ChiZero);
    }
    // Integer weights: multiply everything by L = lcm(a1, a2, a3).
    let l = a.a().iter().fold(1u32, |acc, &x| acc.lcm(&x)) as i64;
    let weights: Vec<i64> = a
        .arm_indices()
        .iter()
        .map(|&(i, j)| (a.arm(i) as i64 - j as i64) * l / a.arm(i) as i64)
        .collect();
    let chi_l = (&chi * int(l)).to_integer();
    let chi_l: i64 = chi_l.try_into().expect("small");
    let mut out = Vec::new();
    for k in 0..=k_max {
        let target = 2 * l - k as i64 * chi_l;
        if target < 0 {
            continue;
        }
        let mut exps = vec![0u32; weights.len()];
        fill(&weights, 0, target, d_max, &mut exps, &mut |e: &[u32]| {
            let m = FlatMonomial { t1: 0, arms: e.to_vec(), q: k, tmu: 0 };
            if k == 0 {
                let deg = m.arm_degree();
                let touched = m.arms_touched(a);
                if deg < 3 || (!include_mixed && touched > 1) {
                    return;
                }
            }
            out.push(m);
        });
    }
    out.sort();
    Ok(out)
}

fn fill(weights: &[i64], pos: usize, left: i64, deg_left: u32, exps: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if pos == weights.len() {
        if left == 0 {
            emit(exps);
        }
        return;
    }
    let w = weights[pos];
    let max = ((left / w) as u32).min(deg_left);
    for m in 0..=max {
        exps[pos] = m;
        fill(weights, pos + 1, left - w * m as i64, deg_left - m, exps, emit);
    }
    exps[pos] = 0;
}

/// The fixed cubic part (1/2)t_1²t_mu + (1/2)t_1 Σ_i Σ_j (1/a_i) t_{i,j} t_{i,a_i−j}.
pub fn cubic_part(a: Triplet, k_max: u32, d_max: u32) -> FlatSeries {
    let mut s = FlatSeries::new(a, k_max, d_max);
    let mut m = FlatMonomial::one(a);
    m.t1 = 2;
    m.tmu = 1;
    s.add_term(m, rat(1, 2));
    for (i, j) in a.arm_indices() {
        let mut m = FlatMonomial::one(a);
        m.t1 = 1;
        m.arms[a.arm_position(i, j)] += 1;
        m.arms[a.arm_position(i, a.arm(i) as u8 - j)] += 1;
        s.add_term(m, rat(1, 2 * a.arm(i) as i64));
    }
    s
}

/// C_{xyz}(0) = η(x∘y, z) in the limit algebra.
pub fn limit_three_point(l: &LimitAlgebra, x: FlatIndex, y: FlatIndex, z: FlatIndex) -> Rational {
    let a = l.triplet;
    l.labels
        .iter()
        .zip(l.product(x, y))
        .filter(|(_, c)| !c.is_zero())
        .map(|(&w, c)| c * eta(a, w, z))
        .sum()
}

/// k = 0, degree-3 coefficients implied by the limit product, for every
/// (sorted) triple of arm indices. Mixed-arm entries are included and are 0.
pub fn seed_cubic(a: Triplet) -> Result<BTreeMap<FlatMonomial, Rational>> {
    seed_from(&limit_algebra(a)?)
}

pub(crate) fn seed_cubic_allowing_empty_arms(a: Triplet) -> Result<BTreeMap<FlatMonomial, Rational>> {
    seed_from(&limit_algebra_allowing_empty_arms(a)?)
}

fn seed_from(l: &LimitAlgebra) -> Result<BTreeMap<FlatMonomial, Rational>> {
    let a = l.triplet;
    let arms = a.arm_indices();
    let mut out = BTreeMap::new();
    for p in 0..arms.len() {
        for q in p..arms.len() {
            for r in q..arms.len() {
                let ix = |n: usize| FlatIndex::Arm(arms[n].0, arms[n].1);
                let c = limit_three_point(l, ix(p), ix(q), ix(r));
                let mut m = FlatMonomial::one(a);
                for n in [p, q, r] {
                    m.arms[n] += 1;
                }
                // ∂³ of c'·t^m equals c'·Π(m_n!), so divide by that factor.
                let sym: i64 = m.arms.iter().map(|&e| (1..=e as i64).product::<i64>()).product();
                out.insert(m, c / int(sym));
            }
        }
    }
    Ok(out)
}

/// t_{1,1}t_{2,1}t_{3,1}q, the normalized monomial; absent for empty arms.
pub fn default_normalization_monomial(a: Triplet) -> Option<FlatMonomial> {
    if a.has_degenerate_arm().is_some() {
        return None;
    }
    Some(FlatMonomial::from_q_and_arms(a, &[((1, 1), 1), ((2, 1), 1), ((3, 1), 1)], 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: u32, b: u32, c: u32) -> Triplet {
        Triplet::new(a, b, c).unwrap()
    }

    #[test]
    fn unknown_examples() {
        let a = t(2, 2, 2);
        let u = enumerate_unknowns(a, &ReconstructionConfig::new(1, 3)).unwrap();
        assert!(u.contains(&default_normalization_monomial(a).unwrap()));
        let u0 = enumerate_unknowns(a, &ReconstructionConfig::new(0, 4)).unwrap();
        for i in 1..=3u8 {
            assert!(u0.contains(&FlatMonomial::from_q_and_arms(a, &[((i, 1), 4)], 0)));
        }
        assert!(u0.iter().all(|m| m.arms_touched(a) == 1));
        let p1 = t(1, 1, 1);
        let u = enumerate_unknowns(p1, &ReconstructionConfig::new(1, 0)).unwrap();
        assert_eq!(u, vec![FlatMonomial { t1: 0, arms: vec![], q: 1, tmu: 0 }]);
        assert_eq!(enumerate_unknowns(t(3, 3, 3), &ReconstructionConfig::new(1, 3)), Err(Error::ChiZero));
    }

    #[test]
    fn every_unknown_has_degree_two() {
        for a in [t(2, 3, 7), t(2, 2, 3), t(3, 4, 5)] {
            let cfg = ReconstructionConfig::auto(a, 2);
            for m in enumerate_unknowns(a, &cfg).unwrap() {
                assert_eq!(m.euler_degree(a), int(2));
            }
        }
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(required_t_degree(t(2, 2, 2), 2), 4);
        assert_eq!(required_t_degree(t(2, 3, 7), 2), 14);
        assert_eq!(required_t_degree(t(2, 3, 5), 1), 10);
    }

    #[test]
    fn seed_examples() {
        let a = t(2, 3, 5);
        let seeds = seed_cubic(a).unwrap();
        let m = FlatMonomial::from_q_and_arms(a, &[((2, 1), 3)], 0);
        // C((2,1),(2,1),(2,1))(0) = 1/3, so the t_{2,1}³ coefficient is 1/18.
        assert_eq!(seeds[&m], rat(1, 18));
        let l = limit_algebra(a).unwrap();
        let x21 = FlatIndex::Arm(2, 1);
        assert_eq!(limit_three_point(&l, x21, x21, x21), rat(1, 3));
        let d4 = limit_algebra(t(2, 2, 2)).unwrap();
        for c in d4.labels.clone() {
            assert!(limit_three_point(&d4, FlatIndex::Arm(1, 1), FlatIndex::Arm(2, 1), c).is_zero());
        }
        for x in l.labels.clone() {
            for y in l.labels.clone() {
                assert_eq!(limit_three_point(&l, FlatIndex::Unit, x, y), eta(a, x, y));
            }
        }
    }
}
