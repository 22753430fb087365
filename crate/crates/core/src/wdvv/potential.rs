use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ansatz::{
    cubic_part, default_normalization_monomial, enumerate_monomials, enumerate_unknowns, required_t_degree,
    seed_cubic, seed_cubic_allowing_empty_arms, ReconstructionConfig,
};
use super::engine::{SolveStats, System};
use crate::algebra::{one, Rational};
use crate::cusp::{eta_inverse, FlatIndex, Triplet};
use crate::error::{Error, Result};
use crate::series::{FlatMonomial, FlatSeries, TermJson};

/// A potential F = cubic part + correction series, truncated at q-order K
/// and t-degree D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    triplet: Triplet,
    series: FlatSeries,
    unresolved: Vec<FlatMonomial>,
    stats: SolveStats,
}

/// One nonzero coefficient of Σ C_{abe}η^{ef}C_{fcd} − Σ C_{cbe}η^{ef}C_{fad}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualTerm {
    pub indices: [FlatIndex; 4],
    pub monomial: FlatMonomial,
    pub coefficient: Rational,
}

/// Result of re-solving with mixed-arm k = 0 monomials admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedArmCheck {
    pub k: u32,
    pub d: u32,
    pub checked: usize,
    pub nonzero: Vec<(FlatMonomial, Rational)>,
    pub undetermined: Vec<FlatMonomial>,
}

impl MixedArmCheck {
    pub fn passed(&self) -> bool {
        self.nonzero.is_empty() && self.undetermined.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct PotentialJson {
    #[serde(rename = "A")]
    a: Triplet,
    #[serde(rename = "K")]
    k: u32,
    #[serde(rename = "D")]
    d: u32,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    unresolved: Vec<TermJson>,
}

fn check_config(a: Triplet, cfg: &ReconstructionConfig) -> Result<()> {
    if a.chi().is_zero() {
        return Err(Error::ChiZero);
    }
    if cfg.k == 0 {
        return Err(Error::InvalidConfig("q-order K must be at least 1".into()));
    }
    let required = required_t_degree(a, cfg.k);
    if cfg.d < required {
        return Err(Error::TruncationTooSmall { d: cfg.d, required });
    }
    Ok(())
}

/// Solves for every correction coefficient with q-power <= K.
pub fn solve(a: Triplet, cfg: &ReconstructionConfig) -> Result<Potential> {
    check_config(a, cfg)?;
    let (seeds, norm) = match (&cfg.normalization, a.has_degenerate_arm()) {
        (None, Some(i)) => return Err(Error::DegenerateArm(i)),
        (None, None) => {
            let m = default_normalization_monomial(a).expect("no empty arm");
            (seed_cubic(a)?, (m, one()))
        }
        (Some(n), _) => {
            (seed_cubic_allowing_empty_arms(a)?, (n.monomial.clone(), n.coefficient.clone()))
        }
    };
    let monos = enumerate_unknowns(a, cfg)?;
    let index: BTreeMap<&FlatMonomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut values: Vec<Option<Rational>> = vec![None; monos.len()];
    for (m, c) in &seeds {
        if let Some(&i) = index.get(m) {
            values[i] = Some(c.clone());
        }
    }
    match index.get(&norm.0) {
        Some(&i) => values[i] = Some(norm.1),
        None => {
            return Err(Error::InvalidConfig(format!(
                "normalization monomial {} is not a correction monomial",
                norm.0.display(a)
            )))
        }
    }
    let system = System::build(a, cfg.k, monos.clone());
    let mut stats = SolveStats { unknowns: monos.len(), equations: system.equations.len(), rounds: 0 };
    let mut unresolved = Vec::new();
    loop {
        stats.rounds += system.propagate(&mut values)?;
        let Some(level) = system.lowest_unresolved(&values) else { break };
        if cfg.strict {
            return Err(Error::Underdetermined { k: level.0, d: level.1 });
        }
        // Non-strict: zero the lowest level and continue from there.
        for (i, m) in monos.iter().enumerate() {
            if values[i].is_none() && (m.q, m.t_degree()) == level {
                values[i] = Some(Rational::zero());
                unresolved.push(m.clone());
            }
        }
    }
    system.check(&values)?;
    let mut series = cubic_part(a, cfg.k, cfg.d);
    for (m, v) in monos.into_iter().zip(values) {
        series.add_term(m, v.expect("all values set"));
    }
    Ok(Potential { triplet: a, series, unresolved, stats })
}

impl Potential {
    /// Wraps a given series; nothing is checked.
    pub fn from_series(series: FlatSeries) -> Self {
        Potential { triplet: series.triplet(), series, unresolved: Vec::new(), stats: SolveStats::default() }
    }

    pub fn triplet(&self) -> Triplet {
        self.triplet
    }

    /// (K, D).
    pub fn truncation(&self) -> (u32, u32) {
        self.series.truncation()
    }

    pub fn series(&self) -> &FlatSeries {
        &self.series
    }

    /// F minus the cubic part.
    pub fn correction(&self) -> FlatSeries {
        let (k, d) = self.truncation();
        self.series.sub(&cubic_part(self.triplet, k, d))
    }

    pub fn coefficient(&self, m: &FlatMonomial) -> Rational {
        self.series.coeff(m)
    }

    /// Coefficients set to zero in non-strict mode.
    pub fn unresolved(&self) -> &[FlatMonomial] {
        &self.unresolved
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    /// C_{xyz} = ∂_x∂_y∂_z F.
    pub fn three_point(&self, x: FlatIndex, y: FlatIndex, z: FlatIndex) -> FlatSeries {
        self.series.diff(x).diff(y).diff(z)
    }

    /// The terms with q-power at most `k`.
    pub fn truncate_q(&self, k: u32) -> Potential {
        let (_, d) = self.truncation();
        let mut p = self.clone();
        p.series = FlatSeries::new(self.triplet, k, d);
        for (m, c) in self.series.terms() {
            if m.q <= k {
                p.series.add_term(m.clone(), c.clone());
            }
        }
        p.unresolved.retain(|m| m.q <= k);
        p
    }

    /// The same potential with `delta` added to one coefficient.
    pub fn perturbed(&self, m: &FlatMonomial, delta: &Rational) -> Potential {
        let mut p = self.clone();
        p.series.add_term(m.clone(), delta.clone());
        p
    }

    /// Every nonzero WDVV coefficient with q-power <= K, over all index
    /// quadruples including the unit. Since all admissible monomials fit
    /// below D, products are formed without t-degree truncation.
    pub fn wdvv_residual(&self) -> Vec<ResidualTerm> {
        let a = self.triplet;
        let (k, d) = self.truncation();
        let idx = a.flat_indices();
        let n = idx.len();
        let wide = 2 * d + 2;
        let mut c: BTreeMap<[usize; 3], FlatSeries> = BTreeMap::new();
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    let s = self.three_point(idx[x], idx[y], idx[z]).with_truncation(k, wide);
                    c.insert([x, y, z], s);
                }
            }
        }
        let get = |x: usize, y: usize, z: usize| {
            let mut t = [x, y, z];
            t.sort_unstable();
            &c[&t]
        };
        let partner: Vec<usize> = idx.iter().map(|&ix| a.flat_position(a.partner(ix))).collect();
        let weight: Vec<Rational> = idx.iter().map(|&ix| eta_inverse(a, ix, a.partner(ix))).collect();
        // P[(x,y),(z,w)] = Σ_e C_{xye} η^{e e'} C_{e' zw}; symmetric under swapping the pairs.
        let mut pair: BTreeMap<([usize; 2], [usize; 2]), FlatSeries> = BTreeMap::new();
        let mut product = |p: [usize; 2], q: [usize; 2]| -> FlatSeries {
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            pair.entry((p, q))
                .or_insert_with(|| {
                    let mut acc = FlatSeries::new(a, k, wide);
                    for e in 0..n {
                        let l = get(p[0], p[1], e);
                        if l.is_zero() {
                            continue;
                        }
                        let r = get(partner[e], q[0], q[1]);
                        if r.is_zero() {
                            continue;
                        }
                        acc = acc.add(&l.mul(r).scale(&weight[e]));
                    }
                    acc
                })
                .clone()
        };
        let sp = |x: usize, y: usize| if x <= y { [x, y] } else { [y, x] };
        let mut out = Vec::new();
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    for w in z..n {
                        let p1 = product(sp(x, y), sp(z, w));
                        let p2 = product(sp(x, z), sp(y, w));
                        let p3 = product(sp(x, w), sp(y, z));
                        let quad = [idx[x], idx[y], idx[z], idx[w]];
                        for (lhs, rhs, q) in [(&p1, &p2, [quad[0], quad[1], quad[2], quad[3]]), (&p1, &p3, [quad[0], quad[1], quad[3], quad[2]])] {
                            for (m, coef) in lhs.sub(rhs).terms() {
                                out.push(ResidualTerm { indices: q, monomial: m.clone(), coefficient: coef.clone() });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Re-solves with all k = 0 mixed-arm monomials admitted as unknowns and
    /// the coefficients of `self` (up to q-order `k`) fixed; the mixed ones
    /// must come out as zero.
    pub fn check_mixed_arms(&self, k: u32) -> Result<MixedArmCheck> {
        let a = self.triplet;
        let d = required_t_degree(a, k);
        let (_, own_d) = self.truncation();
        if d > own_d {
            return Err(Error::TruncationTooSmall { d: own_d, required: d });
        }
        let monos = enumerate_monomials(a, k, d, true)?;
        let mut values = Vec::with_capacity(monos.len());
        let mut mixed = Vec::new();
        for (i, m) in monos.iter().enumerate() {
            if m.q == 0 && m.arms_touched(a) > 1 {
                mixed.push(i);
                // Degree-3 values come from the limit product, which is already checked.
                values.push(if m.arm_degree() == 3 { Some(self.coefficient(m)) } else { None });
            } else {
                values.push(Some(self.coefficient(m)));
            }
        }
        let checked = mixed.iter().filter(|&&i| values[i].is_none()).count();
        let system = System::build(a, k, monos.clone());
        system.propagate(&mut values)?;
        let mut nonzero = Vec::new();
        let mut undetermined = Vec::new();
        for i in mixed {
            match &values[i] {
                Some(v) if v.is_zero() => {}
                Some(v) => nonzero.push((monos[i].clone(), v.clone())),
                None => undetermined.push(monos[i].clone()),
            }
        }
        Ok(MixedArmCheck { k, d, checked, nonzero, undetermined })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let (k, d) = self.truncation();
        let unresolved = {
            let mut s = FlatSeries::new(self.triplet, k, d);
            for m in &self.unresolved {
                s.add_term(m.clone(), one());
            }
            s.to_json_terms()
        };
        serde_json::to_value(PotentialJson { a: self.triplet, k, d, terms: self.series.to_json_terms(), unresolved })
            .expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Potential> {
        let p: PotentialJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(p)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Potential> {
        let p: PotentialJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(p)
    }

    fn from_json_parts(p: PotentialJson) -> Result<Potential> {
        let series = FlatSeries::from_json_terms(p.a, p.k, p.d, &p.terms)?;
        let unresolved = FlatSeries::from_json_terms(p.a, p.k, p.d, &p.unresolved)?.terms().map(|(m, _)| m.clone()).collect();
        Ok(Potential { triplet: p.a, series, unresolved, stats: SolveStats::default() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::cusp::eta;
    use crate::wdvv::Normalization;

    fn t(a: u32, b: u32, c: u32) -> Triplet {
        Triplet::new(a, b, c).unwrap()
    }

    fn d4() -> &'static Potential {
        static P: std::sync::OnceLock<Potential> = std::sync::OnceLock::new();
        P.get_or_init(|| solve(t(2, 2, 2), &ReconstructionConfig::new(2, 6)).unwrap())
    }

    #[test]
    fn d4_closed_form() {
        // Known closed form of this potential through q²: per arm
        // −t⁴/96 + t²q²/2, plus t11 t21 t31 q.
        let a = t(2, 2, 2);
        let mut expected = cubic_part(a, 2, 6);
        for i in 1..=3u8 {
            expected.add_term(FlatMonomial::from_q_and_arms(a, &[((i, 1), 4)], 0), rat(-1, 96));
            expected.add_term(FlatMonomial::from_q_and_arms(a, &[((i, 1), 2)], 2), rat(1, 2));
        }
        expected.add_term(default_normalization_monomial(a).unwrap(), int(1));
        assert_eq!(d4().series(), &expected);
        assert!(d4().wdvv_residual().is_empty());
    }

    #[test]
    fn unit_axiom_and_examples() {
        let p = d4();
        let a = p.triplet();
        let (k, d) = p.truncation();
        for x in a.flat_indices() {
            for y in a.flat_indices() {
                let c = p.three_point(FlatIndex::Unit, x, y);
                assert_eq!(c, FlatSeries::constant(a, k, d, eta(a, x, y)));
            }
        }
        let c = p.three_point(FlatIndex::Arm(1, 1), FlatIndex::Arm(2, 1), FlatIndex::Arm(3, 1));
        let mut q = FlatMonomial::one(a);
        q.q = 1;
        assert_eq!(c.coeff(&q), int(1));
    }

    #[test]
    fn perturbation_breaks_wdvv() {
        let p = d4();
        let m = FlatMonomial::from_q_and_arms(p.triplet(), &[((1, 1), 2)], 2);
        assert!(!p.perturbed(&m, &int(1)).wdvv_residual().is_empty());
        assert!(p.truncate_q(0).wdvv_residual().is_empty());
    }

    #[test]
    fn config_errors() {
        assert_eq!(solve(t(3, 3, 3), &ReconstructionConfig::new(1, 9)), Err(Error::ChiZero));
        assert_eq!(solve(t(1, 2, 2), &ReconstructionConfig::new(1, 4)), Err(Error::DegenerateArm(1)));
        assert_eq!(
            solve(t(2, 2, 2), &ReconstructionConfig::new(2, 3)),
            Err(Error::TruncationTooSmall { d: 3, required: 4 })
        );
        assert!(matches!(solve(t(2, 2, 2), &ReconstructionConfig::new(0, 4)), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn explicit_normalization_for_empty_arms() {
        let a = t(1, 2, 2);
        let m = FlatMonomial::from_q_and_arms(a, &[((2, 1), 1), ((3, 1), 1)], 1);
        let mut cfg = ReconstructionConfig::auto(a, 2);
        cfg.normalization = Some(Normalization { monomial: m.clone(), coefficient: int(1) });
        let p = solve(a, &cfg).unwrap();
        assert_eq!(p.coefficient(&m), int(1));
        assert!(p.wdvv_residual().is_empty());

        let a = t(1, 1, 1);
        let q = FlatMonomial { t1: 0, arms: vec![], q: 1, tmu: 0 };
        let mut cfg = ReconstructionConfig::auto(a, 1);
        cfg.normalization = Some(Normalization { monomial: q.clone(), coefficient: int(1) });
        let p = solve(a, &cfg).unwrap();
        assert_eq!(p.coefficient(&q), int(1));
    }

    #[test]
    fn json_round_trip() {
        let p = d4();
        let back = Potential::from_json(&p.to_json()).unwrap();
        assert_eq!(back.series(), p.series());
        assert!(back.is_resolved());
    }

    #[test]
    fn mixed_arms_vanish() {
        let r = d4().check_mixed_arms(1).unwrap();
        assert!(r.checked > 0);
        assert!(r.passed(), "{r:?}");
    }
}
