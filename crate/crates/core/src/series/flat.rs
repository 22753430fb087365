use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::qring::QPoly;
use crate::algebra::{fmt_rational, int, parse_rational, Rational};
use crate::cusp::{FlatIndex, Triplet};
use crate::error::{Error, Result};

/// t_1^{t1} · Π t_{i,j}^{arms[p]} · q^{q} · t_mu^{tmu}, with arm exponents in
/// the triplet's canonical arm order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlatMonomial {
    pub t1: u32,
    pub arms: Vec<u32>,
    pub q: u32,
    pub tmu: u32,
}

impl FlatMonomial {
    pub fn one(a: Triplet) -> Self {
        FlatMonomial { t1: 0, arms: vec![0; a.arm_count()], q: 0, tmu: 0 }
    }

    /// Builds a monomial from (index, power) pairs; `Mu` contributes q-powers.
    pub fn from_q_and_arms(a: Triplet, arms: &[((u8, u8), u32)], q: u32) -> Self {
        let mut m = Self::one(a);
        for &((i, j), e) in arms {
            m.arms[a.arm_position(i, j)] += e;
        }
        m.q = q;
        m
    }

    pub fn t_degree(&self) -> u32 {
        self.t1 + self.arms.iter().sum::<u32>() + self.tmu
    }

    pub fn arm_degree(&self) -> u32 {
        self.arms.iter().sum()
    }

    pub fn mul(&self, other: &FlatMonomial) -> FlatMonomial {
        FlatMonomial {
            t1: self.t1 + other.t1,
            arms: self.arms.iter().zip(&other.arms).map(|(a, b)| a + b).collect(),
            q: self.q + other.q,
            tmu: self.tmu + other.tmu,
        }
    }

    /// Arms (i,j) with a nonzero power, in canonical order.
    pub fn arm_support(&self, a: Triplet) -> Vec<((u8, u8), u32)> {
        a.arm_indices().into_iter().zip(&self.arms).filter(|(_, &e)| e > 0).map(|(ij, &e)| (ij, e)).collect()
    }

    /// Number of distinct arms i with some t_{i,j} present.
    pub fn arms_touched(&self, a: Triplet) -> usize {
        let mut seen = [false; 3];
        for ((i, _), _) in self.arm_support(a) {
            seen[i as usize - 1] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }

    pub fn euler_degree(&self, a: Triplet) -> Rational {
        let mut d = int(self.t1 as i64);
        for ((i, j), e) in self.arm_support(a) {
            let ai = a.arm(i) as i64;
            d += Rational::new((e as i64 * (ai - j as i64)).into(), ai.into());
        }
        d + a.chi() * int(self.q as i64)
    }

    pub fn power_of(&self, a: Triplet, ix: FlatIndex) -> u32 {
        match ix {
            FlatIndex::Unit => self.t1,
            FlatIndex::Arm(i, j) => self.arms[a.arm_position(i, j)],
            FlatIndex::Mu => self.tmu,
        }
    }

    pub fn display(&self, a: Triplet) -> String {
        let mut parts = Vec::new();
        if self.t1 > 0 {
            parts.push(pow_str("t1", self.t1));
        }
        for ((i, j), e) in self.arm_support(a) {
            parts.push(pow_str(&format!("t{i}{j}"), e));
        }
        if self.q > 0 {
            parts.push(pow_str("q", self.q));
        }
        if self.tmu > 0 {
            parts.push(pow_str("tmu", self.tmu));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn pow_str(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl Ord for FlatMonomial {
    /// q-power, then total t-degree, then the exponents themselves.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.t_degree(), self.t1, &self.arms, self.tmu).cmp(&(
            other.q,
            other.t_degree(),
            other.t1,
            &other.arms,
            other.tmu,
        ))
    }
}

impl PartialOrd for FlatMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical JSON record of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub t1: u32,
    pub arms: Vec<[u32; 3]>,
    pub q: u32,
    pub tmu: u32,
    pub c: String,
}

/// Truncated series: terms with q-power <= `k_max` and t-degree <= `d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSeries {
    triplet: Triplet,
    k_max: u32,
    d_max: u32,
    terms: BTreeMap<FlatMonomial, Rational>,
    truncated: bool,
}

/// Values of the flat coordinates at a point; q is either kept formal
/// (results in Q[q]/(q^{K+1})) or replaced by a rational number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatPoint {
    pub t1: Rational,
    pub arms: Vec<Rational>,
    pub tmu: Rational,
    pub q: QValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    Formal,
    Value(Rational),
}

impl FlatPoint {
    pub fn coordinate(&self, a: Triplet, ix: FlatIndex) -> &Rational {
        match ix {
            FlatIndex::Unit => &self.t1,
            FlatIndex::Arm(i, j) => &self.arms[a.arm_position(i, j)],
            FlatIndex::Mu => &self.tmu,
        }
    }
}

impl FlatSeries {
    pub fn new(a: Triplet, k_max: u32, d_max: u32) -> Self {
        FlatSeries { triplet: a, k_max, d_max, terms: BTreeMap::new(), truncated: false }
    }

    pub fn constant(a: Triplet, k_max: u32, d_max: u32, c: Rational) -> Self {
        let mut s = Self::new(a, k_max, d_max);
        s.add_term(FlatMonomial::one(a), c);
        s
    }

    /// The coordinate t_ix as a series (q for `Mu` is not a coordinate; this
    /// gives bare t_mu).
    pub fn coordinate(a: Triplet, k_max: u32, d_max: u32, ix: FlatIndex) -> Self {
        let mut m = FlatMonomial::one(a);
        match ix {
            FlatIndex::Unit => m.t1 = 1,
            FlatIndex::Arm(i, j) => m.arms[a.arm_position(i, j)] = 1,
            FlatIndex::Mu => m.tmu = 1,
        }
        let mut s = Self::new(a, k_max, d_max);
        s.add_term(m, Rational::one());
        s
    }

    pub fn q_power(a: Triplet, k_max: u32, d_max: u32, k: u32) -> Self {
        let mut m = FlatMonomial::one(a);
        m.q = k;
        let mut s = Self::new(a, k_max, d_max);
        s.add_term(m, Rational::one());
        s
    }

    pub fn triplet(&self) -> Triplet {
        self.triplet
    }

    pub fn truncation(&self) -> (u32, u32) {
        (self.k_max, self.d_max)
    }

    /// Whether any operation producing this value dropped terms.
    pub fn truncation_hit(&self) -> bool {
        self.truncated
    }

    pub fn within(&self, m: &FlatMonomial) -> bool {
        m.q <= self.k_max && m.t_degree() <= self.d_max
    }

    pub fn add_term(&mut self, m: FlatMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if !self.within(&m) {
            self.truncated = true;
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FlatMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FlatMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same terms under new bounds; terms outside are dropped and flagged.
    pub fn with_truncation(&self, k_max: u32, d_max: u32) -> Self {
        let mut out = FlatSeries::new(self.triplet, k_max, d_max);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn empty_like(&self) -> Self {
        let mut s = FlatSeries::new(self.triplet, self.k_max, self.d_max);
        s.truncated = self.truncated;
        s
    }

    pub fn add(&self, other: &FlatSeries) -> FlatSeries {
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FlatSeries) -> FlatSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> FlatSeries {
        let mut out = self.empty_like();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    /// Exact product with terms beyond the truncation dropped.
    pub fn mul(&self, other: &FlatSeries) -> FlatSeries {
        debug_assert_eq!(self.truncation(), other.truncation());
        let mut out = self.empty_like();
        out.truncated |= other.truncated;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.q + m2.q > out.k_max || m1.t_degree() + m2.t_degree() > out.d_max {
                    out.truncated = true;
                    continue;
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// ∂/∂t_ix; for `Mu` this acts on q^k by k and on bare t_mu^p by p.
    pub fn diff(&self, ix: FlatIndex) -> FlatSeries {
        let a = self.triplet;
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            match ix {
                FlatIndex::Unit if m.t1 > 0 => {
                    let mut n = m.clone();
                    n.t1 -= 1;
                    out.add_term(n, c * int(m.t1 as i64));
                }
                FlatIndex::Arm(i, j) => {
                    let p = a.arm_position(i, j);
                    if m.arms[p] > 0 {
                        let mut n = m.clone();
                        n.arms[p] -= 1;
                        out.add_term(n, c * int(m.arms[p] as i64));
                    }
                }
                FlatIndex::Mu => {
                    if m.q > 0 {
                        out.add_term(m.clone(), c * int(m.q as i64));
                    }
                    if m.tmu > 0 {
                        let mut n = m.clone();
                        n.tmu -= 1;
                        out.add_term(n, c * int(m.tmu as i64));
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// E f with E = t_1∂_1 + Σ ((a_i−j)/a_i) t_{i,j}∂_{i,j} + χ ∂_mu.
    pub fn euler_apply(&self) -> FlatSeries {
        let a = self.triplet;
        let chi = a.chi();
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if m.tmu > 0 {
                let mut n = m.clone();
                n.tmu -= 1;
                out.add_term(n, c * &chi * int(m.tmu as i64));
            }
            out.add_term(m.clone(), c * m.euler_degree(a));
        }
        out
    }

    /// Evaluates at a point. With a formal q the result lives in
    /// Q[q]/(q^{k_max+1}); with a rational q the result is a constant.
    pub fn evaluate(&self, point: &FlatPoint) -> QPoly {
        let prec = match point.q {
            QValue::Formal => self.k_max,
            QValue::Value(_) => 0,
        };
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            if m.t1 > 0 {
                v *= num_traits::pow(point.t1.clone(), m.t1 as usize);
            }
            for (p, &e) in m.arms.iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point.arms[p].clone(), e as usize);
                }
            }
            if m.tmu > 0 {
                v *= num_traits::pow(point.tmu.clone(), m.tmu as usize);
            }
            if v.is_zero() {
                continue;
            }
            let k = match &point.q {
                QValue::Formal => m.q,
                QValue::Value(r) => {
                    v *= num_traits::pow(r.clone(), m.q as usize);
                    0
                }
            };
            *acc.entry(k).or_insert_with(Rational::zero) += v;
        }
        let mut out = QPoly::zero(prec);
        for (k, v) in acc {
            out.add_assign_ref(&QPoly::monomial(v, k, prec));
        }
        out
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        let a = self.triplet;
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                t1: m.t1,
                arms: m.arm_support(a).into_iter().map(|((i, j), e)| [i as u32, j as u32, e]).collect(),
                q: m.q,
                tmu: m.tmu,
                c: fmt_rational(c),
            })
            .collect()
    }

    pub fn from_json_terms(a: Triplet, k_max: u32, d_max: u32, terms: &[TermJson]) -> Result<Self> {
        let mut s = FlatSeries::new(a, k_max, d_max);
        for t in terms {
            let mut m = FlatMonomial::one(a);
            m.t1 = t.t1;
            m.q = t.q;
            m.tmu = t.tmu;
            for &[i, j, e] in &t.arms {
                let ix = FlatIndex::Arm(i as u8, j as u8);
                if i > 3 || !a.contains(ix) {
                    return Err(Error::Parse(format!("arm ({i},{j}) not in {a}")));
                }
                m.arms[a.arm_position(i as u8, j as u8)] += e;
            }
            if !s.within(&m) {
                return Err(Error::Parse("term outside truncation".into()));
            }
            s.add_term(m, parse_rational(&t.c)?);
        }
        Ok(s)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let a = self.triplet;
        self.terms
            .iter()
            .map(|(m, c)| format!("{}*{}", fmt_rational(c), m.display(a)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn d4() -> Triplet {
        Triplet::new(2, 2, 2).unwrap()
    }

    fn var(ix: FlatIndex, k: u32) -> FlatSeries {
        FlatSeries::coordinate(d4(), k, 10, ix)
    }

    #[test]
    fn q_products() {
        let a = d4();
        let p = FlatSeries::q_power(a, 3, 5, 1).mul(&FlatSeries::q_power(a, 3, 5, 2));
        assert_eq!(p, FlatSeries::q_power(a, 3, 5, 3));
        let p = FlatSeries::q_power(a, 2, 5, 1).mul(&FlatSeries::q_power(a, 2, 5, 2));
        assert!(p.is_zero());
        assert!(p.truncation_hit());
        let one = FlatSeries::constant(a, 2, 5, int(1));
        let q = FlatSeries::q_power(a, 2, 5, 1);
        let prod = one.add(&q).mul(&one.sub(&q));
        assert_eq!(prod, one.sub(&FlatSeries::q_power(a, 2, 5, 2)));
    }

    #[test]
    fn derivatives() {
        let a = d4();
        assert_eq!(FlatSeries::q_power(a, 3, 5, 3).diff(FlatIndex::Mu), FlatSeries::q_power(a, 3, 5, 3).scale(&int(3)));
        let t1 = var(FlatIndex::Unit, 2);
        let f = t1.mul(&t1).mul(&var(FlatIndex::Mu, 2));
        assert_eq!(f.diff(FlatIndex::Mu), t1.mul(&t1));
        let m = FlatMonomial::from_q_and_arms(a, &[((1, 1), 1), ((2, 1), 1), ((3, 1), 1)], 1);
        let mut s = FlatSeries::new(a, 2, 10);
        s.add_term(m, int(1));
        let expected = FlatMonomial::from_q_and_arms(a, &[((2, 1), 1), ((3, 1), 1)], 1);
        assert_eq!(s.diff(FlatIndex::Arm(1, 1)).terms().next().unwrap().0, &expected);
    }

    #[test]
    fn euler_examples() {
        let a = d4();
        let m = FlatMonomial::from_q_and_arms(a, &[((1, 1), 1), ((2, 1), 1), ((3, 1), 1)], 1);
        assert_eq!(m.euler_degree(a), int(2));
        let t1 = var(FlatIndex::Unit, 2);
        let f = t1.mul(&t1).mul(&var(FlatIndex::Mu, 2));
        assert_eq!(f.euler_apply(), f.scale(&int(2)).add(&t1.mul(&t1).scale(&rat(1, 2))));
        let q2 = FlatSeries::q_power(a, 2, 10, 2);
        assert_eq!(q2.euler_apply(), q2.scale(&int(1)));
    }

    #[test]
    fn json_round_trip() {
        let a = Triplet::new(2, 3, 5).unwrap();
        let mut s = FlatSeries::new(a, 2, 8);
        s.add_term(FlatMonomial::from_q_and_arms(a, &[((2, 2), 1), ((3, 1), 2)], 1), rat(-3, 7));
        let back = FlatSeries::from_json_terms(a, 2, 8, &s.to_json_terms()).unwrap();
        assert_eq!(back, s);
        let json = serde_json::to_string(&s.to_json_terms()).unwrap();
        assert_eq!(json, r#"[{"t1":0,"arms":[[2,2,1],[3,1,2]],"q":1,"tmu":0,"c":"-3/7"}]"#);
    }
}
