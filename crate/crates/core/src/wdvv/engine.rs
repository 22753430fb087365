//! WDVV equations as integer-coefficient quadratic forms in the unknown
//! coefficients, solved by repeated linearization.
//!
//! Only non-unit indices enter: with the unit, WDVV reduces to the unit
//! axiom, which the cubic part satisfies by construction. For non-unit
//! a, b, c, d and L = lcm(a_i),
//!
//!   L·A(ab|cd) = L η_ab C_{mu cd} + L η_cd C_{ab mu} + Σ_t L a_{i(t)} C_{ab t} C_{t' cd},
//!
//! where t runs over arm indices with η-partner t'. For each multiset
//! {a,b,c,d} the three pairings must agree, coefficient by coefficient up to
//! the q-order K.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::Rational;
use crate::cusp::Triplet;
use crate::error::{Error, Result};
use crate::series::FlatMonomial;

const NONE: u32 = u32::MAX;

/// Target monomial of a third derivative: arm exponents and q-power.
type Key = (u32, Vec<u32>);
/// Linear form over unknown ids.
type Form = Vec<(u32, i64)>;

#[derive(Clone, Debug)]
pub(crate) struct Equation {
    /// (v1, v2, c): c·x_{v1}·x_{v2}, or c·x_{v1} when v2 = NONE.
    terms: Vec<(u32, u32, i64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub unknowns: usize,
    pub equations: usize,
    pub rounds: usize,
}

pub(crate) struct System {
    pub monos: Vec<FlatMonomial>,
    pub equations: Vec<Equation>,
}

/// Non-unit index: arm position `p < n` or mu (`n`).
fn third_derivatives(a: Triplet, monos: &[FlatMonomial]) -> HashMap<[usize; 3], Vec<(Key, Form)>> {
    let n = a.arm_count();
    let ni = n + 1;
    let mut acc: HashMap<[usize; 3], BTreeMap<Key, Form>> = HashMap::new();
    for (id, m) in monos.iter().enumerate() {
        for x in 0..ni {
            for y in x..ni {
                'triple: for z in y..ni {
                    let mut arms = m.arms.clone();
                    let mut factor: i64 = 1;
                    for ix in [x, y, z] {
                        if ix == n {
                            if m.q == 0 {
                                continue 'triple;
                            }
                            factor *= m.q as i64;
                        } else {
                            if arms[ix] == 0 {
                                continue 'triple;
                            }
                            factor *= arms[ix] as i64;
                            arms[ix] -= 1;
                        }
                    }
                    acc.entry([x, y, z]).or_default().entry((m.q, arms)).or_default().push((id as u32, factor));
                }
            }
        }
    }
    acc.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

type Quadratic = BTreeMap<Key, BTreeMap<(u32, u32), i128>>;

struct Builder<'a> {
    n: usize,
    k_max: u32,
    l: i64,
    arm_len: Vec<i64>,
    partner: Vec<usize>,
    c: &'a HashMap<[usize; 3], Vec<(Key, Form)>>,
}

impl Builder<'_> {
    fn c(&self, t: [usize; 3]) -> &[(Key, Form)] {
        self.c.get(&sorted3(t)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// L·η_xy for non-unit x, y.
    fn eta_l(&self, x: usize, y: usize) -> i64 {
        if x < self.n && y < self.n && self.partner[x] == y {
            self.l / self.arm_len[x]
        } else {
            0
        }
    }

    fn add_linear(&self, out: &mut Quadratic, w: i64, form: &[(Key, Form)]) {
        if w == 0 {
            return;
        }
        for (k, f) in form {
            let e = out.entry(k.clone()).or_default();
            for &(v, c) in f {
                *e.entry((v, NONE)).or_insert(0) += (w as i128) * c as i128;
            }
        }
    }

    fn add_product(&self, out: &mut Quadratic, w: i64, f1: &[(Key, Form)], f2: &[(Key, Form)]) {
        for (k1, a1) in f1 {
            for (k2, a2) in f2 {
                if k1.0 + k2.0 > self.k_max {
                    continue;
                }
                let key = (k1.0 + k2.0, k1.1.iter().zip(&k2.1).map(|(x, y)| x + y).collect());
                let e = out.entry(key).or_default();
                for &(v1, c1) in a1 {
                    for &(v2, c2) in a2 {
                        let pair = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
                        *e.entry(pair).or_insert(0) += w as i128 * c1 as i128 * c2 as i128;
                    }
                }
            }
        }
    }

    /// L·A(xy|zw).
    fn pairing(&self, x: usize, y: usize, z: usize, w: usize) -> Quadratic {
        let mu = self.n;
        let mut out = Quadratic::new();
        self.add_linear(&mut out, self.eta_l(x, y), self.c([mu, z, w]));
        self.add_linear(&mut out, self.eta_l(z, w), self.c([x, y, mu]));
        for t in 0..self.n {
            let f1 = self.c([x, y, t]);
            if f1.is_empty() {
                continue;
            }
            let f2 = self.c([self.partner[t], z, w]);
            if f2.is_empty() {
                continue;
            }
            self.add_product(&mut out, self.l * self.arm_len[t], f1, f2);
        }
        out
    }
}

fn difference(p: &Quadratic, q: &Quadratic, out: &mut Vec<Equation>) {
    let keys: std::collections::BTreeSet<&Key> = p.keys().chain(q.keys()).collect();
    for k in keys {
        let mut terms: BTreeMap<(u32, u32), i128> = p.get(k).cloned().unwrap_or_default();
        if let Some(qt) = q.get(k) {
            for (pair, c) in qt {
                *terms.entry(*pair).or_insert(0) -= c;
            }
        }
        let terms: Vec<(u32, u32, i64)> = terms
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((v1, v2), c)| (v1, v2, i64::try_from(c).expect("coefficient fits in i64")))
            .collect();
        if !terms.is_empty() {
            out.push(Equation { terms });
        }
    }
}

impl System {
    /// All WDVV equations up to q-order `k_max` over the given monomial
    /// table, which must contain every monomial that can occur.
    pub fn build(a: Triplet, k_max: u32, monos: Vec<FlatMonomial>) -> System {
        let n = a.arm_count();
        let arms = a.arm_indices();
        let c = third_derivatives(a, &monos);
        let b = Builder {
            n,
            k_max,
            l: a.a().iter().fold(1u32, |acc, &x| acc.lcm(&x)) as i64,
            arm_len: arms.iter().map(|&(i, _)| a.arm(i) as i64).collect(),
            partner: arms.iter().map(|&(i, j)| a.arm_position(i, a.arm(i) as u8 - j)).collect(),
            c: &c,
        };
        let ni = n + 1;
        let mut equations = Vec::new();
        for x in 0..ni {
            for y in x..ni {
                for z in y..ni {
                    for w in z..ni {
                        let p1 = b.pairing(x, y, z, w);
                        let p2 = b.pairing(x, z, y, w);
                        let p3 = b.pairing(x, w, y, z);
                        difference(&p1, &p2, &mut equations);
                        if !(y == z || z == w) {
                            difference(&p1, &p3, &mut equations);
                        }
                    }
                }
            }
        }
        System { monos, equations }
    }

    fn level(&self, id: u32) -> (u32, u32) {
        let m = &self.monos[id as usize];
        (m.q, m.t_degree())
    }

    fn equation_level(&self, eq: &Equation) -> (u32, u32) {
        eq.terms
            .iter()
            .flat_map(|&(v1, v2, _)| [v1, v2])
            .filter(|&v| v != NONE)
            .map(|v| self.level(v))
            .max()
            .unwrap_or((0, 0))
    }

    /// Fixes unknowns until no equation yields new information. Values
    /// already present are treated as known.
    pub fn propagate(&self, values: &mut [Option<Rational>]) -> Result<usize> {
        let mut active: Vec<usize> = (0..self.equations.len()).collect();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let mut elim = Eliminator::default();
            let mut still_active = Vec::with_capacity(active.len());
            for &e in &active {
                let eq = &self.equations[e];
                match linearize(eq, values) {
                    Linearized::Nonlinear => still_active.push(e),
                    Linearized::Constant(c) => {
                        if !c.is_zero() {
                            let (k, d) = self.equation_level(eq);
                            return Err(Error::Inconsistent { k, d });
                        }
                    }
                    Linearized::Linear(row, c) => {
                        still_active.push(e);
                        if !elim.insert(row, c) {
                            let (k, d) = self.equation_level(eq);
                            return Err(Error::Inconsistent { k, d });
                        }
                    }
                }
            }
            active = still_active;
            let solved = elim.determined();
            if solved.is_empty() {
                return Ok(rounds);
            }
            for (v, val) in solved {
                values[v as usize] = Some(val);
            }
        }
    }

    /// Lowest level among unknowns without a value.
    pub fn lowest_unresolved(&self, values: &[Option<Rational>]) -> Option<(u32, u32)> {
        (0..self.monos.len() as u32).filter(|&v| values[v as usize].is_none()).map(|v| self.level(v)).min()
    }

    /// First equation that fails once every unknown has a value.
    pub fn check(&self, values: &[Option<Rational>]) -> Result<()> {
        for eq in &self.equations {
            match linearize(eq, values) {
                Linearized::Constant(c) if c.is_zero() => {}
                _ => {
                    let (k, d) = self.equation_level(eq);
                    return Err(Error::Inconsistent { k, d });
                }
            }
        }
        Ok(())
    }
}

enum Linearized {
    Nonlinear,
    Constant(Rational),
    Linear(BTreeMap<u32, Rational>, Rational),
}

fn linearize(eq: &Equation, values: &[Option<Rational>]) -> Linearized {
    let mut lin: BTreeMap<u32, Rational> = BTreeMap::new();
    let mut cst = Rational::zero();
    for &(v1, v2, c) in &eq.terms {
        let c = Rational::from_integer(c.into());
        let x1 = &values[v1 as usize];
        if v2 == NONE {
            match x1 {
                Some(x) => cst += c * x,
                None => *lin.entry(v1).or_insert_with(Rational::zero) += c,
            }
            continue;
        }
        let x2 = &values[v2 as usize];
        match (x1, x2) {
            (Some(x), Some(y)) => {
                if !x.is_zero() && !y.is_zero() {
                    cst += c * x * y;
                }
            }
            (Some(x), None) => {
                if !x.is_zero() {
                    *lin.entry(v2).or_insert_with(Rational::zero) += c * x;
                }
            }
            (None, Some(y)) => {
                if !y.is_zero() {
                    *lin.entry(v1).or_insert_with(Rational::zero) += c * y;
                }
            }
            (None, None) => return Linearized::Nonlinear,
        }
    }
    lin.retain(|_, c| !c.is_zero());
    if lin.is_empty() {
        Linearized::Constant(cst)
    } else {
        Linearized::Linear(lin, cst)
    }
}

/// Incremental reduced row echelon form of sparse rows Σ c_v x_v + c = 0.
#[derive(Default)]
struct Eliminator {
    pivots: BTreeMap<u32, (BTreeMap<u32, Rational>, Rational)>,
}

impl Eliminator {
    /// Returns false when the row reduces to a nonzero constant.
    fn insert(&mut self, mut row: BTreeMap<u32, Rational>, mut cst: Rational) -> bool {
        let hits: Vec<u32> = row.keys().filter(|v| self.pivots.contains_key(v)).copied().collect();
        for v in hits {
            let f = match row.get(&v) {
                Some(f) => f.clone(),
                None => continue,
            };
            let (prow, pc) = &self.pivots[&v];
            for (w, c) in prow {
                let e = row.entry(*w).or_insert_with(Rational::zero);
                *e -= &f * c;
                if e.is_zero() {
                    row.remove(w);
                }
            }
            cst -= &f * pc;
        }
        let Some((&p, pv)) = row.iter().next() else {
            return cst.is_zero();
        };
        let inv = pv.recip();
        for c in row.values_mut() {
            *c *= &inv;
        }
        cst *= &inv;
        for (prow, pc) in self.pivots.values_mut() {
            if let Some(f) = prow.get(&p).cloned() {
                for (w, c) in &row {
                    let e = prow.entry(*w).or_insert_with(Rational::zero);
                    *e -= &f * c;
                    if e.is_zero() {
                        prow.remove(w);
                    }
                }
                *pc -= &f * &cst;
            }
        }
        self.pivots.insert(p, (row, cst));
        true
    }

    /// Unknowns whose row has no free column.
    fn determined(&self) -> Vec<(u32, Rational)> {
        self.pivots
            .iter()
            .filter(|(_, (row, _))| row.len() == 1)
            .map(|(&v, (_, c))| (v, -c.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn eliminator_solves_and_detects() {
        let mut e = Eliminator::default();
        let row = |pairs: &[(u32, i64)]| pairs.iter().map(|&(v, c)| (v, int(c))).collect::<BTreeMap<_, _>>();
        assert!(e.insert(row(&[(0, 1), (1, 1)]), int(-3)));
        assert!(e.insert(row(&[(0, 1), (1, -1)]), int(-1)));
        let mut d = e.determined();
        d.sort();
        assert_eq!(d, vec![(0, int(2)), (1, int(1))]);
        assert!(!e.insert(row(&[(0, 2), (1, 2)]), int(0)));
        let mut f = Eliminator::default();
        assert!(f.insert(row(&[(0, 2), (1, 1)]), rat(1, 2)));
        assert!(f.determined().is_empty());
    }
}
