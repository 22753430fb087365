use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Variable ids. The derived order is the global variable order
/// x1 < x2 < x3 < s_1 < s_{1,1} < ... < s_mu.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(u8),
    SUnit,
    SArm(u8, u8),
    SMu,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::SUnit => write!(f, "s_1"),
            Var::SArm(i, j) => write!(f, "s_{i}_{j}"),
            Var::SMu => write!(f, "s_mu"),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("unknown variable {s:?}"));
        if let Some(rest) = s.strip_prefix('x') {
            let i: u8 = rest.parse().map_err(|_| bad())?;
            return if (1..=3).contains(&i) { Ok(Var::X(i)) } else { Err(bad()) };
        }
        match s {
            "s_1" => return Ok(Var::SUnit),
            "s_mu" => return Ok(Var::SMu),
            _ => {}
        }
        let rest = s.strip_prefix("s_").ok_or_else(bad)?;
        let (i, j) = rest.split_once('_').ok_or_else(bad)?;
        let i: u8 = i.parse().map_err(|_| bad())?;
        let j: u8 = j.parse().map_err(|_| bad())?;
        if (1..=3).contains(&i) && j >= 1 {
            Ok(Var::SArm(i, j))
        } else {
            Err(bad())
        }
    }
}

/// Sparse exponent vector, sorted by variable, with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exps<I: IntoIterator<Item = (Var, i32)>>(exps: I) -> Self {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in exps {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// x1^e1 x2^e2 x3^e3.
    pub fn x(exps: [i32; 3]) -> Self {
        Self::from_exps((0..3).map(|i| (Var::X(i as u8 + 1), exps[i])))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&(_, e)| e < 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let a = self.0.get(i);
            let b = other.0.get(j);
            match (a, b) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    if ea + eb != 0 {
                        out.push((va, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    out.push((va, ea));
                    i += 1;
                }
                (Some(&(va, ea)), None) => {
                    out.push((va, ea));
                    i += 1;
                }
                (_, Some(&(vb, eb))) => {
                    out.push((vb, eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n as i32)).collect())
    }

    /// True when `self` divides `other` among ordinary monomials.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exp(v) >= e)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let vars: std::collections::BTreeSet<Var> = self.vars().chain(other.vars()).collect();
        Monomial::from_exps(vars.into_iter().map(|v| (v, self.exp(v).max(other.exp(v)))))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.vars().all(|v| other.exp(v) == 0)
    }

    /// Removes `v`, returning its exponent.
    pub fn split_off(&self, v: Var) -> (i32, Monomial) {
        let e = self.exp(v);
        (e, Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect()))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// smallest variable is the most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.0.get(i);
            let b = other.0.get(j);
            let (ea, eb) = match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (ea, eb)
                    }
                    Ordering::Less => {
                        i += 1;
                        (ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (0, eb)
                    }
                },
                (Some(&(_, ea)), None) => {
                    i += 1;
                    (ea, 0)
                }
                (None, Some(&(_, eb))) => {
                    j += 1;
                    (0, eb)
                }
            };
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl std::str::FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Monomial> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut exps = Vec::new();
        for factor in s.split('*') {
            let (v, e) = match factor.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            exps.push((v.trim().parse::<Var>()?, e));
        }
        Ok(Monomial::from_exps(exps))
    }
}

/// Exact multivariate polynomial over the rationals. Negative exponents are
/// only admitted when the polynomial is flagged as Laurent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
    laurent: bool,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn laurent_zero() -> Self {
        Polynomial { terms: BTreeMap::new(), laurent: true }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    /// A single term. Panics on negative exponents; use [`Polynomial::laurent_term`].
    pub fn term(m: Monomial, c: Rational) -> Self {
        assert!(!m.has_negative(), "negative exponent in ordinary polynomial");
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn laurent_term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::laurent_zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I, laurent: bool) -> Result<Self> {
        let mut p = Polynomial { terms: BTreeMap::new(), laurent };
        for (m, c) in terms {
            if !laurent && m.has_negative() {
                return Err(Error::NegativeExponent);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    /// Marks the polynomial as Laurent-capable.
    pub fn into_laurent(mut self) -> Self {
        self.laurent = true;
        self
    }

    /// Drops the Laurent flag, failing if a negative exponent remains.
    pub fn into_ordinary(mut self) -> Result<Self> {
        if self.terms.keys().any(Monomial::has_negative) {
            return Err(Error::NegativeExponent);
        }
        self.laurent = false;
        Ok(self)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.laurent || !m.has_negative());
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest term in the global order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
            laurent: self.laurent,
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent || m.has_negative() };
        if c.is_zero() {
            return out;
        }
        for (n, d) in &self.terms {
            out.terms.insert(n.mul(m), d * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        acc.add_term(Monomial::one(), Rational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff(&self, v: Var) -> Self {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e != 0 {
                let dm = m.mul(&Monomial::from_exps([(v, -1)]));
                out.add_term(dm, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Partial evaluation; unassigned variables stay symbolic.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Polynomial> {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.exps() {
                match assignment.get(&v) {
                    Some(val) => {
                        if val.is_zero() {
                            if e < 0 {
                                return Err(Error::LaurentPole);
                            }
                            coef = Rational::zero();
                        } else {
                            coef *= num_traits::pow::Pow::pow(val, e);
                        }
                    }
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coef);
        }
        Ok(out)
    }

    /// Full evaluation to a rational; every variable must be assigned.
    pub fn eval_rational(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let p = self.eval(assignment)?;
        if p.terms.keys().any(|m| !m.is_one()) {
            return Err(Error::Parse("unassigned variable in full evaluation".into()));
        }
        Ok(p.coeff(&Monomial::one()))
    }

    /// Coefficient of the all-zero exponent vector.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Coefficient of exponent zero in each of `vars`, as a polynomial in the rest.
    pub fn constant_term_in(&self, vars: &[Var]) -> Polynomial {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.exp(v) == 0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Canonical text: terms in decreasing monomial order joined by ` + `,
    /// each written `c*m` (or `c` for the constant term).
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.is_one() {
                    fmt_rational(c)
                } else {
                    format!("{}*{}", fmt_rational(c), m)
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses the canonical text form. Laurent exponents are accepted and set
    /// the Laurent flag.
    pub fn parse(s: &str) -> Result<Polynomial> {
        let s = s.trim();
        let mut p = Polynomial::laurent_zero();
        if s == "0" {
            return Ok(Polynomial::zero());
        }
        for part in s.split(" + ") {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let (c, m) = match part.split_once('*') {
                Some((c, m)) => (parse_rational(c)?, m.parse::<Monomial>()?),
                None => match parse_rational(part) {
                    Ok(c) => (c, Monomial::one()),
                    Err(_) => (Rational::one(), part.parse::<Monomial>()?),
                },
            };
            p.add_term(m, c);
        }
        if p.terms.keys().any(Monomial::has_negative) {
            Ok(p)
        } else {
            p.into_ordinary()
        }
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.laurent |= rhs.laurent;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.laurent |= rhs.laurent;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.map_coefficients(|c| -c)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial { terms: BTreeMap::new(), laurent: self.laurent || rhs.laurent };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn x(i: u8) -> Polynomial {
        Polynomial::var(Var::X(i))
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(1) + &x(2)) * &(&x(1) - &x(2));
        let expected = &x(1).pow(2) - &x(2).pow(2);
        assert_eq!(p, expected);
        assert_eq!(&p * &Polynomial::one(), p);
    }

    #[test]
    fn monomial_product() {
        let m = &(&x(1) * &x(2)) * &x(3);
        assert_eq!(&m * &m, Polynomial::term(Monomial::x([2, 2, 2]), int(1)));
    }

    #[test]
    fn derivatives() {
        assert_eq!(x(1).pow(3).diff(Var::X(1)), Polynomial::term(Monomial::x([2, 0, 0]), int(3)));
        assert!(x(2).pow(5).diff(Var::X(1)).is_zero());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::x([1, 0, 0]);
        let b = Monomial::x([0, 1, 0]);
        let c = Monomial::x([0, 0, 2]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::x([1, 1, 0]) > Monomial::x([0, 2, 0]));
        assert!(Monomial::var(Var::SUnit) > Monomial::var(Var::SMu));
        assert!(Monomial::var(Var::X(3)) > Monomial::var(Var::SMu));
    }

    #[test]
    fn evaluation_and_pole() {
        let mut a = BTreeMap::new();
        a.insert(Var::X(1), rat(3, 2));
        assert_eq!(x(1).pow(2).eval_rational(&a).unwrap(), rat(9, 4));

        let p = Polynomial::laurent_term(
            Monomial::from_exps([(Var::X(1), 1), (Var::X(2), 1), (Var::X(3), 1), (Var::SMu, -1)]),
            int(1),
        );
        let mut s = BTreeMap::new();
        s.insert(Var::SMu, int(0));
        assert_eq!(p.eval(&s), Err(Error::LaurentPole));
    }

    #[test]
    fn laurent_constant_terms() {
        let xyz = Monomial::x([1, 1, 1]);
        let p = Polynomial::laurent_term(xyz.inverse(), int(1)) * Polynomial::term(xyz, int(1));
        assert_eq!(p.constant_term(), int(1));
        let q = Polynomial::laurent_term(Monomial::x([-1, 1, 0]), int(1));
        assert_eq!(q.constant_term(), int(0));
    }

    #[test]
    fn ordinary_rejects_negative() {
        let r = Polynomial::from_terms([(Monomial::x([-1, 0, 0]), int(1))], false);
        assert_eq!(r, Err(Error::NegativeExponent));
    }

    #[test]
    fn text_round_trip() {
        let p = Polynomial::from_terms(
            [
                (Monomial::x([2, 0, 0]), rat(-3, 2)),
                (Monomial::from_exps([(Var::SArm(2, 1), 1), (Var::X(2), 1)]), int(4)),
                (Monomial::one(), rat(1, 7)),
            ],
            false,
        )
        .unwrap();
        let text = p.to_text();
        assert_eq!(text, "-3/2*x1^2 + 4*x2*s_2_1 + 1/7");
        assert_eq!(Polynomial::parse(&text).unwrap(), p);
        let l = Polynomial::parse("-1*x1*x2*x3*s_mu^-1").unwrap();
        assert!(l.is_laurent());
    }
}
