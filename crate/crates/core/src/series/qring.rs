use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::algebra::{fmt_rational, Rational};

/// Element of Q[q]/(q^{prec+1}); with prec = 0 this is just Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero(prec: u32) -> Self {
        QPoly { coeffs: vec![Rational::zero(); prec as usize + 1] }
    }

    pub fn constant(c: Rational, prec: u32) -> Self {
        let mut p = Self::zero(prec);
        p.coeffs[0] = c;
        p
    }

    pub fn one(prec: u32) -> Self {
        Self::constant(Rational::one(), prec)
    }

    /// c·q^k, or zero when k exceeds the precision.
    pub fn monomial(c: Rational, k: u32, prec: u32) -> Self {
        let mut p = Self::zero(prec);
        if k <= prec {
            p.coeffs[k as usize] = c;
        }
        p
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> &Rational {
        &self.coeffs[k as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn add_assign_ref(&mut self, other: &QPoly) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse when the constant coefficient is nonzero.
    pub fn inverse(&self) -> Option<QPoly> {
        if !self.is_unit() {
            return None;
        }
        let n = self.coeffs.len();
        let c0 = self.coeffs[0].recip();
        let mut inv = vec![Rational::zero(); n];
        inv[0] = c0.clone();
        for k in 1..n {
            let mut s = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &inv[k - j];
                }
            }
            inv[k] = -(s * &c0);
        }
        Some(QPoly { coeffs: inv })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_rational).collect()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly { coeffs: out }
    }
}
