use num_traits::Zero;

use super::cartan::{CartanData, CorootVector};
use crate::algebra::{int, Rational};
use crate::error::{Error, Result};

/// h ↦ w(h) + τ + m ω_1^∨, x_mu ↦ x_mu + m, with w a word in the simple
/// reflections and τ in the coroot lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedElement {
    pub word: Vec<usize>,
    pub translation: Vec<i64>,
    pub shift: i64,
}

impl ExtendedElement {
    pub fn identity(n: usize) -> Self {
        ExtendedElement { word: Vec::new(), translation: vec![0; n], shift: 0 }
    }

    pub fn reflection(n: usize, i: usize) -> Self {
        ExtendedElement { word: vec![i], translation: vec![0; n], shift: 0 }
    }

    pub fn translation(tau: Vec<i64>) -> Self {
        ExtendedElement { word: Vec::new(), translation: tau, shift: 0 }
    }

    pub fn shift(n: usize, m: i64) -> Self {
        ExtendedElement { word: Vec::new(), translation: vec![0; n], shift: m }
    }
}

/// The extended affine Weyl group of a nondegenerate diagram.
pub struct ExtendedWeyl<'a> {
    cartan: &'a CartanData,
    omega1: CorootVector,
}

impl<'a> ExtendedWeyl<'a> {
    pub fn new(cartan: &'a CartanData) -> Result<Self> {
        let omega1 = cartan.fundamental_coweights()?.swap_remove(0);
        Ok(ExtendedWeyl { cartan, omega1 })
    }

    pub fn omega1(&self) -> &CorootVector {
        &self.omega1
    }

    pub fn act(&self, e: &ExtendedElement, h: &[Rational], x_mu: &Rational) -> Result<(CorootVector, Rational)> {
        let n = self.cartan.size();
        if e.translation.len() != n || h.len() != n {
            return Err(Error::InvalidVertex(e.translation.len().max(h.len())));
        }
        let mut v = self.cartan.apply_word(&e.word, h)?;
        let m = int(e.shift);
        for ((vi, &t), w) in v.iter_mut().zip(&e.translation).zip(&self.omega1) {
            *vi += int(t) + &m * w;
        }
        Ok((v, x_mu + m))
    }

    /// e1·e2, acting as e1 after e2:
    /// (w1 w2, w1 τ2 + τ1 + m2 (w1 ω_1 − ω_1), m1 + m2).
    pub fn compose(&self, e1: &ExtendedElement, e2: &ExtendedElement) -> Result<ExtendedElement> {
        let tau2: Vec<Rational> = e2.translation.iter().map(|&t| int(t)).collect();
        let w1_tau2 = self.cartan.apply_word(&e1.word, &tau2)?;
        let w1_omega = self.cartan.apply_word(&e1.word, &self.omega1)?;
        let m2 = int(e2.shift);
        let mut translation = Vec::with_capacity(tau2.len());
        for i in 0..tau2.len() {
            let t = &w1_tau2[i] + int(e1.translation[i]) + &m2 * (&w1_omega[i] - &self.omega1[i]);
            // Reflections move ω_1 by coroots, so this stays integral.
            debug_assert!(t.is_integer());
            translation.push(i64::try_from(t.to_integer()).map_err(|_| Error::ResourceLimit(i))?);
        }
        let mut word = e1.word.clone();
        word.extend(&e2.word);
        Ok(ExtendedElement { word, translation, shift: e1.shift + e2.shift })
    }

    /// Equal actions at a fixed generic point plus equal translation data.
    pub fn same_element(&self, e1: &ExtendedElement, e2: &ExtendedElement) -> Result<bool> {
        let n = self.cartan.size();
        let generic: Vec<Rational> = (0..n).map(|i| Rational::new((2 * i as i64 + 3).into(), (i as i64 + 7).into())).collect();
        let x = Rational::zero();
        Ok(e1.translation == e2.translation && e1.shift == e2.shift && self.act(e1, &generic, &x)? == self.act(e2, &generic, &x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp::Triplet;
    use crate::weyl::cartan_matrix;

    #[test]
    fn pure_shift_moves_by_omega1() {
        let c = cartan_matrix(Triplet::new(2, 3, 7).unwrap());
        let g = ExtendedWeyl::new(&c).unwrap();
        let zero = vec![Rational::zero(); c.size()];
        let (h, x) = g.act(&ExtendedElement::shift(c.size(), 1), &zero, &int(5)).unwrap();
        assert_eq!(&h, g.omega1());
        assert_eq!(x, int(6));
        let id = ExtendedElement::identity(c.size());
        let p: Vec<Rational> = (0..c.size()).map(|i| int(i as i64)).collect();
        assert_eq!(g.act(&id, &p, &int(1)).unwrap(), (p, int(1)));
    }

    #[test]
    fn composition_matches_action() {
        let c = cartan_matrix(Triplet::new(2, 2, 3).unwrap());
        let g = ExtendedWeyl::new(&c).unwrap();
        let n = c.size();
        let e1 = ExtendedElement { word: vec![0, 2, 1], translation: vec![1, 0, -2, 0, 3], shift: 2 };
        let e2 = ExtendedElement { word: vec![3, 0], translation: vec![0, 1, 1, -1, 0], shift: -1 };
        let e12 = g.compose(&e1, &e2).unwrap();
        let p: Vec<Rational> = (0..n).map(|i| Rational::new((i as i64 - 2).into(), 3.into())).collect();
        let (h2, x2) = g.act(&e2, &p, &int(0)).unwrap();
        assert_eq!(g.act(&e1, &h2, &x2).unwrap(), g.act(&e12, &p, &int(0)).unwrap());
        assert!(g.same_element(&e12, &e12.clone()).unwrap());
    }
}
