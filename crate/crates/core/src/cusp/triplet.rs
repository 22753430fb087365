use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{rat, Rational};
use crate::error::{Error, Result};

/// A triplet `a1 <= a2 <= a3` of positive integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u32; 3]", into = "[u32; 3]")]
pub struct Triplet([u32; 3]);

impl Triplet {
    /// Requires positive entries in ascending order.
    pub fn new(a1: u32, a2: u32, a3: u32) -> Result<Self> {
        if a1 == 0 || a2 == 0 || a3 == 0 {
            return Err(Error::InvalidTriplet(format!("({a1},{a2},{a3}) has a zero entry")));
        }
        if !(a1 <= a2 && a2 <= a3) {
            return Err(Error::InvalidTriplet(format!("({a1},{a2},{a3}) is not ascending")));
        }
        Ok(Triplet([a1, a2, a3]))
    }

    /// Sorts the entries; the flag reports whether reordering happened.
    pub fn sorted(mut a: [u32; 3]) -> Result<(Self, bool)> {
        let original = a;
        a.sort_unstable();
        Ok((Self::new(a[0], a[1], a[2])?, a != original))
    }

    pub fn a(&self) -> [u32; 3] {
        self.0
    }

    /// Arm length parameter `a_i` for `i` in 1..=3.
    pub fn arm(&self, i: u8) -> u32 {
        self.0[i as usize - 1]
    }

    pub fn a_max(&self) -> u32 {
        self.0[2]
    }

    pub fn mu(&self) -> u32 {
        self.0.iter().sum::<u32>() - 1
    }

    pub fn chi(&self) -> Rational {
        self.0.iter().map(|&a| rat(1, a as i64)).sum::<Rational>() - rat(1, 1)
    }

    pub fn invariants(&self) -> (u32, Rational) {
        (self.mu(), self.chi())
    }

    pub fn has_degenerate_arm(&self) -> Option<usize> {
        self.0.iter().position(|&a| a == 1).map(|i| i + 1)
    }

    /// Arm indices (i,j), 1 <= j <= a_i - 1, in canonical order.
    pub fn arm_indices(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for i in 1..=3u8 {
            for j in 1..self.arm(i) {
                out.push((i, j as u8));
            }
        }
        out
    }

    pub fn arm_count(&self) -> usize {
        (self.mu() - 2) as usize
    }

    /// Position of (i,j) within [`Triplet::arm_indices`].
    pub fn arm_position(&self, i: u8, j: u8) -> usize {
        let before: u32 = (1..i).map(|k| self.arm(k) - 1).sum();
        (before + j as u32 - 1) as usize
    }

    pub fn flat_indices(&self) -> Vec<FlatIndex> {
        let mut out = vec![FlatIndex::Unit];
        out.extend(self.arm_indices().into_iter().map(|(i, j)| FlatIndex::Arm(i, j)));
        out.push(FlatIndex::Mu);
        out
    }

    /// Exponents 1, 1 + j/a_i, 2 in flat-index order.
    pub fn exponents(&self) -> Vec<Rational> {
        self.flat_indices()
            .into_iter()
            .map(|ix| match ix {
                FlatIndex::Unit => rat(1, 1),
                FlatIndex::Arm(i, j) => rat(1, 1) + rat(j as i64, self.arm(i) as i64),
                FlatIndex::Mu => rat(2, 1),
            })
            .collect()
    }

    /// Euler weight d with E t = d t: 1 for the unit, (a_i - j)/a_i on arms.
    /// The mu coordinate has none (E acts on it by a constant shift).
    pub fn degree_weight(&self, ix: FlatIndex) -> Option<Rational> {
        match ix {
            FlatIndex::Unit => Some(rat(1, 1)),
            FlatIndex::Arm(i, j) => {
                let a = self.arm(i) as i64;
                Some(rat(a - j as i64, a))
            }
            FlatIndex::Mu => None,
        }
    }

    /// Index paired with `ix` by the flat metric.
    pub fn partner(&self, ix: FlatIndex) -> FlatIndex {
        match ix {
            FlatIndex::Unit => FlatIndex::Mu,
            FlatIndex::Mu => FlatIndex::Unit,
            FlatIndex::Arm(i, j) => FlatIndex::Arm(i, self.arm(i) as u8 - j),
        }
    }

    /// Position of `ix` within [`Triplet::flat_indices`].
    pub fn flat_position(&self, ix: FlatIndex) -> usize {
        match ix {
            FlatIndex::Unit => 0,
            FlatIndex::Arm(i, j) => 1 + self.arm_position(i, j),
            FlatIndex::Mu => self.mu() as usize - 1,
        }
    }

    pub fn contains(&self, ix: FlatIndex) -> bool {
        match ix {
            FlatIndex::Arm(i, j) => (1..=3).contains(&i) && j >= 1 && (j as u32) < self.arm(i),
            _ => true,
        }
    }
}

impl TryFrom<[u32; 3]> for Triplet {
    type Error = Error;
    fn try_from(a: [u32; 3]) -> Result<Self> {
        Triplet::new(a[0], a[1], a[2])
    }
}

impl From<Triplet> for [u32; 3] {
    fn from(t: Triplet) -> [u32; 3] {
        t.0
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Flat coordinate labels: t_1, t_{i,j}, t_mu. The derived order is the
/// canonical one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlatIndex {
    Unit,
    Arm(u8, u8),
    Mu,
}

impl fmt::Display for FlatIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatIndex::Unit => write!(f, "1"),
            FlatIndex::Arm(i, j) => write!(f, "({i},{j})"),
            FlatIndex::Mu => write!(f, "mu"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn invariant_examples() {
        assert_eq!(Triplet::new(2, 3, 7).unwrap().invariants(), (11, rat(-1, 42)));
        assert_eq!(Triplet::new(2, 2, 2).unwrap().invariants(), (5, rat(1, 2)));
        assert_eq!(Triplet::new(1, 1, 1).unwrap().invariants(), (2, int(2)));
    }

    #[test]
    fn exponent_examples() {
        let e = Triplet::new(2, 2, 2).unwrap().exponents();
        assert_eq!(e, vec![int(1), rat(3, 2), rat(3, 2), rat(3, 2), int(2)]);
        let mut e = Triplet::new(2, 3, 5).unwrap().exponents();
        e.sort();
        let expected: Vec<Rational> = [(1, 1), (6, 5), (4, 3), (7, 5), (3, 2), (8, 5), (5, 3), (9, 5), (2, 1)]
            .iter()
            .map(|&(n, d)| rat(n, d))
            .collect();
        assert_eq!(e, expected);
        assert_eq!(Triplet::new(1, 1, 1).unwrap().exponents(), vec![int(1), int(2)]);
    }

    #[test]
    fn ordering_enforced() {
        assert!(Triplet::new(3, 2, 2).is_err());
        assert!(Triplet::new(0, 2, 2).is_err());
        let (t, moved) = Triplet::sorted([7, 2, 3]).unwrap();
        assert_eq!(t.a(), [2, 3, 7]);
        assert!(moved);
    }

    #[test]
    fn positions_are_consistent() {
        let t = Triplet::new(2, 3, 5).unwrap();
        for (p, ix) in t.flat_indices().into_iter().enumerate() {
            assert_eq!(t.flat_position(ix), p);
            assert_eq!(t.partner(t.partner(ix)), ix);
        }
        assert_eq!(t.flat_indices().len(), t.mu() as usize);
    }
}
