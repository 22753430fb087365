use num_traits::{One, Signed};

use super::triplet::Triplet;
use crate::algebra::{int, Monomial, Polynomial, Rational, Var};

/// Coefficients c_n of Σ_n s_mu^n · CT[(N/(x1x2x3))^n], each a polynomial in
/// the deformation parameters (constant when none occur).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSeries {
    pub coefficients: Vec<Polynomial>,
}

impl PeriodSeries {
    pub fn is_identically_one(&self) -> bool {
        self.coefficients.iter().enumerate().all(|(n, c)| {
            if n == 0 {
                *c == Polynomial::one()
            } else {
                c.is_zero()
            }
        })
    }
}

/// Numerator of the expansion: Σ x_i^{a_i}, plus s_1 + Σ s_{i,j} x_i^j when χ > 0.
pub fn period_numerator(a: Triplet) -> Polynomial {
    let mut n = Polynomial::zero();
    for i in 1..=3u8 {
        n.add_term(Monomial::from_exps([(Var::X(i), a.arm(i) as i32)]), int(1));
    }
    if a.chi().is_positive() {
        n.add_term(Monomial::var(Var::SUnit), int(1));
        for (i, j) in a.arm_indices() {
            n.add_term(Monomial::from_exps([(Var::SArm(i, j), 1), (Var::X(i), j as i32)]), int(1));
        }
    }
    n
}

pub fn period_normalization(a: Triplet, order: u32) -> PeriodSeries {
    let xs = [Var::X(1), Var::X(2), Var::X(3)];
    let inv_xyz = Polynomial::laurent_term(Monomial::x([-1, -1, -1]), int(1));
    let ratio = &period_numerator(a) * &inv_xyz;
    let mut power = Polynomial::laurent_term(Monomial::one(), Rational::one());
    let mut coefficients = Vec::with_capacity(order as usize + 1);
    for n in 0..=order {
        if n > 0 {
            power = &power * &ratio;
        }
        let c = power.constant_term_in(&xs);
        coefficients.push(c.into_ordinary().expect("x-free terms have no negative exponents"));
    }
    PeriodSeries { coefficients }
}

/// Exponent assignment making the expansion monomial equal (x1x2x3)^n, if any.
///
/// For χ ≤ 0 the n factors are drawn from {x_i^{a_i}}: e_i ≥ 0, Σ e_i = n,
/// a_i e_i = n. For χ > 0 they are drawn from the deformed numerator: arm i
/// contributes parts x_i^j (1 ≤ j ≤ a_i) whose j-sum is n, and the total
/// number of non-constant factors is at most n.
pub fn matching_monomial(a: Triplet, n: u32) -> Option<Vec<Vec<u32>>> {
    if a.chi().is_positive() {
        let per_arm: Vec<Vec<Vec<u32>>> = (1..=3u8).map(|i| part_vectors(n, a.arm(i))).collect();
        for p1 in &per_arm[0] {
            for p2 in &per_arm[1] {
                for p3 in &per_arm[2] {
                    let used: u32 = [p1, p2, p3].iter().map(|p| p.iter().sum::<u32>()).sum();
                    if used <= n {
                        return Some(vec![p1.clone(), p2.clone(), p3.clone()]);
                    }
                }
            }
        }
        None
    } else {
        for e1 in 0..=n {
            for e2 in 0..=n - e1 {
                let e3 = n - e1 - e2;
                let e = [e1, e2, e3];
                if (0..3).all(|i| a.a()[i] * e[i] == n) {
                    return Some(vec![vec![e1], vec![e2], vec![e3]]);
                }
            }
        }
        None
    }
}

/// All multiplicity vectors (m_1..m_a) with Σ j·m_j = n.
fn part_vectors(n: u32, a: u32) -> Vec<Vec<u32>> {
    fn rec(j: u32, a: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j > a {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=left / j {
            cur.push(m);
            rec(j + 1, a, left - m * j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, a, n, &mut Vec::new(), &mut out);
    out
}

/// True iff no 1 ≤ n ≤ nmax admits a matching monomial.
pub fn monomial_obstruction_check(a: Triplet, nmax: u32) -> bool {
    (1..=nmax).all(|n| matching_monomial(a, n).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficient of (x1x2x3)^n in N^n, without Laurent arithmetic.
    fn direct_constant_term(a: Triplet, n: u32) -> Polynomial {
        let p = period_numerator(a).pow(n);
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let (e1, r) = m.split_off(Var::X(1));
            let (e2, r) = r.split_off(Var::X(2));
            let (e3, r) = r.split_off(Var::X(3));
            if [e1, e2, e3] == [n as i32; 3] {
                out.add_term(r, c.clone());
            }
        }
        out
    }

    fn t(a: u32, b: u32, c: u32) -> Triplet {
        Triplet::new(a, b, c).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert!(period_normalization(t(2, 3, 7), 6).is_identically_one());
        assert!(period_normalization(t(2, 2, 2), 4).is_identically_one());
        assert_eq!(period_normalization(t(2, 2, 2), 0).coefficients, vec![Polynomial::one()]);
    }

    #[test]
    fn vanishing_for_pure_numerator() {
        let xs = [Var::X(1), Var::X(2), Var::X(3)];
        let ratio = &Polynomial::parse("1*x1^2 + 1*x2^2 + 1*x3^2").unwrap()
            * &Polynomial::laurent_term(Monomial::x([-1, -1, -1]), int(1));
        for n in 1..=4 {
            assert!(ratio.pow(n).constant_term_in(&xs).is_zero());
        }
    }

    #[test]
    fn flat_triplet_is_not_normalized() {
        let s = period_normalization(t(3, 3, 3), 3);
        assert!(!s.is_identically_one());
        assert_eq!(s.coefficients[3].constant_term(), int(6));
    }

    #[test]
    fn obstruction_examples() {
        assert!(monomial_obstruction_check(t(2, 3, 7), 5));
        assert!(monomial_obstruction_check(t(2, 2, 2), 6));
        assert!(monomial_obstruction_check(t(1, 1, 1), 3));
        assert!(!monomial_obstruction_check(t(3, 3, 3), 3));
    }

    #[test]
    fn direct_route_agrees() {
        for a in [t(2, 3, 7), t(2, 2, 3), t(3, 3, 3)] {
            let s = period_normalization(a, 3);
            for n in 0..=3u32 {
                assert_eq!(s.coefficients[n as usize], direct_constant_term(a, n), "{a} n={n}");
            }
        }
    }
}
