use num_traits::Zero;
use proptest::prelude::*;

use cusp_frobenius::algebra::{int, Monomial, Polynomial, Rational, Var};
use cusp_frobenius::cusp::{FlatIndex, Triplet};
use cusp_frobenius::series::{FlatMonomial, FlatSeries, QPoly};
use cusp_frobenius::weyl::cartan_matrix;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0i32..4, 0i32..4, 0i32..4), rational()), 0..6).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for ((a, b, c), v) in terms {
            p.add_term(Monomial::x([a, b, c]), v);
        }
        p
    })
}

fn triplet() -> impl Strategy<Value = Triplet> {
    (1u32..=6, 1u32..=6, 1u32..=9).prop_map(|(a, b, c)| Triplet::sorted([a, b, c]).unwrap().0)
}

const A: [u32; 3] = [2, 2, 3];
const K: u32 = 2;
const D: u32 = 6;

fn flat_series() -> impl Strategy<Value = FlatSeries> {
    let a = Triplet::new(A[0], A[1], A[2]).unwrap();
    let n = a.arm_count();
    prop::collection::vec((0u32..3, prop::collection::vec(0u32..3, n), 0u32..=K, rational()), 0..6).prop_map(move |terms| {
        let mut s = FlatSeries::new(a, K, D);
        for (t1, arms, q, c) in terms {
            let m = FlatMonomial { t1, arms, q, tmu: 0 };
            if s.within(&m) {
                s.add_term(m, c);
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn ring_axioms(f in polynomial(), g in polynomial(), h in polynomial()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn leibniz_rule(f in polynomial(), g in polynomial(), i in 1u8..=3) {
        let v = Var::X(i);
        prop_assert_eq!((&f * &g).diff(v), &(&f.diff(v) * &g) + &(&f * &g.diff(v)));
    }

    #[test]
    fn text_round_trip(f in polynomial()) {
        prop_assert_eq!(Polynomial::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn q_series_inverse(c in prop::collection::vec(rational(), 1..5)) {
        prop_assume!(!c[0].is_zero());
        let prec = 4;
        let mut p = QPoly::zero(prec);
        for (k, v) in c.iter().enumerate() {
            p.add_assign_ref(&QPoly::monomial(v.clone(), k as u32, prec));
        }
        let inv = p.inverse().unwrap();
        prop_assert_eq!(&p * &inv, QPoly::one(prec));
    }

    #[test]
    fn partial_derivatives_commute(f in flat_series(), x in 0usize..5, y in 0usize..5) {
        let idx = f.triplet().flat_indices();
        let (x, y) = (idx[x % idx.len()], idx[y % idx.len()]);
        prop_assert_eq!(f.diff(x).diff(y), f.diff(y).diff(x));
    }

    #[test]
    fn euler_field_is_a_derivation(f in flat_series(), g in flat_series()) {
        let lhs = f.mul(&g).euler_apply();
        let rhs = f.euler_apply().mul(&g).add(&f.mul(&g.euler_apply()));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn euler_degree_is_additive(f in flat_series(), g in flat_series()) {
        let a = f.triplet();
        for (m, _) in f.terms() {
            for (n, _) in g.terms() {
                prop_assert_eq!(m.mul(n).euler_degree(a), m.euler_degree(a) + n.euler_degree(a));
            }
        }
    }

    #[test]
    fn reflections_are_isometric_involutions(a in triplet(), seed in prop::collection::vec(rational(), 40), i in 0usize..40) {
        let c = cartan_matrix(a);
        let n = c.size();
        let i = i % n;
        // n <= 19 for these triplets.
        let (u, v) = (&seed[..n], &seed[20..20 + n]);
        let ru = c.simple_reflection(i, u).unwrap();
        let rv = c.simple_reflection(i, v).unwrap();
        prop_assert_eq!(c.form(&ru, &rv), c.form(u, v));
        prop_assert_eq!(c.simple_reflection(i, &ru).unwrap(), u.to_vec());
    }

    #[test]
    fn mu_row_scaling_constants(a in triplet()) {
        for ix in a.flat_indices() {
            if let FlatIndex::Arm(i, j) = ix {
                let d = cusp_frobenius::intersection::degree_constant(a, ix).unwrap();
                prop_assert_eq!(d, Rational::new(((a.arm(i) - j as u32) as i64).into(), (a.arm(i) as i64).into()));
            }
        }
        prop_assert_eq!(cusp_frobenius::intersection::degree_constant(a, FlatIndex::Unit), Some(int(1)));
    }
}
