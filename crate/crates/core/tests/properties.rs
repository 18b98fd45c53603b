use proptest::prelude::*;
use sparsebound::model::{derive_quantities, phi, phi1, phi2, regime, ModelParams, RegimeTag, Scenario};
use sparsebound::risk::{auc, confidence_interval};
use sparsebound::special::order_free_sum;

fn scenario() -> impl Strategy<Value = Scenario> {
    prop_oneof![Just(Scenario::A), Just(Scenario::B), Just(Scenario::C), Just(Scenario::D)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn x_orderings(d in 8usize..1_000_000, m in 1usize..10_000, beta in 0.01f64..0.99, a in 1e-4f64..10.0) {
        let q = derive_quantities(&ModelParams::new(d, m, beta, a).with_counts(0.5, 1.0)).unwrap();
        prop_assert!(q.x0 < q.x && q.x < q.x1, "{:?}", q);
    }

    #[test]
    fn joint_scale_invariance(d in 8usize..100_000, m in 1usize..500, beta in 0.01f64..0.99,
                              a in 1e-3f64..5.0, e in -10i32..10) {
        let lambda = 2f64.powi(e);
        let p = ModelParams::new(d, m, beta, a).with_counts(0.5, 1.0);
        let scaled = p.clone().with_sigma(lambda);
        let scaled = ModelParams { a_d: a * lambda, ..scaled };
        let q = derive_quantities(&p).unwrap();
        let r = derive_quantities(&scaled).unwrap();
        prop_assert_eq!(q.s, r.s);
        prop_assert_eq!(q.x, r.x);
        prop_assert_eq!(q.x0, r.x0);
        prop_assert_eq!(q.x1, r.x1);
        prop_assert_eq!(q.q_trivial, r.q_trivial);
    }

    #[test]
    fn boundary_is_increasing(b in 0.5001f64..0.9989, step in 1e-4f64..1e-3) {
        prop_assert!(phi(b + step).unwrap() > phi(b).unwrap());
        prop_assert!(phi1(b) <= phi2(b) + 1e-15);
    }

    #[test]
    fn regime_is_exhaustive(d in 8usize..1_000_000, m in 1usize..4096, beta in 0.01f64..0.99,
                            a in 1e-3f64..5.0, sc in scenario(), g in proptest::option::of(0.05f64..0.9)) {
        let p = ModelParams::new(d, m, beta, a).with_counts(0.5, 1.0).with_scenario(sc, g);
        let r = regime(&p).unwrap();
        let tags = [RegimeTag::ModerateSparse, RegimeTag::HighlySparse, RegimeTag::TrivialLarge, RegimeTag::ImpossiblySmall];
        prop_assert_eq!(tags.iter().filter(|t| **t == r.tag).count(), 1);
        prop_assert_eq!(r.boundary_side.is_none(), r.tag == RegimeTag::ModerateSparse);
    }

    #[test]
    fn wilson_contains_point_estimate(n in 1u64..5000, frac in 0.0f64..=1.0) {
        let s = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = confidence_interval(s, n).unwrap();
        let p = s as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-15 && p <= hi + 1e-15 && hi <= 1.0);
    }

    #[test]
    fn order_free_sum_is_permutation_invariant(mut v in proptest::collection::vec(-1e12f64..1e12, 0..200), seed in any::<u64>()) {
        let a = order_free_sum(&mut v.clone());
        let n = v.len();
        if n > 1 {
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        prop_assert_eq!(a.to_bits(), order_free_sum(&mut v).to_bits());
    }

    #[test]
    fn auc_of_shifted_scores(v in proptest::collection::vec(-100.0f64..100.0, 1..50), shift in 201.0f64..300.0) {
        let alt: Vec<f64> = v.iter().map(|x| x + shift).collect();
        prop_assert_eq!(auc(&v, &alt), 1.0);
        prop_assert_eq!(auc(&alt, &v), 0.0);
        prop_assert_eq!(auc(&v, &v), 0.5);
    }
}

#[test]
fn boundary_pieces_meet_only_at_three_quarters() {
    for i in 501..1000 {
        let b = i as f64 / 1000.0;
        let (a, c) = (phi1(b), phi2(b));
        if i == 750 {
            assert!((a - c).abs() < 1e-15);
        } else {
            assert!(a < c, "beta={b}");
        }
    }
}
