use rand::Rng;
use sparsebound::classifiers::{make_grid, Classifier, ClassifierId, Decision, GridOverrides};
use sparsebound::datagen::KChoice;
use sparsebound::model::ModelParams;
use sparsebound::risk::{confidence_interval, estimate_risk, estimate_rule, sweep, with_threads, SweepResult, SweepSpec};

#[test]
fn stub_estimates_cover_true_rate() {
    let p = ModelParams::new(16, 1, 0.5, 1.0);
    let q = 0.3;
    let mut covered = 0;
    for trial in 0..100 {
        let est = estimate_rule(&p, KChoice::Low, 200, 1000 + trial, |_, rng| {
            Ok(if rng.random_bool(q) { Decision::AllocY } else { Decision::AllocX })
        })
        .unwrap();
        let (lo, hi) = confidence_interval(est.h0.alloc_y, est.h0.n).unwrap();
        if lo <= q && q <= hi {
            covered += 1;
        }
    }
    assert!(covered >= 93, "covered {covered}/100");
}

#[test]
fn fair_coin_stub() {
    let p = ModelParams::new(16, 1, 0.5, 1.0);
    let est = estimate_rule(&p, KChoice::High, 10_000, 5, |_, rng| {
        Ok(if rng.random_bool(0.5) { Decision::AllocY } else { Decision::AllocX })
    })
    .unwrap();
    assert!((est.r0 - 0.5).abs() <= est.r0_ci, "{est:?}");
    assert!((est.r1 - 0.5).abs() <= est.r1_ci, "{est:?}");
}

#[test]
fn linear_rule_in_moderate_sparsity() {
    let p = ModelParams::new(10_000, 1, 0.25, 0.33);
    let grid = make_grid(&p).unwrap();
    for k in [KChoice::Low, KChoice::High] {
        let est = estimate_risk(Classifier::known(ClassifierId::Lin), &p, &grid, k, 400, 9).unwrap();
        assert!(est.max_risk <= 0.2, "{k:?}: {est:?}");
    }
}

#[test]
fn stored_fields_recompute_exactly() {
    let p = ModelParams::from_x1(256, 1, 0.6, 1.5);
    let grid = make_grid(&p).unwrap();
    let est = estimate_risk(Classifier::known(ClassifierId::Pre), &p, &grid, KChoice::Low, 300, 4).unwrap();
    assert_eq!(est.max_risk, est.r0.max(est.r1));
    for pi in [0.1, 0.5, 0.9] {
        assert_eq!(est.bayes_risk(pi), pi * est.r0 + (1.0 - pi) * est.r1);
    }
}

fn small_spec() -> SweepSpec {
    SweepSpec {
        base: ModelParams::new(512, 2, 0.6, 1.0),
        betas: vec![0.55, 0.7],
        amplitudes: vec![0.8, 1.6],
        ds: vec![512],
        classifiers: vec![Classifier::known(ClassifierId::Max), Classifier::unknown(ClassifierId::StarM)],
        grid: GridOverrides::default(),
        n_reps: 40,
        seed: 77,
        record_time: false,
    }
}

#[test]
fn sweep_is_byte_identical_across_thread_counts() {
    let spec = small_spec();
    let one = with_threads(1, || sweep(&spec)).unwrap().to_csv_string().unwrap();
    let eight = with_threads(8, || sweep(&spec)).unwrap().to_csv_string().unwrap();
    assert_eq!(one, eight);
    assert_eq!(one.lines().count(), 1 + 2 * 2 * 2 * 2);
}

#[test]
fn csv_round_trip_is_exact() {
    let result = sweep(&small_spec()).unwrap();
    let text = result.to_csv_string().unwrap();
    let back = SweepResult::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back, result);
    assert_eq!(back.to_csv_string().unwrap(), text);
}
