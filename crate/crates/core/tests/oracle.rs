use sparsebound::classifiers::{make_grid, Classifier, ClassifierId};
use sparsebound::model::{phi, ModelParams};
use sparsebound::oracle::{compare_bayes, dd_index, oracle_bayes_risk, second_moment_bound, second_moment_mc};

#[test]
fn oracle_dominates_classifiers() {
    let pi = 0.5;
    for a in [0.5, 1.0, 2.0] {
        let p = ModelParams::new(64, 1, 0.6, a);
        let grid = make_grid(&p).unwrap();
        let rules: Vec<Classifier> = [ClassifierId::Lin, ClassifierId::Max, ClassifierId::StarM, ClassifierId::Adaptive]
            .into_iter()
            .map(Classifier::known)
            .collect();
        let rows = compare_bayes(&p, pi, &rules, Some(&grid), 2000, 41).unwrap();
        let oracle = rows[0].estimate;
        for row in &rows[1..] {
            let se = (oracle.bayes_se(pi).powi(2) + row.estimate.bayes_se(pi).powi(2)).sqrt();
            assert!(
                oracle.bayes_risk(pi) <= row.estimate.bayes_risk(pi) + 2.0 * se,
                "a={a} {}: oracle {} vs {}",
                row.label,
                oracle.bayes_risk(pi),
                row.estimate.bayes_risk(pi)
            );
        }
    }
}

#[test]
fn small_index_means_near_coin_flip() {
    // 32 e^{a^2} (e^{a^2} - 1) = 0.01 near a = 0.0177.
    let p = ModelParams::new(1024, 1, 0.25, 0.0175);
    assert!(dd_index(&p).unwrap() <= 0.01);
    let r = oracle_bayes_risk(&p, 0.5, 3000, 2).unwrap();
    assert!(r.bayes_risk(0.5) >= 0.45, "{}", r.bayes_risk(0.5));
}

#[test]
fn deep_below_boundary_is_hard() {
    let beta = 0.8;
    let p = ModelParams::from_x1(1 << 12, 1, beta, phi(beta).unwrap() - 0.5);
    let r = oracle_bayes_risk(&p, 0.5, 4000, 3).unwrap();
    assert!(r.bayes_risk(0.5) >= 0.40, "{}", r.bayes_risk(0.5));
}

#[test]
fn second_moment_respects_bound_on_small_grid() {
    for d in [32usize, 64] {
        for m in [1usize, 2] {
            for a in [0.25, 0.5] {
                let p = ModelParams::new(d, m, 0.6, a);
                let mc = second_moment_mc(&p, 20_000, 7).unwrap();
                let bound = second_moment_bound(&p).unwrap();
                assert!(mc.mean <= 1.05 * bound + 1.96 * mc.std_err, "d={d} m={m} a={a}: {mc:?} > {bound}");
            }
        }
    }
}
