//! Fast invariant checks run by `sparsebound selftest`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classifiers::{make_grid, Classifier, ClassifierId, ColumnStats};
use crate::datagen::{gen_dataset, gen_pattern, Hypothesis, KChoice};
use crate::model::{phi, ModelParams};
use crate::noise::{NoiseKind, NoiseModel};
use crate::oracle::lr_coordinate;
use crate::risk::{confidence_interval, estimate_risk, with_threads};
use crate::rng::seeded;
use crate::special::norm_sf;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn boundary() -> Check {
    let at = phi(0.75).unwrap();
    let left = phi(0.75 - 1e-13).unwrap();
    let mut increasing = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 501..1000 {
        let v = phi(i as f64 / 1000.0).unwrap();
        increasing &= v > prev;
        prev = v;
    }
    let ok = (at - FRAC_1_SQRT_2).abs() < 1e-12 && (left - at).abs() < 1e-12 && increasing;
    check("boundary", ok, format!("phi(0.75) = {at:.17}"))
}

fn affinity() -> Check {
    let mut worst: f64 = 0.0;
    let noise = NoiseModel::gaussian(1.0);
    for a in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let q = noise.chi2_affinity_quadrature(a).unwrap_or(f64::NAN);
        worst = worst.max(((q - (a * a).exp()) / (a * a).exp()).abs());
    }
    check("gaussian affinity", worst < 1e-8, format!("max relative error {worst:.2e}"))
}

fn tail() -> Check {
    let v = norm_sf(10.0);
    let ok = ((v - 7.619853024160527e-24) / v).abs() < 1e-12;
    check("normal tail", ok, format!("P(N > 10) = {v:e}"))
}

/// Number of decision mismatches over `cases` randomized instances.
///
/// Each case draws a model, a dataset, a coordinate permutation and a
/// power-of-two scale `lambda` (so scaling is exact in floating point). For
/// every rule it compares the decision on the original data with the
/// decision after permuting coordinates and after scaling: known-variance
/// rules see `sigma` scaled too, unknown-variance rules do not.
pub fn symmetry_mismatches(cases: usize, seed: u64) -> usize {
    let mut rng = seeded(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let d = rng.random_range(16..=512);
        let m = rng.random_range(1..=8);
        let beta = rng.random_range(0.3..0.9);
        let x1 = rng.random_range(0.5..3.0);
        let noise = [NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::Uniform][rng.random_range(0..3)];
        let p = ModelParams::from_x1(d, m, beta, x1).with_noise(noise).with_counts(0.5, 2.0);
        let lambda = 2f64.powi(rng.random_range(-4..=4));
        let h = if rng.random_bool(0.5) { Hypothesis::H0 } else { Hypothesis::H1 };
        let grid = make_grid(&p).expect("d >= 16");
        let pattern = gen_pattern(&p, KChoice::Random, &mut rng).expect("nonempty count range");
        let data = gen_dataset(&p, &pattern, h, &mut rng).expect("matching pattern");
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut rng);
        let base = ColumnStats::from_dataset(&data);
        let moved = ColumnStats::from_dataset(&data.permuted(&perm));
        let scaled = ColumnStats::from_dataset(&data.scaled(lambda));
        let p_scaled = p.clone().with_sigma(p.sigma * lambda);
        for id in ClassifierId::ALL {
            let known = Classifier::known(id);
            let d0 = known.decide(&base, &p, &grid);
            if d0 != known.decide(&moved, &p, &grid) || d0 != known.decide(&scaled, &p_scaled, &grid) {
                failures += 1;
            }
            let unknown = Classifier::unknown(id);
            let u0 = unknown.decide(&base, &p, &grid);
            if u0 != unknown.decide(&moved, &p, &grid) || u0 != unknown.decide(&scaled, &p, &grid) {
                failures += 1;
            }
        }
    }
    failures
}

fn symmetries() -> Check {
    let failures = symmetry_mismatches(10, 17);
    check("permutation and scale", failures == 0, format!("{failures} mismatches"))
}

fn oracle_coordinate() -> Check {
    let p = ModelParams::new(100, 1, 0.5, 1.0);
    let v = lr_coordinate(&[0.0], 0.0, &p).map(f64::exp).unwrap_or(f64::NAN);
    let expected = (0.9 + 0.1 * (-1f64).exp()) / (0.9 + 0.1 * (-0.5f64).exp());
    check("oracle coordinate", (v - expected).abs() < 1e-14, format!("L_k = {v:.6}"))
}

fn wilson() -> Check {
    let (lo, hi) = confidence_interval(0, 100).unwrap();
    check("wilson interval", lo == 0.0 && (hi - 0.0370).abs() < 5e-5, format!("[{lo:.4}, {hi:.4}]"))
}

fn thread_independence() -> Check {
    let p = ModelParams::from_x1(512, 1, 0.6, 1.5).with_noise(NoiseKind::Laplace);
    let grid = make_grid(&p).unwrap();
    let c = Classifier::known(ClassifierId::Max);
    let one = with_threads(1, || estimate_risk(c, &p, &grid, KChoice::Low, 64, 3));
    let many = with_threads(4, || estimate_risk(c, &p, &grid, KChoice::Low, 64, 3));
    check("thread independence", one.is_ok() && one == many, String::new())
}

pub fn run_all() -> Vec<Check> {
    vec![
        boundary(),
        affinity(),
        tail(),
        symmetries(),
        oracle_coordinate(),
        wilson(),
        thread_independence(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
