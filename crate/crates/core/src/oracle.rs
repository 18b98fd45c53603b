//! Bayes likelihood-ratio oracle under the Bernoulli prior.
//!
//! Coordinates are independently shifted with probability `p = d^-beta`.
//! Given training column `Y^k` and query `Z^k`, the coordinate likelihood
//! ratio of H1 against H0 is
//!
//! ```text
//! L_k = (1 - p + p L(Y^k) l(Z^k)) / (1 - p + p L(Y^k)),   L(Y^k) = prod_j l(Y_j^k)
//! ```
//!
//! with `l(t) = f(t - a_d) / f(t)`, and the full ratio is `prod_k L_k`.
//! Everything is evaluated in log space.

use serde::{Deserialize, Serialize};

use crate::classifiers::{col_stats, Classifier, GridSpec};
use crate::datagen::{gen_bayes_pattern, gen_dataset, Dataset, Hypothesis};
use crate::error::{Error, Result};
use crate::noise::{NoiseKind, NoiseModel};
use crate::model::ModelParams;
use crate::risk::{par_map, RiskEstimate, Tally};
use crate::rng::{self, Purpose};
use crate::special::{log_add_exp, order_free_sum};
use crate::classifiers::Decision;

fn oracle_noise(params: &ModelParams) -> Result<NoiseModel> {
    if params.noise == NoiseKind::Uniform {
        return Err(Error::UnsupportedNoise("uniform"));
    }
    Ok(NoiseModel::from_std(params.noise, params.sigma))
}

/// Model validation that also admits `a_d = 0`, the indistinguishable case.
fn validate(params: &ModelParams) -> Result<()> {
    if params.a_d == 0.0 {
        let mut shifted = params.clone();
        shifted.a_d = 1.0;
        return shifted.validate();
    }
    params.validate()
}

fn prior_p(params: &ModelParams) -> f64 {
    (params.d as f64).powf(-params.beta)
}

/// `log L_k` for one coordinate.
pub fn lr_coordinate(yk: &[f64], zk: f64, params: &ModelParams) -> Result<f64> {
    let noise = oracle_noise(params)?;
    coordinate_log_lr(&noise, params.a_d, prior_p(params), yk.iter().copied(), zk)
}

fn coordinate_log_lr(
    noise: &NoiseModel,
    a: f64,
    p: f64,
    yk: impl Iterator<Item = f64>,
    zk: f64,
) -> Result<f64> {
    let mut log_ly = 0.0;
    for y in yk {
        log_ly += noise.log_shift_ratio(a, y)?;
    }
    let log_lz = noise.log_shift_ratio(a, zk)?;
    let log_q = (-p).ln_1p();
    let log_p = p.ln();
    let num = log_add_exp(log_q, log_p + log_ly + log_lz);
    let den = log_add_exp(log_q, log_p + log_ly);
    Ok(num - den)
}

/// Log likelihood ratio of a whole dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodReport {
    pub log_l: f64,
    pub per_coordinate: Option<Vec<f64>>,
    pub p: f64,
    pub pi: f64,
}

pub fn likelihood_report(data: &Dataset, params: &ModelParams, pi: f64, keep_terms: bool) -> Result<LikelihoodReport> {
    let mut terms = coordinate_terms(data, params)?;
    let kept = keep_terms.then(|| terms.clone());
    Ok(LikelihoodReport {
        log_l: order_free_sum(&mut terms),
        per_coordinate: kept,
        p: prior_p(params),
        pi,
    })
}

fn coordinate_terms(data: &Dataset, params: &ModelParams) -> Result<Vec<f64>> {
    if data.d != params.d || data.m != params.m {
        return Err(Error::Dimension {
            expected: params.d,
            got: data.d,
        });
    }
    let noise = oracle_noise(params)?;
    let p = prior_p(params);
    (0..data.d)
        .map(|k| {
            let col = (0..data.m).map(|i| data.y[i * data.d + k]);
            coordinate_log_lr(&noise, params.a_d, p, col, data.z[k])
        })
        .collect()
}

pub fn log_likelihood_ratio(data: &Dataset, params: &ModelParams) -> Result<f64> {
    let mut terms = coordinate_terms(data, params)?;
    Ok(order_free_sum(&mut terms))
}

fn check_pi(pi: f64) -> Result<()> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::domain("pi", "lie in (0,1)", pi));
    }
    Ok(())
}

/// Bayes rule for class prior `pi` on H0: AllocY iff `log L > log(pi / (1 - pi))`.
pub fn bayes_lr_classify(data: &Dataset, params: &ModelParams, pi: f64) -> Result<Decision> {
    check_pi(pi)?;
    let log_l = log_likelihood_ratio(data, params)?;
    Ok(if log_l > (pi / (1.0 - pi)).ln() {
        Decision::AllocY
    } else {
        Decision::AllocX
    })
}

/// `d^(1 - 2 beta) D_a^m (D_a - 1)`.
pub fn dd_index(params: &ModelParams) -> Result<f64> {
    validate(params)?;
    let da = NoiseModel::from_std(params.noise, params.sigma).chi2_affinity(params.a_d)?;
    let d = params.d as f64;
    Ok(d.powf(1.0 - 2.0 * params.beta) * da.powi(params.m as i32) * (da - 1.0))
}

/// `exp(d p^2 D_a^m (D_a - 1) / (1 - p))`, an upper bound on `E_H0 L^2`.
pub fn second_moment_bound(params: &ModelParams) -> Result<f64> {
    validate(params)?;
    let da = NoiseModel::from_std(params.noise, params.sigma).chi2_affinity(params.a_d)?;
    let d = params.d as f64;
    let p = prior_p(params);
    Ok((d * p * p * da.powi(params.m as i32) * (da - 1.0) / (1.0 - p)).exp())
}

/// Draws the dataset of oracle replicate `r` under `h`, with a prior-drawn pattern.
pub fn prior_dataset(params: &ModelParams, seed: u64, r: u64, h: Hypothesis) -> Result<Dataset> {
    let purpose = match h {
        Hypothesis::H0 => Purpose::NullData,
        Hypothesis::H1 => Purpose::AltData,
    };
    let mut s = rng::stream(seed, r, purpose);
    let pattern = gen_bayes_pattern(params, &mut s);
    gen_dataset(params, &pattern, h, &mut s)
}

/// Monte Carlo Bayes risk of the oracle, stratified: `n_reps` replicates per
/// hypothesis, combined with weights `pi` and `1 - pi`.
pub fn oracle_bayes_risk(params: &ModelParams, pi: f64, n_reps: u64, seed: u64) -> Result<RiskEstimate> {
    let rows = compare_bayes(params, pi, &[], None, n_reps, seed)?;
    Ok(rows[0].estimate)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesComparison {
    pub label: String,
    pub estimate: RiskEstimate,
}

/// Oracle and each classifier evaluated on the same prior-drawn datasets.
/// The oracle comes first.
pub fn compare_bayes(
    params: &ModelParams,
    pi: f64,
    classifiers: &[Classifier],
    grid: Option<&GridSpec>,
    n_reps: u64,
    seed: u64,
) -> Result<Vec<BayesComparison>> {
    check_pi(pi)?;
    if n_reps < 1 {
        return Err(Error::domain("n_reps", "be at least 1", n_reps));
    }
    validate(params)?;
    oracle_noise(params)?;
    if !classifiers.is_empty() && grid.is_none() {
        return Err(Error::domain("grid", "be given when comparing classifiers", "none"));
    }
    let n_rules = classifiers.len() + 1;
    let run = |h: Hypothesis| -> Result<Vec<Tally>> {
        let per_rep = par_map(n_reps, |r| {
            let data = prior_dataset(params, seed, r, h)?;
            let mut out = Vec::with_capacity(n_rules);
            out.push(bayes_lr_classify(&data, params, pi)?);
            if let Some(g) = grid {
                let stats = col_stats(&data);
                for c in classifiers {
                    out.push(c.decide(&stats, params, g)?);
                }
            }
            Ok(out)
        })?;
        let mut tallies = vec![Tally::default(); n_rules];
        for decisions in per_rep {
            for (t, d) in tallies.iter_mut().zip(decisions) {
                t.record(d);
            }
        }
        Ok(tallies)
    };
    let h0 = run(Hypothesis::H0)?;
    let h1 = run(Hypothesis::H1)?;
    let labels = std::iter::once("oracle".to_string()).chain(classifiers.iter().map(|c| c.label()));
    labels
        .zip(h0.into_iter().zip(h1))
        .map(|(label, (a, b))| {
            Ok(BayesComparison {
                label,
                estimate: RiskEstimate::from_tallies(a, b)?,
            })
        })
        .collect()
}

/// Monte Carlo estimate of `E_H0 L^2` under the prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentEstimate {
    pub mean: f64,
    pub std_err: f64,
    /// Mean after dropping the largest 0.1% of draws; diagnostic only.
    pub trimmed_mean: f64,
    pub n_reps: u64,
}

pub fn second_moment_mc(params: &ModelParams, n_reps: u64, seed: u64) -> Result<SecondMomentEstimate> {
    if n_reps < 2 {
        return Err(Error::domain("n_reps", "be at least 2", n_reps));
    }
    let mut sq = par_map(n_reps, |r| {
        let data = prior_dataset(params, seed, r, Hypothesis::H0)?;
        Ok((2.0 * log_likelihood_ratio(&data, params)?).exp())
    })?;
    let n = n_reps as f64;
    let mean = order_free_sum(&mut sq.clone()) / n;
    let mut dev: Vec<f64> = sq.iter().map(|v| (v - mean).powi(2)).collect();
    let var = order_free_sum(&mut dev) / (n - 1.0);
    sq.sort_unstable_by(f64::total_cmp);
    let keep = sq.len() - ((sq.len() as f64 * 1e-3).floor() as usize);
    let trimmed = order_free_sum(&mut sq[..keep].to_vec()) / keep as f64;
    Ok(SecondMomentEstimate {
        mean,
        std_err: (var / n).sqrt(),
        trimmed_mean: trimmed,
        n_reps,
    })
}
