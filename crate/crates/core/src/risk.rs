//! Monte Carlo risk estimation and parameter sweeps.
//!
//! Replicate `r` under hypothesis H0 draws everything (pattern positions and
//! data) from the stream `(seed, r, NullData)`, and under H1 from
//! `(seed, r, AltData)`. Replicates are mapped in parallel and reduced by
//! integer counting, so results do not depend on the number of workers.

use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classifiers::{make_grid_with, Classifier, ColumnStats, Decision, GridOverrides, GridSpec};
use crate::datagen::{gen_column_stats, gen_pattern, Hypothesis, KChoice};
use crate::error::{Error, Result};
use crate::model::{derive_quantities, ModelParams};
use crate::rng::{self, Purpose, Stream};

/// Normal quantile used for the 95% Wilson interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for a binomial proportion.
pub fn confidence_interval(successes: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::domain("trials", "be at least 1", trials));
    }
    if successes > trials {
        return Err(Error::domain("successes", "not exceed trials", successes));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = n + z2;
    let center = (successes as f64 + z2 / 2.0) / denom;
    let half = Z95 / denom * (p * (1.0 - p) * n + z2 / 4.0).sqrt();
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

fn wilson_halfwidth(successes: u64, trials: u64) -> f64 {
    let (lo, hi) = confidence_interval(successes, trials).expect("trials >= 1");
    0.5 * (hi - lo)
}

/// Outcome counts under one hypothesis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub n: u64,
    pub alloc_y: u64,
    pub no_decision: u64,
}

impl Tally {
    pub fn record(&mut self, d: Decision) {
        self.n += 1;
        match d {
            Decision::AllocY => self.alloc_y += 1,
            Decision::NoDecision => self.no_decision += 1,
            Decision::AllocX => {}
        }
    }

    pub fn alloc_x(&self) -> u64 {
        self.n - self.alloc_y - self.no_decision
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Tally) -> Tally {
        self.n += other.n;
        self.alloc_y += other.alloc_y;
        self.no_decision += other.no_decision;
        self
    }
}

/// Error rates of one rule. A `NoDecision` counts as an error under both
/// hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub h0: Tally,
    pub h1: Tally,
    /// Estimate of `E_H0 psi`.
    pub r0: f64,
    /// Estimate of `E_H1 (1 - psi)`.
    pub r1: f64,
    pub max_risk: f64,
    pub r0_ci: f64,
    pub r1_ci: f64,
    pub nd_rate: f64,
}

impl RiskEstimate {
    pub fn from_tallies(h0: Tally, h1: Tally) -> Result<Self> {
        if h0.n == 0 || h1.n == 0 {
            return Err(Error::domain("n_reps", "be at least 1", 0));
        }
        let err0 = h0.alloc_y + h0.no_decision;
        let err1 = h1.alloc_x() + h1.no_decision;
        let r0 = err0 as f64 / h0.n as f64;
        let r1 = err1 as f64 / h1.n as f64;
        Ok(RiskEstimate {
            h0,
            h1,
            r0,
            r1,
            max_risk: r0.max(r1),
            r0_ci: wilson_halfwidth(err0, h0.n),
            r1_ci: wilson_halfwidth(err1, h1.n),
            nd_rate: (h0.no_decision + h1.no_decision) as f64 / (h0.n + h1.n) as f64,
        })
    }

    pub fn bayes_risk(&self, pi: f64) -> f64 {
        pi * self.r0 + (1.0 - pi) * self.r1
    }

    /// Standard error of [`RiskEstimate::bayes_risk`] from the two binomial components.
    pub fn bayes_se(&self, pi: f64) -> f64 {
        let v0 = self.r0 * (1.0 - self.r0) / self.h0.n as f64;
        let v1 = self.r1 * (1.0 - self.r1) / self.h1.n as f64;
        (pi * pi * v0 + (1.0 - pi) * (1.0 - pi) * v1).sqrt()
    }

    pub fn n_reps(&self) -> u64 {
        self.h0.n
    }
}

#[cfg(feature = "parallel")]
fn par_tally<F>(n_reps: u64, f: F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Decision> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n_reps)
        .into_par_iter()
        .map(|r| {
            let mut t = Tally::default();
            t.record(f(r)?);
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

#[cfg(not(feature = "parallel"))]
fn par_tally<F>(n_reps: u64, f: F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Decision>,
{
    let mut t = Tally::default();
    for r in 0..n_reps {
        t.record(f(r)?);
    }
    Ok(t)
}

/// Maps `f` over replicate indices, in parallel when available, keeping order.
#[cfg(feature = "parallel")]
pub fn par_map<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    (0..n).map(f).collect()
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = default pool).
#[cfg(feature = "parallel")]
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<T>(_threads: usize, f: impl FnOnce() -> T) -> T {
    f()
}

fn hypothesis_stream(seed: u64, r: u64, h: Hypothesis) -> Stream {
    let purpose = match h {
        Hypothesis::H0 => Purpose::NullData,
        Hypothesis::H1 => Purpose::AltData,
    };
    rng::stream(seed, r, purpose)
}

/// Draws the column statistics of replicate `r` under `h`.
pub fn replicate_stats(
    params: &ModelParams,
    k_choice: KChoice,
    seed: u64,
    r: u64,
    h: Hypothesis,
) -> Result<ColumnStats> {
    let mut s = hypothesis_stream(seed, r, h);
    let pattern = gen_pattern(params, k_choice, &mut s)?;
    gen_column_stats(params, &pattern, h, &mut s)
}

/// Risk of an arbitrary rule. The rule also receives a per-replicate
/// auxiliary stream for randomized stubs.
pub fn estimate_rule<F>(
    params: &ModelParams,
    k_choice: KChoice,
    n_reps: u64,
    seed: u64,
    rule: F,
) -> Result<RiskEstimate>
where
    F: Fn(&ColumnStats, &mut Stream) -> Result<Decision> + Sync + Send,
{
    if n_reps < 1 {
        return Err(Error::domain("n_reps", "be at least 1", n_reps));
    }
    params.validate()?;
    let run = |h: Hypothesis| {
        par_tally(n_reps, |r| {
            let stats = replicate_stats(params, k_choice, seed, r, h)?;
            let tag = match h {
                Hypothesis::H0 => 2 * r,
                Hypothesis::H1 => 2 * r + 1,
            };
            let mut aux = rng::stream(seed, tag, Purpose::Stub);
            rule(&stats, &mut aux)
        })
    };
    let h0 = run(Hypothesis::H0)?;
    let h1 = run(Hypothesis::H1)?;
    RiskEstimate::from_tallies(h0, h1)
}

pub fn estimate_risk(
    classifier: Classifier,
    params: &ModelParams,
    grid: &GridSpec,
    k_choice: KChoice,
    n_reps: u64,
    seed: u64,
) -> Result<RiskEstimate> {
    estimate_rule(params, k_choice, n_reps, seed, |stats, _| {
        classifier.decide(stats, params, grid)
    })
}

/// Worse of the `Low` and `High` endpoint risks (by maximum risk).
pub fn worst_case_risk(
    classifier: Classifier,
    params: &ModelParams,
    grid: &GridSpec,
    n_reps: u64,
    seed: u64,
) -> Result<RiskEstimate> {
    let lo = estimate_risk(classifier, params, grid, KChoice::Low, n_reps, seed)?;
    let hi = estimate_risk(classifier, params, grid, KChoice::High, n_reps, seed)?;
    Ok(if hi.max_risk > lo.max_risk { hi } else { lo })
}

/// Scores of a rule's statistic under H0 and H1, replicate by replicate.
pub fn score_samples(
    classifier: Classifier,
    params: &ModelParams,
    grid: &GridSpec,
    k_choice: KChoice,
    n_reps: u64,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let run = |h: Hypothesis| {
        par_map(n_reps, |r| {
            let stats = replicate_stats(params, k_choice, seed, r, h)?;
            classifier
                .score(&stats, params, grid)?
                .ok_or(Error::NotApplicable("score of a three-valued or combined rule"))
        })
    };
    Ok((run(Hypothesis::H0)?, run(Hypothesis::H1)?))
}

/// Probability that a random H1 score exceeds a random H0 score (ties count half).
pub fn auc(null: &[f64], alt: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &a in alt {
        for &b in null {
            if a > b {
                wins += 1.0;
            } else if a == b {
                wins += 0.5;
            }
        }
    }
    wins / (null.len() * alt.len()) as f64
}

/// Sub-seed for cell `index` of a sweep.
pub fn cell_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A rectangular sweep over `beta x amplitude x d x classifier`.
///
/// The amplitude axis is `x1` for Scenarios A/B and `x*` for C/D. For C/D
/// with an explicit `gamma`, each `d` uses `m = ceil(d^gamma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub betas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub ds: Vec<usize>,
    pub classifiers: Vec<Classifier>,
    pub grid: GridOverrides,
    pub n_reps: u64,
    pub seed: u64,
    /// Measure wall time per row; off keeps output byte-reproducible.
    pub record_time: bool,
}

impl SweepSpec {
    /// Model of one cell.
    pub fn cell_params(&self, beta: f64, amplitude: f64, d: usize) -> ModelParams {
        let mut p = self.base.clone();
        p.d = d;
        p.beta = beta;
        if p.scenario.is_large_m() {
            if let Some(g) = p.gamma {
                let v = (d as f64).powf(g);
                let snapped = if (v - v.round()).abs() < 1e-9 * v { v.round() } else { v.ceil() };
                p.m = snapped as usize;
            }
            let x = amplitude * (1.0 - p.gamma()).sqrt();
            p.set_x(x);
        } else {
            p.set_x1(amplitude);
        }
        p
    }
}

/// One line of sweep output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub m: usize,
    pub beta: f64,
    pub scenario: String,
    pub gamma: f64,
    pub x1: f64,
    pub x_star: f64,
    pub k_choice: String,
    pub classifier: String,
    pub h: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "H")]
    pub big_h: f64,
    pub c0: f64,
    pub n_reps: u64,
    pub r0: f64,
    pub r0_ci: f64,
    pub r1: f64,
    pub r1_ci: f64,
    pub max_risk: f64,
    pub bayes_risk_half: f64,
    pub nd_rate: f64,
    pub seed: u64,
    pub wall_ms: u64,
}

pub const CSV_HEADER: [&str; 23] = [
    "d", "m", "beta", "scenario", "gamma", "x1", "x_star", "k_choice", "classifier", "h", "N", "H", "c0",
    "n_reps", "r0", "r0_ci", "r1", "r1_ci", "max_risk", "bayes_risk_half", "nd_rate", "seed", "wall_ms",
];

/// Float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl SweepRow {
    pub fn new(
        params: &ModelParams,
        k_choice: KChoice,
        classifier: Classifier,
        grid: &GridSpec,
        est: &RiskEstimate,
        seed: u64,
        wall_ms: u64,
    ) -> Result<Self> {
        let q = derive_quantities(params)?;
        Ok(SweepRow {
            d: params.d,
            m: params.m,
            beta: params.beta,
            scenario: params.scenario.to_string(),
            gamma: q.gamma,
            x1: q.x1,
            x_star: q.x_star,
            k_choice: k_choice.as_str().to_string(),
            classifier: classifier.label(),
            h: grid.h,
            n: grid.n,
            big_h: grid.threshold,
            c0: grid.c0,
            n_reps: est.n_reps(),
            r0: est.r0,
            r0_ci: est.r0_ci,
            r1: est.r1,
            r1_ci: est.r1_ci,
            max_risk: est.max_risk,
            bayes_risk_half: est.bayes_risk(0.5),
            nd_rate: est.nd_rate,
            seed,
            wall_ms,
        })
    }

    fn record(&self) -> Vec<String> {
        let f = fmt_f64;
        vec![
            self.d.to_string(),
            self.m.to_string(),
            f(self.beta),
            self.scenario.clone(),
            f(self.gamma),
            f(self.x1),
            f(self.x_star),
            self.k_choice.clone(),
            self.classifier.clone(),
            f(self.h),
            self.n.to_string(),
            f(self.big_h),
            f(self.c0),
            self.n_reps.to_string(),
            f(self.r0),
            f(self.r0_ci),
            f(self.r1),
            f(self.r1_ci),
            f(self.max_risk),
            f(self.bayes_risk_half),
            f(self.nd_rate),
            self.seed.to_string(),
            self.wall_ms.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for row in &self.rows {
            out.write_record(row.record())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Io("unexpected CSV header".into()));
        }
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<SweepRow>, _>>()?;
        Ok(SweepResult { rows })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.rows).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Evaluates every cell at both count endpoints. Rows are ordered by
/// `d`, then `beta`, amplitude, classifier and `Low` before `High`.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.betas.is_empty() || spec.amplitudes.is_empty() || spec.ds.is_empty() || spec.classifiers.is_empty() {
        return Err(Error::domain("sweep", "have at least one value on every axis", "empty axis"));
    }
    let mut rows = Vec::new();
    let mut index = 0u64;
    for &d in &spec.ds {
        for &beta in &spec.betas {
            for &amp in &spec.amplitudes {
                let params = spec.cell_params(beta, amp, d);
                params.validate()?;
                let grid = make_grid_with(&params, &spec.grid)?;
                for &classifier in &spec.classifiers {
                    for k_choice in [KChoice::Low, KChoice::High] {
                        let seed = cell_seed(spec.seed, index);
                        index += 1;
                        // The clock is read only on request; wasm32 has none.
                        let start = spec.record_time.then(Instant::now);
                        let est = estimate_risk(classifier, &params, &grid, k_choice, spec.n_reps, seed)?;
                        let wall = start.map_or(0, |s| s.elapsed().as_millis() as u64);
                        rows.push(SweepRow::new(&params, k_choice, classifier, &grid, &est, seed, wall)?);
                    }
                }
            }
        }
    }
    Ok(SweepResult { rows })
}
