//! Decision rules.
//!
//! Every rule works on [`ColumnStats`], the per-coordinate summaries
//!
//! ```text
//! SY^k = (1/sqrt m) sum_i Y_i^k
//! SZ^k = (Z^k + sum_i Y_i^k) / sqrt(m + 1)
//! ```
//!
//! together with the raw query `Z`. Rules never look at coordinate order:
//! counts and maxima are order-free, and sums go through
//! [`order_free_sum`], so permuting coordinates gives bit-identical decisions.
//!
//! Ties follow the strict inequalities of each rule and resolve to
//! [`Decision::AllocX`].

use std::f64::consts::{E, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::model::{ModelParams, Scenario};
use crate::special::{norm_sf, order_free_sum};

/// Classifier output. `AllocX` assigns the query to the unshifted
/// population (H0), `AllocY` to the shifted one (H1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    AllocX,
    AllocY,
    NoDecision,
}

impl Decision {
    fn from_bool(alloc_y: bool) -> Self {
        if alloc_y {
            Decision::AllocY
        } else {
            Decision::AllocX
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierId {
    Lin,
    Pre,
    Max,
    StarM,
    StarInf,
    Inf,
    Adaptive,
}

impl ClassifierId {
    pub const ALL: [ClassifierId; 7] = [
        ClassifierId::Lin,
        ClassifierId::Pre,
        ClassifierId::Max,
        ClassifierId::StarM,
        ClassifierId::StarInf,
        ClassifierId::Inf,
        ClassifierId::Adaptive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierId::Lin => "lin",
            ClassifierId::Pre => "pre",
            ClassifierId::Max => "max",
            ClassifierId::StarM => "star-m",
            ClassifierId::StarInf => "star-inf",
            ClassifierId::Inf => "inf",
            ClassifierId::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for ClassifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        ClassifierId::ALL
            .into_iter()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| Error::UnknownClassifier(s.to_string()))
    }
}

/// A rule together with how it obtains the noise level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classifier {
    pub id: ClassifierId,
    /// Use the variance estimated from `Z` instead of the model's `sigma`.
    pub unknown_sigma: bool,
}

impl Classifier {
    pub fn known(id: ClassifierId) -> Self {
        Classifier {
            id,
            unknown_sigma: false,
        }
    }

    pub fn unknown(id: ClassifierId) -> Self {
        Classifier {
            id,
            unknown_sigma: true,
        }
    }

    /// Label used in output tables, e.g. `max` or `max/unknown-sigma`.
    pub fn label(&self) -> String {
        if self.unknown_sigma {
            format!("{}/unknown-sigma", self.id)
        } else {
            self.id.to_string()
        }
    }

    pub fn decide(&self, stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Result<Decision> {
        let sigma = self.noise_level(stats, params)?;
        let ctx = Context::new(params, sigma);
        Ok(match self.id {
            ClassifierId::Lin => Decision::from_bool(lin_statistic(stats) > 0.0),
            ClassifierId::Pre => pre_decision(stats, &ctx, self.pre_width()),
            ClassifierId::Max => Decision::from_bool(lambda_max(stats, &ctx) > 1.0 + grid.c0),
            ClassifierId::StarM => {
                Decision::from_bool(lambda_star(stats, &ctx, grid, self.centering()) > grid.threshold)
            }
            ClassifierId::StarInf => Decision::from_bool(lambda_star_inf(stats, &ctx, grid) > grid.threshold),
            ClassifierId::Inf => Decision::from_bool(delta_inf(stats, &ctx, grid) > 4.0 * grid.n as f64),
            ClassifierId::Adaptive => {
                let pre = pre_decision(stats, &ctx, self.pre_width());
                if pre != Decision::NoDecision {
                    return Ok(pre);
                }
                let members: &[ClassifierId] = match params.scenario {
                    Scenario::A => &[ClassifierId::Lin, ClassifierId::Max, ClassifierId::StarM],
                    Scenario::B => &[ClassifierId::Lin, ClassifierId::StarInf],
                    Scenario::C | Scenario::D => &[ClassifierId::Lin, ClassifierId::Inf],
                };
                for &id in members {
                    let member = Classifier {
                        id,
                        unknown_sigma: self.unknown_sigma,
                    };
                    if member.decide(stats, params, grid)? == Decision::AllocY {
                        return Ok(Decision::AllocY);
                    }
                }
                Decision::AllocX
            }
        })
    }

    /// Continuous statistic the rule thresholds, for rank-based comparisons.
    /// `None` for the three-valued and combined rules.
    pub fn score(&self, stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Result<Option<f64>> {
        let sigma = self.noise_level(stats, params)?;
        let ctx = Context::new(params, sigma);
        Ok(match self.id {
            ClassifierId::Lin => Some(lin_statistic(stats)),
            ClassifierId::Max => Some(lambda_max(stats, &ctx)),
            ClassifierId::StarM => Some(lambda_star(stats, &ctx, grid, self.centering())),
            ClassifierId::StarInf => Some(lambda_star_inf(stats, &ctx, grid)),
            ClassifierId::Inf => Some(delta_inf(stats, &ctx, grid)),
            ClassifierId::Pre | ClassifierId::Adaptive => None,
        })
    }

    fn noise_level(&self, stats: &ColumnStats, params: &ModelParams) -> Result<f64> {
        if self.unknown_sigma {
            let est = sigma_hat(&stats.z);
            if est.degenerate {
                return Err(Error::NoEstimate);
            }
            Ok(est.value)
        } else {
            Ok(params.sigma)
        }
    }

    fn centering(&self) -> Centering {
        if self.unknown_sigma {
            Centering::Empirical
        } else {
            Centering::Theoretical
        }
    }

    fn pre_width(&self) -> f64 {
        if self.unknown_sigma {
            UNKNOWN_SIGMA_PRE_WIDTH
        } else {
            2.0
        }
    }
}

/// `b` in the `sqrt(b log d)` thresholds of the unknown-variance pre-classifier.
pub const UNKNOWN_SIGMA_PRE_WIDTH: f64 = 2.5;

/// Per-coordinate summaries shared by all rules.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub m: usize,
    pub sy: Vec<f64>,
    pub sz: Vec<f64>,
    pub z: Vec<f64>,
}

impl ColumnStats {
    /// From column sums `sum_i Y_i^k` and the query.
    pub fn from_sums(m: usize, y_sum: &[f64], z: Vec<f64>) -> Self {
        assert_eq!(y_sum.len(), z.len());
        let rm = (m as f64).sqrt();
        let rm1 = ((m + 1) as f64).sqrt();
        ColumnStats {
            m,
            sy: y_sum.iter().map(|s| s / rm).collect(),
            sz: y_sum.iter().zip(&z).map(|(s, zk)| (zk + s) / rm1).collect(),
            z,
        }
    }

    pub fn from_dataset(data: &Dataset) -> Self {
        let mut y_sum = vec![0.0; data.d];
        for i in 0..data.m {
            for (acc, v) in y_sum.iter_mut().zip(data.row(i)) {
                *acc += v;
            }
        }
        Self::from_sums(data.m, &y_sum, data.z.clone())
    }

    pub fn d(&self) -> usize {
        self.z.len()
    }
}

pub fn col_stats(data: &Dataset) -> ColumnStats {
    ColumnStats::from_dataset(data)
}

/// Threshold grid `t_l = l h`, `l = 1..N`, with `t_N = sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h: f64,
    pub n: usize,
    /// The threshold scale `H` of the grid rules.
    pub threshold: f64,
    /// Margin of the max rule.
    pub c0: f64,
}

impl GridSpec {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n).map(move |l| if l == self.n { SQRT_2 } else { l as f64 * self.h })
    }
}

/// Optional replacements for the default grid constants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridOverrides {
    pub h: Option<f64>,
    pub n: Option<usize>,
    pub threshold: Option<f64>,
    pub c0: Option<f64>,
}

pub const DEFAULT_C0: f64 = 0.05;

/// Default grid: `N = max(4, ceil(T_d / ln(e + T_d)))`, `h = sqrt 2 / N`,
/// `H = d^min(sqrt h, 0.4)`.
pub fn make_grid(params: &ModelParams) -> Result<GridSpec> {
    make_grid_with(params, &GridOverrides::default())
}

pub fn make_grid_with(params: &ModelParams, ov: &GridOverrides) -> Result<GridSpec> {
    if params.d < 8 {
        return Err(Error::domain("d", "be at least 8 for the threshold grid", params.d));
    }
    let t_d = params.log_d().sqrt();
    let n = match (ov.n, ov.h) {
        (Some(n), Some(h)) => {
            if n == 0 || (n as f64 * h - SQRT_2).abs() > 1e-9 {
                return Err(Error::domain("N, h", "satisfy N * h = sqrt 2", format!("N={n}, h={h}")));
            }
            n
        }
        (Some(n), None) => n,
        (None, Some(h)) => {
            if !(h > 0.0 && h <= SQRT_2) {
                return Err(Error::domain("h", "lie in (0, sqrt 2]", h));
            }
            (SQRT_2 / h).round().max(1.0) as usize
        }
        (None, None) => ((t_d / (E + t_d).ln()).ceil() as usize).max(4),
    };
    if n == 0 {
        return Err(Error::domain("N", "be at least 1", n));
    }
    let h = SQRT_2 / n as f64;
    let threshold = match ov.threshold {
        Some(v) => v,
        None => (params.d as f64).powf(h.sqrt().min(0.4)),
    };
    if !(threshold > 1.0) {
        return Err(Error::domain("H", "exceed 1", threshold));
    }
    let c0 = ov.c0.unwrap_or(DEFAULT_C0);
    if !(c0 > 0.0) {
        return Err(Error::domain("c0", "be positive", c0));
    }
    Ok(GridSpec { h, n, threshold, c0 })
}

/// Sample second moment estimate of `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEstimate {
    pub value: f64,
    /// Set when every query coordinate is zero.
    pub degenerate: bool,
}

/// `sqrt((1/d) sum_k (Z^k)^2)`.
pub fn sigma_hat(z: &[f64]) -> SigmaEstimate {
    let mut sq: Vec<f64> = z.iter().map(|v| v * v).collect();
    let value = (order_free_sum(&mut sq) / z.len() as f64).sqrt();
    SigmaEstimate {
        value,
        degenerate: value == 0.0,
    }
}

struct Context {
    sigma: f64,
    t_d: f64,
    log_d: f64,
    d: f64,
}

impl Context {
    fn new(params: &ModelParams, sigma: f64) -> Self {
        let log_d = (params.d as f64).ln();
        Context {
            sigma,
            t_d: log_d.sqrt(),
            log_d,
            d: params.d as f64,
        }
    }

    /// `t sigma T_d`, multiplied so that scaling `sigma` by a power of two
    /// scales the result exactly.
    fn level(&self, t: f64) -> f64 {
        (t * self.t_d) * self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Centering {
    /// Subtract the expected null count `d Phi(-t T_d)`.
    Theoretical,
    /// Subtract the observed count of query coordinates above the level.
    Empirical,
}

fn count_above(values: &[f64], level: f64) -> usize {
    values.iter().filter(|&&v| v > level).count()
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `T' = sum_k (Z^k - (1/2m) sum_i Y_i^k)`.
pub fn lin_statistic(stats: &ColumnStats) -> f64 {
    let half = 2.0 * (stats.m as f64).sqrt();
    let mut terms: Vec<f64> = stats.z.iter().zip(&stats.sy).map(|(z, sy)| z - sy / half).collect();
    order_free_sum(&mut terms)
}

pub fn psi_lin(stats: &ColumnStats) -> Decision {
    Decision::from_bool(lin_statistic(stats) > 0.0)
}

/// Pre-classifier statistics `(T, M_Y)` with support estimate
/// `SY^k > sigma sqrt(width log d)`.
fn pre_statistics(stats: &ColumnStats, ctx: &Context, width: f64) -> (f64, f64) {
    let cut = (width * ctx.log_d).sqrt() * ctx.sigma;
    let half = 2.0 * (stats.m as f64).sqrt();
    let mut terms: Vec<f64> = stats
        .z
        .iter()
        .zip(&stats.sy)
        .filter(|(_, &sy)| sy > cut)
        .map(|(z, sy)| z - sy / half)
        .collect();
    (order_free_sum(&mut terms), max_of(&stats.sy))
}

fn pre_decision(stats: &ColumnStats, ctx: &Context, width: f64) -> Decision {
    let (t, max_y) = pre_statistics(stats, ctx, width);
    if max_y <= 3.0 * (width * ctx.log_d).sqrt() * ctx.sigma {
        Decision::NoDecision
    } else {
        Decision::from_bool(t > 0.0)
    }
}

pub fn psi_pre(stats: &ColumnStats, params: &ModelParams) -> Decision {
    pre_decision(stats, &Context::new(params, params.sigma), 2.0)
}

/// `Lambda_M = max_k SZ^k / max(sqrt 2 sigma T_d, max_k SY^k)`.
fn lambda_max(stats: &ColumnStats, ctx: &Context) -> f64 {
    max_of(&stats.sz) / ctx.level(SQRT_2).max(max_of(&stats.sy))
}

pub fn psi_max(stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Decision {
    let ctx = Context::new(params, params.sigma);
    Decision::from_bool(lambda_max(stats, &ctx) > 1.0 + grid.c0)
}

/// `Lambda* = Delta / (H + Delta_0)` with standardized exceedance counts of
/// `SZ` (Delta) and `SY` (Delta_0), each maximized over the grid.
fn lambda_star(stats: &ColumnStats, ctx: &Context, grid: &GridSpec, centering: Centering) -> f64 {
    let mut delta = f64::NEG_INFINITY;
    let mut delta0 = f64::NEG_INFINITY;
    for t in grid.points() {
        let level = ctx.level(t);
        let tail = ctx.d * norm_sf(t * ctx.t_d);
        let norm = tail.sqrt();
        let center = match centering {
            Centering::Theoretical => tail,
            Centering::Empirical => count_above(&stats.z, level) as f64,
        };
        delta = delta.max((count_above(&stats.sz, level) as f64 - center) / norm);
        delta0 = delta0.max((count_above(&stats.sy, level) as f64 - center) / norm);
    }
    delta / (grid.threshold + delta0)
}

pub fn psi_star_m(stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Decision {
    let ctx = Context::new(params, params.sigma);
    Decision::from_bool(lambda_star(stats, &ctx, grid, Centering::Theoretical) > grid.threshold)
}

fn selected_query_sum(stats: &ColumnStats, level: f64) -> (f64, usize) {
    let mut picked: Vec<f64> = stats
        .z
        .iter()
        .zip(&stats.sy)
        .filter(|(_, &sy)| sy > level)
        .map(|(&z, _)| z)
        .collect();
    let count = picked.len();
    (order_free_sum(&mut picked), count)
}

/// `Lambda*_inf = max_l Delta(t_l) / sqrt(H + Delta_*)`, where `Delta(t)`
/// sums `Z^k` over coordinates with `SY^k > t sigma T_d`.
fn lambda_star_inf(stats: &ColumnStats, ctx: &Context, grid: &GridSpec) -> f64 {
    let mut delta = f64::NEG_INFINITY;
    for t in grid.points() {
        let (sum, _) = selected_query_sum(stats, ctx.level(t));
        let norm = ctx.sigma * (ctx.d * norm_sf(t * ctx.t_d)).sqrt();
        delta = delta.max(sum / norm);
    }
    let top = count_above(&stats.sy, ctx.level(SQRT_2)) as f64;
    delta / (grid.threshold + top).sqrt()
}

pub fn psi_star_inf(stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Decision {
    let ctx = Context::new(params, params.sigma);
    Decision::from_bool(lambda_star_inf(stats, &ctx, grid) > grid.threshold)
}

/// `max_l L1(t_l) / (sigma sqrt(N^2 + L0(t_l)))`.
fn delta_inf(stats: &ColumnStats, ctx: &Context, grid: &GridSpec) -> f64 {
    let n2 = (grid.n * grid.n) as f64;
    grid.points()
        .map(|t| {
            let (sum, count) = selected_query_sum(stats, ctx.level(t));
            sum / (ctx.sigma * (n2 + count as f64).sqrt())
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn psi_inf(stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Decision {
    let ctx = Context::new(params, params.sigma);
    Decision::from_bool(delta_inf(stats, &ctx, grid) > 4.0 * grid.n as f64)
}

pub fn psi_adaptive(stats: &ColumnStats, params: &ModelParams, grid: &GridSpec) -> Decision {
    Classifier::known(ClassifierId::Adaptive)
        .decide(stats, params, grid)
        .expect("known-sigma rules do not fail")
}

/// Unknown-variance version of `base`.
pub fn psi_unknown_sigma(
    base: ClassifierId,
    stats: &ColumnStats,
    params: &ModelParams,
    grid: &GridSpec,
) -> Result<Decision> {
    Classifier::unknown(base).decide(stats, params, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{gen_dataset, gen_pattern, Hypothesis, KChoice, SparsityPattern};
    use crate::rng::seeded;
    use approx::assert_relative_eq;

    fn zeros(d: usize, m: usize) -> ColumnStats {
        ColumnStats::from_sums(m, &vec![0.0; d], vec![0.0; d])
    }

    #[test]
    fn column_stats_arithmetic() {
        let data = Dataset::new(1, vec![1.0, -2.0], vec![1.0, -2.0], Hypothesis::H0, SparsityPattern::empty(2)).unwrap();
        let s = col_stats(&data);
        assert_relative_eq!(s.sz[0], SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(s.sz[1], -2.0 * SQRT_2, max_relative = 1e-15);

        let data = Dataset::new(4, vec![1.0; 4], vec![0.0], Hypothesis::H0, SparsityPattern::empty(1)).unwrap();
        let s = col_stats(&data);
        assert_eq!(s.sy[0], 2.0);
        assert_relative_eq!(s.sz[0], 4.0 / 5f64.sqrt(), max_relative = 1e-15);

        let s = zeros(5, 3);
        assert!(s.sy.iter().chain(&s.sz).all(|&v| v == 0.0));
    }

    #[test]
    fn grid_defaults() {
        let p = ModelParams::new(8_886_111, 1, 0.6, 1.0);
        let g = make_grid(&p).unwrap();
        assert_eq!(g.n, 4);
        assert_relative_eq!(g.h, SQRT_2 / 4.0, max_relative = 1e-15);
        let p = ModelParams::new(1 << 20, 1, 0.6, 1.0);
        let g = make_grid(&p).unwrap();
        assert_eq!(g.n, 4);
        assert_relative_eq!(g.threshold, 2f64.powf(20.0 * 0.4), max_relative = 1e-12);
        assert_eq!(g.points().last().unwrap(), SQRT_2);
        assert_eq!(g.points().count(), 4);
        assert!(make_grid(&ModelParams::new(4, 1, 0.5, 1.0)).is_err());
    }

    #[test]
    fn grid_overrides() {
        let p = ModelParams::new(1 << 12, 1, 0.6, 1.0);
        let g = make_grid_with(&p, &GridOverrides { n: Some(10), ..Default::default() }).unwrap();
        assert_eq!(g.n, 10);
        assert_relative_eq!(g.n as f64 * g.h, SQRT_2, max_relative = 1e-15);
        let g = make_grid_with(&p, &GridOverrides { h: Some(0.2), threshold: Some(3.0), c0: Some(0.1), ..Default::default() }).unwrap();
        assert_eq!(g.n, 7);
        assert_eq!(g.threshold, 3.0);
        assert_eq!(g.c0, 0.1);
        assert!(make_grid_with(&p, &GridOverrides { n: Some(3), h: Some(0.1), ..Default::default() }).is_err());
        assert!(make_grid_with(&p, &GridOverrides { threshold: Some(1.0), ..Default::default() }).is_err());
    }

    #[test]
    fn lin_examples() {
        let s = ColumnStats::from_sums(1, &[0.0; 4], vec![1.0; 4]);
        assert_eq!(psi_lin(&s), Decision::AllocY);
        assert_eq!(psi_lin(&zeros(4, 1)), Decision::AllocX);
    }

    #[test]
    fn zero_data_decisions() {
        let p = ModelParams::new(10_000, 2, 0.6, 1.0);
        let g = make_grid(&p).unwrap();
        let s = zeros(10_000, 2);
        assert_eq!(psi_pre(&s, &p), Decision::NoDecision);
        assert_eq!(psi_max(&s, &p, &g), Decision::AllocX);
        assert_eq!(psi_star_m(&s, &p, &g), Decision::AllocX);
        assert_eq!(psi_star_inf(&s, &p, &g), Decision::AllocX);
        assert_eq!(psi_inf(&s, &p, &g), Decision::AllocX);
        assert_eq!(psi_adaptive(&s, &p, &g), Decision::AllocX);
        let ctx = Context::new(&p, 1.0);
        assert_eq!(lambda_max(&s, &ctx), 0.0);
        assert!(lambda_star(&s, &ctx, &g, Centering::Theoretical) < 0.0);
        for id in [ClassifierId::Max, ClassifierId::StarM, ClassifierId::StarInf, ClassifierId::Inf] {
            assert_eq!(psi_unknown_sigma(id, &s, &p, &g), Err(Error::NoEstimate));
        }
    }

    #[test]
    fn max_rule_fires_on_a_spike() {
        let p = ModelParams::new(1 << 12, 1, 0.8, 1.0);
        let g = make_grid(&p).unwrap();
        let t_d = p.log_d().sqrt();
        let mut z = vec![0.0; p.d];
        z[17] = 10.0 * t_d * 2f64.sqrt();
        let s = ColumnStats::from_sums(1, &vec![0.0; p.d], z);
        assert_eq!(psi_max(&s, &p, &g), Decision::AllocY);
    }

    #[test]
    fn pre_short_circuits_adaptive() {
        let d = 1 << 10;
        let p = ModelParams::new(d, 1, 0.5, 1.0);
        let g = make_grid(&p).unwrap();
        let big = 100.0;
        // Huge training shift on coordinate 0 and a matching query: pre says AllocY.
        let mut y = vec![0.0; d];
        y[0] = big;
        let mut z = vec![-0.01; d];
        z[0] = big;
        let s = ColumnStats::from_sums(1, &y, z);
        assert_eq!(psi_pre(&s, &p), Decision::AllocY);
        assert_eq!(psi_adaptive(&s, &p, &g), Decision::AllocY);
        // Query away from the shift: pre decides AllocX and adaptive follows.
        let mut z = vec![0.0; d];
        z[0] = 0.0;
        z[1] = 30.0;
        let s = ColumnStats::from_sums(1, &y, z);
        assert_eq!(psi_pre(&s, &p), Decision::AllocX);
        assert_eq!(psi_adaptive(&s, &p, &g), Decision::AllocX);
    }

    #[test]
    fn classifier_ids_parse() {
        for id in ClassifierId::ALL {
            assert_eq!(id.as_str().parse::<ClassifierId>().unwrap(), id);
        }
        assert_eq!("star_m".parse::<ClassifierId>().unwrap(), ClassifierId::StarM);
        assert!("hc".parse::<ClassifierId>().is_err());
    }

    #[test]
    fn sigma_hat_examples() {
        let e = sigma_hat(&[-3.0, 3.0, 3.0, -3.0]);
        assert_eq!(e.value, 3.0);
        assert!(!e.degenerate);
        assert!(sigma_hat(&[0.0; 4]).degenerate);
    }

    #[test]
    fn decisions_survive_permutation_and_scaling() {
        let p = ModelParams::from_x1(512, 2, 0.6, 1.1);
        let g = make_grid(&p).unwrap();
        let mut rng = seeded(8);
        let pat = gen_pattern(&p, KChoice::High, &mut rng).unwrap();
        let data = gen_dataset(&p, &pat, Hypothesis::H1, &mut rng).unwrap();
        let mut perm: Vec<usize> = (0..p.d).collect();
        perm.reverse();
        let permuted = data.permuted(&perm);
        let scaled = data.scaled(4.0);
        let mut p4 = p.clone();
        p4.sigma = 4.0;
        p4.a_d *= 4.0;
        for id in ClassifierId::ALL {
            for c in [Classifier::known(id), Classifier::unknown(id)] {
                let base = c.decide(&col_stats(&data), &p, &g).unwrap();
                assert_eq!(c.decide(&col_stats(&permuted), &p, &g).unwrap(), base, "{}", c.label());
                let target = if c.unknown_sigma { &p } else { &p4 };
                assert_eq!(c.decide(&col_stats(&scaled), target, &g).unwrap(), base, "{}", c.label());
            }
        }
    }
}
