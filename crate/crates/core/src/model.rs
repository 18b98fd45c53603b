//! Problem parameterization, derived quantities, the boundary curve and
//! regime classification.
//!
//! The training sample `Y` (m rows) is drawn from the shifted population,
//! whose mean is `a_d` on `k` coordinates and zero elsewhere. The query `Z`
//! is either pure noise (H0) or from the shifted population (H1).

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseKind;

/// Growth regime of the training-set size relative to the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Fixed `m`, Gaussian noise.
    A,
    /// `m` grows with `log m = o(log d)`, Gaussian noise.
    B,
    /// `log m ~ gamma log d`, Gaussian noise.
    C,
    /// Same growth as C with Cramér-condition noise.
    D,
}

impl Scenario {
    pub fn is_large_m(self) -> bool {
        matches!(self, Scenario::C | Scenario::D)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::A => "A",
            Scenario::B => "B",
            Scenario::C => "C",
            Scenario::D => "D",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Scenario::A),
            "B" => Ok(Scenario::B),
            "C" => Ok(Scenario::C),
            "D" => Ok(Scenario::D),
            _ => Err(Error::domain("scenario", "be one of A, B, C, D", s)),
        }
    }
}

/// A full problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: usize,
    pub m: usize,
    pub beta: f64,
    pub a_d: f64,
    pub sigma: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub noise: NoiseKind,
    pub scenario: Scenario,
    /// Growth exponent for Scenarios C/D. `None` means `log m / log d`.
    pub gamma: Option<f64>,
}

impl ModelParams {
    /// Scenario A instance with unit Gaussian noise and `c_lo = 1`, `c_hi = 2`.
    pub fn new(d: usize, m: usize, beta: f64, a_d: f64) -> Self {
        ModelParams {
            d,
            m,
            beta,
            a_d,
            sigma: 1.0,
            c_lo: 1.0,
            c_hi: 2.0,
            noise: NoiseKind::Gaussian,
            scenario: Scenario::A,
            gamma: None,
        }
    }

    /// Instance whose amplitude is set through `x1 = a_d sqrt(m + 1) / (sigma T_d)`.
    pub fn from_x1(d: usize, m: usize, beta: f64, x1: f64) -> Self {
        let mut p = Self::new(d, m, beta, 1.0);
        p.set_x1(x1);
        p
    }

    pub fn set_x1(&mut self, x1: f64) {
        self.a_d = amplitude_from_x1(self.d, self.m, self.sigma, x1);
    }

    /// Sets the amplitude through `x = a_d sqrt(m) / (sigma T_d)`.
    pub fn set_x(&mut self, x: f64) {
        self.a_d = amplitude_from_x(self.d, self.m, self.sigma, x);
    }

    pub fn with_scenario(mut self, scenario: Scenario, gamma: Option<f64>) -> Self {
        self.scenario = scenario;
        self.gamma = gamma;
        self
    }

    pub fn with_noise(mut self, noise: NoiseKind) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_counts(mut self, c_lo: f64, c_hi: f64) -> Self {
        self.c_lo = c_lo;
        self.c_hi = c_hi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::domain("d", "be at least 2", self.d));
        }
        if self.m < 1 {
            return Err(Error::domain("m", "be at least 1", self.m));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::domain("beta", "lie in (0,1)", self.beta));
        }
        if !(self.a_d > 0.0 && self.a_d.is_finite()) {
            return Err(Error::domain("a_d", "be positive and finite", self.a_d));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain("sigma", "be positive and finite", self.sigma));
        }
        if !(self.c_lo > 0.0 && self.c_lo.is_finite()) {
            return Err(Error::domain("c_lo", "be positive", self.c_lo));
        }
        if !(self.c_hi >= self.c_lo && self.c_hi.is_finite()) {
            return Err(Error::domain("c_hi", "be at least c_lo", self.c_hi));
        }
        if let Some(g) = self.gamma {
            if !(0.0..1.0).contains(&g) {
                return Err(Error::domain("gamma", "lie in [0,1)", g));
            }
        }
        let (lo, hi) = self.raw_count_range();
        if lo > hi || hi > self.d {
            return Err(Error::domain(
                "c_lo, c_hi",
                "admit at least one nonzero count in [c_lo d^(1-beta), c_hi d^(1-beta)] not exceeding d",
                format!("[{lo}, {hi}]"),
            ));
        }
        Ok(())
    }

    fn raw_count_range(&self) -> (usize, usize) {
        let base = (self.d as f64).powf(1.0 - self.beta);
        let lo = snap(self.c_lo * base).ceil();
        let hi = snap(self.c_hi * base).floor();
        (lo.max(0.0) as usize, hi.max(0.0) as usize)
    }

    /// Admissible nonzero counts `[ceil(c_lo d^(1-beta)), floor(c_hi d^(1-beta))]`.
    pub fn count_range(&self) -> Result<(usize, usize)> {
        self.validate()?;
        Ok(self.raw_count_range())
    }

    /// Growth exponent: 0 for Scenarios A/B; explicit or `log m / log d` for C/D.
    pub fn gamma(&self) -> f64 {
        if self.scenario.is_large_m() {
            self.gamma
                .unwrap_or_else(|| (self.m as f64).ln() / (self.d as f64).ln())
        } else {
            0.0
        }
    }

    pub fn log_d(&self) -> f64 {
        (self.d as f64).ln()
    }
}

/// Rounds values within relative 1e-9 of an integer onto it, so that
/// `powf` noise does not empty a range whose endpoints are integral.
fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        v
    }
}

pub fn amplitude_from_x1(d: usize, m: usize, sigma: f64, x1: f64) -> f64 {
    x1 * sigma * (d as f64).ln().sqrt() / ((m + 1) as f64).sqrt()
}

pub fn amplitude_from_x(d: usize, m: usize, sigma: f64, x: f64) -> f64 {
    x * sigma * (d as f64).ln().sqrt() / (m as f64).sqrt()
}

/// Every reparameterized quantity of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub t_d: f64,
    pub s: f64,
    pub x: f64,
    pub x0: f64,
    pub x1: f64,
    pub gamma: f64,
    pub beta_star: f64,
    pub x_star: f64,
    pub r_d: f64,
    pub p: f64,
    /// `a_d sqrt(m / log d) / sigma`; above `2 sqrt 2` the problem is easy.
    pub q_trivial: f64,
}

pub fn derive_quantities(params: &ModelParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let d = params.d as f64;
    let m = params.m as f64;
    let t_d = d.ln().sqrt();
    let s = params.a_d / (params.sigma * t_d);
    let x = s * m.sqrt();
    let gamma = params.gamma();
    Ok(DerivedQuantities {
        t_d,
        s,
        x,
        x0: s * m / (m + 1.0).sqrt(),
        x1: s * (m + 1.0).sqrt(),
        gamma,
        beta_star: params.beta / (1.0 - gamma),
        x_star: x / (1.0 - gamma).sqrt(),
        r_d: d.powf(0.5 - params.beta) * params.a_d / params.sigma,
        p: d.powf(-params.beta),
        q_trivial: x,
    })
}

/// `sqrt(2 beta - 1)`, the lower branch of the boundary.
pub fn phi1(beta: f64) -> f64 {
    (2.0 * beta - 1.0).sqrt()
}

/// `sqrt 2 (1 - sqrt(1 - beta))`, the upper branch of the boundary.
pub fn phi2(beta: f64) -> f64 {
    SQRT_2 * (1.0 - (1.0 - beta).sqrt())
}

/// Classification boundary on `(1/2, 1)`.
pub fn phi(beta: f64) -> Result<f64> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(Error::domain("beta", "lie in (1/2,1) for the boundary", beta));
    }
    Ok(if beta <= 0.75 { phi1(beta) } else { phi2(beta) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    ModerateSparse,
    HighlySparse,
    TrivialLarge,
    ImpossiblySmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundarySide {
    Above,
    Below,
    Near,
}

/// Regime of an instance. `boundary_side` is `None` in the moderately
/// sparse zone, where the boundary is `R_d ~ 1` rather than the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub boundary_side: Option<BoundarySide>,
}

/// Finite-dimension thresholds used by [`regime`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConfig {
    /// Minimum `d^(1-beta) (a_d/sigma)^2` for the trivial regime.
    pub trivial_mass: f64,
    /// Half-width of the `Near` band around the boundary.
    pub near_band: f64,
}

impl Default for RegimeConfig {
    fn default() -> Self {
        RegimeConfig {
            trivial_mass: 10.0,
            near_band: 0.02,
        }
    }
}

pub fn regime(params: &ModelParams) -> Result<Regime> {
    regime_with(params, &RegimeConfig::default())
}

pub fn regime_with(params: &ModelParams, cfg: &RegimeConfig) -> Result<Regime> {
    let q = derive_quantities(params)?;
    let d = params.d as f64;
    let mass = d.powf(1.0 - params.beta) * (params.a_d / params.sigma).powi(2);
    if q.q_trivial > 2.0 * SQRT_2 && mass > cfg.trivial_mass {
        return Ok(Regime {
            tag: RegimeTag::TrivialLarge,
            boundary_side: Some(BoundarySide::Above),
        });
    }
    let g = q.gamma;
    if g > 0.0 && params.beta >= 1.0 - g {
        return Ok(Regime {
            tag: RegimeTag::ImpossiblySmall,
            boundary_side: Some(BoundarySide::Below),
        });
    }
    if params.beta <= (1.0 - g) / 2.0 {
        return Ok(Regime {
            tag: RegimeTag::ModerateSparse,
            boundary_side: None,
        });
    }
    let gap = gap_from(params, &q)?;
    let side = if gap.abs() < cfg.near_band {
        BoundarySide::Near
    } else if gap > 0.0 {
        BoundarySide::Above
    } else {
        BoundarySide::Below
    };
    Ok(Regime {
        tag: RegimeTag::HighlySparse,
        boundary_side: Some(side),
    })
}

/// Signed distance to the boundary: `x1 - phi(beta)` for A/B and
/// `x* - phi(beta*)` for C/D. Positive means classifiable.
pub fn boundary_gap(params: &ModelParams) -> Result<f64> {
    let q = derive_quantities(params)?;
    gap_from(params, &q)
}

fn gap_from(params: &ModelParams, q: &DerivedQuantities) -> Result<f64> {
    if params.scenario.is_large_m() {
        if !(q.beta_star > 0.5 && q.beta_star < 1.0) {
            return Err(Error::NotApplicable("boundary gap outside the highly sparse zone"));
        }
        Ok(q.x_star - phi(q.beta_star)?)
    } else {
        if !(params.beta > 0.5) {
            return Err(Error::NotApplicable("boundary gap outside the highly sparse zone"));
        }
        Ok(q.x1 - phi(params.beta)?)
    }
}
