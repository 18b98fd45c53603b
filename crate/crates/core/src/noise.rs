//! Zero-mean noise families satisfying the Cramér condition.
//!
//! Each family is parameterized by its natural scale; [`NoiseModel::from_std`]
//! picks the scale giving a requested standard deviation.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Laplace,
    /// Uniform on `[-w, w]`.
    Uniform,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Laplace => "laplace",
            NoiseKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(NoiseKind::Gaussian),
            "laplace" => Ok(NoiseKind::Laplace),
            "uniform" => Ok(NoiseKind::Uniform),
            _ => Err(Error::domain("noise", "be one of gaussian, laplace, uniform", s)),
        }
    }
}

/// A noise family with its natural scale: the standard deviation for
/// Gaussian, `b` for Laplace, the half-width `w` for uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub scale: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, scale: f64) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "noise scale must be positive");
        NoiseModel { kind, scale }
    }

    /// Model with variance `sigma^2`.
    pub fn from_std(kind: NoiseKind, sigma: f64) -> Self {
        let scale = match kind {
            NoiseKind::Gaussian => sigma,
            NoiseKind::Laplace => sigma / SQRT_2,
            NoiseKind::Uniform => sigma * 3f64.sqrt(),
        };
        Self::new(kind, scale)
    }

    pub fn gaussian(sigma: f64) -> Self {
        Self::new(NoiseKind::Gaussian, sigma)
    }

    pub fn variance(&self) -> f64 {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => s * s,
            NoiseKind::Laplace => 2.0 * s * s,
            NoiseKind::Uniform => s * s / 3.0,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::Gaussian => self.scale * rng.sample::<f64, _>(StandardNormal),
            NoiseKind::Laplace => {
                // Inverse CDF on (-1/2, 1/2); the open interval keeps ln finite.
                let u: f64 = rng.random::<f64>() - 0.5;
                let mag = -(1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln();
                self.scale * mag.copysign(u)
            }
            NoiseKind::Uniform => self.scale * (2.0 * rng.random::<f64>() - 1.0),
        }
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.draw(rng);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        self.fill(rng, &mut v);
        v
    }

    pub fn density(&self, t: f64) -> f64 {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => (-0.5 * (t / s).powi(2)).exp() / (s * (2.0 * PI).sqrt()),
            NoiseKind::Laplace => (-t.abs() / s).exp() / (2.0 * s),
            NoiseKind::Uniform => {
                if t.abs() <= s {
                    0.5 / s
                } else {
                    0.0
                }
            }
        }
    }

    /// `log f(t - a) - log f(t)`, the log of the shift likelihood ratio.
    /// Defined only for families with positive density on the whole line.
    pub fn log_shift_ratio(&self, a: f64, t: f64) -> Result<f64> {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => Ok(a * (t - 0.5 * a) / (s * s)),
            NoiseKind::Laplace => Ok((t.abs() - (t - a).abs()) / s),
            NoiseKind::Uniform => Err(Error::UnsupportedNoise("uniform")),
        }
    }

    /// Chi-square affinity `D_a = ∫ f(t-a)^2 / f(t) dt`.
    ///
    /// Gaussian uses the closed form `exp((a/sigma)^2)`; the other families
    /// integrate numerically.
    pub fn chi2_affinity(&self, a: f64) -> Result<f64> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::domain("a", "be nonnegative and finite", a));
        }
        match self.kind {
            NoiseKind::Gaussian => Ok(((a / self.scale).powi(2)).exp()),
            _ => self.chi2_affinity_quadrature(a),
        }
    }

    /// Quadrature route for `D_a`, available for every family.
    pub fn chi2_affinity_quadrature(&self, a: f64) -> Result<f64> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::domain("a", "be nonnegative and finite", a));
        }
        if a == 0.0 {
            return Ok(1.0);
        }
        if self.kind == NoiseKind::Uniform {
            // f(t - a) > 0 on (w, w + a] where f(t) = 0.
            return Err(Error::InfiniteAffinity("uniform"));
        }
        let integrand = |t: f64| {
            let ft = self.density(t);
            if ft == 0.0 {
                0.0
            } else {
                self.density(t - a).powi(2) / ft
            }
        };
        let s = self.scale;
        let peak = (0..=400)
            .map(|i| integrand(-5.0 * s + (2.0 * a + 10.0 * s) * i as f64 / 400.0))
            .fold(0.0, f64::max);
        let floor = 1e-30 * peak;
        let mut lo = -5.0 * s;
        while integrand(lo) >= floor {
            lo -= (a - lo).max(s);
        }
        let mut hi = 2.0 * a + 5.0 * s;
        while integrand(hi) >= floor {
            hi += (hi - a).max(s);
        }
        let mut points = vec![lo, 0.0, a, 2.0 * a, hi];
        points.dedup();
        let r = quad::integrate(integrand, &points, 1e-11, 4000)?;
        let rel = r.abs_error / r.value.abs();
        if rel > 1e-8 {
            return Err(Error::Quadrature { achieved: rel });
        }
        Ok(r.value)
    }

    /// Log moment generating function `log E exp(theta * xi)`.
    fn log_mgf(&self, theta: f64) -> f64 {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => 0.5 * (s * theta).powi(2),
            NoiseKind::Laplace => -(1.0 - (s * theta).powi(2)).ln(),
            NoiseKind::Uniform => {
                let z = s * theta;
                if z.abs() < 1e-8 {
                    z * z / 6.0
                } else {
                    // log(sinh z / z) = |z| + log((1 - e^{-2|z|}) / (2|z|))
                    z.abs() + (-(-2.0 * z.abs()).exp_m1() / (2.0 * z.abs())).ln()
                }
            }
        }
    }

    /// Mean of the exponentially tilted law, `d/dtheta log_mgf`.
    fn tilted_mean(&self, theta: f64) -> f64 {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => s * s * theta,
            NoiseKind::Laplace => 2.0 * s * s * theta / (1.0 - (s * theta).powi(2)),
            NoiseKind::Uniform => {
                let z = s * theta;
                if z.abs() < 1e-6 {
                    s * z / 3.0
                } else {
                    s * (1.0 / z.tanh() - 1.0 / z)
                }
            }
        }
    }

    fn draw_tilted<R: Rng + ?Sized>(&self, theta: f64, rng: &mut R) -> f64 {
        let s = self.scale;
        match self.kind {
            NoiseKind::Gaussian => s * s * theta + s * rng.sample::<f64, _>(StandardNormal),
            NoiseKind::Laplace => {
                let up = 1.0 / s - theta;
                let down = 1.0 / s + theta;
                let e = -(1.0 - rng.random::<f64>()).ln();
                if rng.random::<f64>() < down / (up + down) {
                    e / up
                } else {
                    -e / down
                }
            }
            NoiseKind::Uniform => {
                let u: f64 = rng.random();
                -s + (u * (2.0 * s * theta).exp_m1()).ln_1p() / theta
            }
        }
    }

    /// Importance-sampling estimate of `P(sum_{i<=m} xi_i > t * sigma * sqrt m)`
    /// under exponential tilting centred on the threshold.
    ///
    /// Returns `(probability, standard error)`.
    pub fn standardized_tail<R: Rng + ?Sized>(
        &self,
        m: usize,
        t: f64,
        n: usize,
        rng: &mut R,
    ) -> (f64, f64) {
        assert!(t > 0.0 && m >= 1 && n >= 2);
        let sd = self.std_dev();
        let target = t * sd / (m as f64).sqrt();
        let threshold = t * sd * (m as f64).sqrt();
        let mut lo = 0.0;
        let mut hi = match self.kind {
            NoiseKind::Laplace => 1.0 / self.scale,
            _ => 1.0,
        };
        if self.kind != NoiseKind::Laplace {
            while self.tilted_mean(hi) < target {
                hi *= 2.0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tilted_mean(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = 0.5 * (lo + hi);
        let log_norm = m as f64 * self.log_mgf(theta);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let total: f64 = (0..m).map(|_| self.draw_tilted(theta, rng)).sum();
            let w = if total > threshold {
                (log_norm - theta * total).exp()
            } else {
                0.0
            };
            sum += w;
            sum_sq += w * w;
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (mean, (var / nf).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::special::norm_sf;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_moments() {
        let model = NoiseModel::gaussian(1.0);
        let v = model.sample(&mut seeded(11), 1_000_000);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn sampling_is_deterministic() {
        for kind in [NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::Uniform] {
            let model = NoiseModel::from_std(kind, 2.0);
            assert_eq!(model.sample(&mut seeded(5), 64), model.sample(&mut seeded(5), 64));
            assert!(model.sample(&mut seeded(5), 0).is_empty());
        }
    }

    #[test]
    fn variance_matches_declared_sigma() {
        for kind in [NoiseKind::Laplace, NoiseKind::Uniform] {
            let model = NoiseModel::from_std(kind, 1.5);
            assert_relative_eq!(model.variance(), 2.25, max_relative = 1e-14);
            let v = model.sample(&mut seeded(2), 400_000);
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!(mean.abs() < 4.0 * 1.5 / n.sqrt());
            assert!((var / 2.25 - 1.0).abs() < 0.02, "{kind}: {var}");
        }
    }

    #[test]
    fn density_values() {
        assert_relative_eq!(NoiseModel::gaussian(1.0).density(0.0), 0.398_942_280_401_432_7, max_relative = 1e-15);
        let lap = NoiseModel::from_std(NoiseKind::Laplace, 1.0);
        assert_relative_eq!(lap.density(0.0), SQRT_2 / 2.0, max_relative = 1e-14);
        assert_eq!(NoiseModel::from_std(NoiseKind::Uniform, 1.0).density(2.0), 0.0);
    }

    #[test]
    fn densities_integrate_to_one() {
        for kind in [NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::Uniform] {
            let model = NoiseModel::from_std(kind, 1.3);
            let s = model.scale;
            let pts = [-40.0 * 1.3, -s, 0.0, s, 40.0 * 1.3];
            let r = quad::integrate(|t| model.density(t), &pts, 1e-13, 2000).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "{kind}: {}", r.value);
        }
    }

    #[test]
    fn affinity_values() {
        let g = NoiseModel::gaussian(1.0);
        assert_relative_eq!(g.chi2_affinity(1.0).unwrap(), std::f64::consts::E, max_relative = 1e-15);
        for kind in [NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::Uniform] {
            assert_eq!(NoiseModel::from_std(kind, 0.7).chi2_affinity(0.0).unwrap(), 1.0);
        }
        let lap = NoiseModel::new(NoiseKind::Laplace, 1.0);
        let closed = 2.0 / 3.0 * 1f64.exp() + (-2f64).exp() / 3.0;
        let q = lap.chi2_affinity(1.0).unwrap();
        assert_relative_eq!(q, closed, max_relative = 1e-8);
        assert_relative_eq!(q, 1.85730, epsilon = 1e-5);
        assert!(matches!(
            NoiseModel::from_std(NoiseKind::Uniform, 1.0).chi2_affinity(0.1),
            Err(Error::InfiniteAffinity(_))
        ));
        assert!(g.chi2_affinity(-1.0).is_err());
    }

    #[test]
    fn gaussian_closed_form_matches_quadrature() {
        for sigma in [1.0, 0.5, 3.0] {
            let g = NoiseModel::gaussian(sigma);
            for a in [0.0, 0.25, 0.5, 1.0, 2.0] {
                let a = a * sigma;
                let closed = g.chi2_affinity(a).unwrap();
                let quad = g.chi2_affinity_quadrature(a).unwrap();
                assert_relative_eq!(closed, quad, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn affinity_at_least_one_and_nondecreasing() {
        for kind in [NoiseKind::Gaussian, NoiseKind::Laplace] {
            let model = NoiseModel::from_std(kind, 1.0);
            let mut prev = 1.0;
            for i in 0..=40 {
                let v = model.chi2_affinity(i as f64 * 0.05).unwrap();
                assert!(v >= 1.0 && v >= prev - 1e-12, "{kind} at {i}: {v}");
                prev = v;
            }
        }
    }

    #[test]
    fn log_ratio_matches_densities() {
        for kind in [NoiseKind::Gaussian, NoiseKind::Laplace] {
            let model = NoiseModel::from_std(kind, 1.2);
            for &t in &[-3.0, -0.2, 0.0, 0.4, 2.5] {
                let direct = (model.density(t - 0.7) / model.density(t)).ln();
                assert_relative_eq!(model.log_shift_ratio(0.7, t).unwrap(), direct, epsilon = 1e-12);
            }
        }
        assert!(NoiseModel::from_std(NoiseKind::Uniform, 1.0).log_shift_ratio(0.5, 0.0).is_err());
    }

    #[test]
    fn tilted_tail_matches_gaussian_closed_form() {
        let g = NoiseModel::gaussian(1.0);
        let mut rng = seeded(3);
        for t in [3.0, 5.0] {
            let (p, se) = g.standardized_tail(4, t, 20_000, &mut rng);
            let exact = norm_sf(t);
            assert!((p - exact).abs() < 5.0 * se, "t={t}: {p} vs {exact} (se {se})");
        }
    }
}
