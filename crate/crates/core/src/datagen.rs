//! Sparsity patterns and synthetic datasets.

use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::ColumnStats;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::{NoiseKind, NoiseModel};

/// How the nonzero count is picked from the admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KChoice {
    Low,
    High,
    Mid,
    Random,
}

impl KChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            KChoice::Low => "low",
            KChoice::High => "high",
            KChoice::Mid => "mid",
            KChoice::Random => "random",
        }
    }
}

impl FromStr for KChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(KChoice::Low),
            "high" => Ok(KChoice::High),
            "mid" => Ok(KChoice::Mid),
            "random" => Ok(KChoice::Random),
            _ => Err(Error::domain("k_choice", "be one of low, high, mid, random", s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Query drawn from the unshifted population.
    H0,
    /// Query drawn from the shifted population.
    H1,
}

/// Positions of the shifted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    eps: Vec<bool>,
    k: usize,
}

impl SparsityPattern {
    pub fn from_bits(eps: Vec<bool>) -> Self {
        let k = eps.iter().filter(|&&b| b).count();
        SparsityPattern { eps, k }
    }

    pub fn from_support(d: usize, support: &[usize]) -> Self {
        let mut eps = vec![false; d];
        for &i in support {
            eps[i] = true;
        }
        Self::from_bits(eps)
    }

    pub fn empty(d: usize) -> Self {
        SparsityPattern {
            eps: vec![false; d],
            k: 0,
        }
    }

    pub fn d(&self) -> usize {
        self.eps.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> &[bool] {
        &self.eps
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.eps.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// Pattern with coordinates reordered so that new position `i` holds old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        SparsityPattern {
            eps: perm.iter().map(|&j| self.eps[j]).collect(),
            k: self.k,
        }
    }
}

/// Nonzero count for `choice`; `Random` consumes one draw from `rng`.
pub fn pick_count<R: Rng + ?Sized>(params: &ModelParams, choice: KChoice, rng: &mut R) -> Result<usize> {
    let (lo, hi) = params.count_range()?;
    Ok(match choice {
        KChoice::Low => lo,
        KChoice::High => hi,
        KChoice::Mid => (lo + hi).div_ceil(2),
        KChoice::Random => rng.random_range(lo..=hi),
    })
}

/// Fixed-count pattern with uniformly random positions.
pub fn gen_pattern<R: Rng + ?Sized>(
    params: &ModelParams,
    choice: KChoice,
    rng: &mut R,
) -> Result<SparsityPattern> {
    let k = pick_count(params, choice, rng)?;
    let support = index::sample(rng, params.d, k).into_vec();
    Ok(SparsityPattern::from_support(params.d, &support))
}

/// Pattern with i.i.d. Bernoulli(`d^-beta`) coordinates; the count is unconstrained.
pub fn gen_bayes_pattern<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> SparsityPattern {
    let p = (params.d as f64).powf(-params.beta);
    SparsityPattern::from_bits((0..params.d).map(|_| rng.random::<f64>() < p).collect())
}

/// Training matrix (row-major, `m x d`), query vector and ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub m: usize,
    pub d: usize,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub hypothesis: Hypothesis,
    pub pattern: SparsityPattern,
}

impl Dataset {
    pub fn new(m: usize, y: Vec<f64>, z: Vec<f64>, hypothesis: Hypothesis, pattern: SparsityPattern) -> Result<Self> {
        let d = z.len();
        if y.len() != m * d {
            return Err(Error::Dimension {
                expected: m * d,
                got: y.len(),
            });
        }
        if pattern.d() != d {
            return Err(Error::Dimension {
                expected: d,
                got: pattern.d(),
            });
        }
        Ok(Dataset {
            m,
            d,
            y,
            z,
            hypothesis,
            pattern,
        })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.y[i * self.d..(i + 1) * self.d]
    }

    /// Training values of coordinate `k` across the `m` rows.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.m).map(|i| self.y[i * self.d + k]).collect()
    }

    pub fn permuted(&self, perm: &[usize]) -> Dataset {
        let mut y = Vec::with_capacity(self.y.len());
        for i in 0..self.m {
            let row = self.row(i);
            y.extend(perm.iter().map(|&j| row[j]));
        }
        Dataset {
            m: self.m,
            d: self.d,
            y,
            z: perm.iter().map(|&j| self.z[j]).collect(),
            hypothesis: self.hypothesis,
            pattern: self.pattern.permuted(perm),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Dataset {
        Dataset {
            y: self.y.iter().map(|v| v * lambda).collect(),
            z: self.z.iter().map(|v| v * lambda).collect(),
            ..self.clone()
        }
    }

    /// Binary dump: `d, m, k` as little-endian u64, then `Y` row-major and
    /// `Z` as little-endian f64, then the pattern packed LSB-first.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        for v in [self.d as u64, self.m as u64, self.pattern.k() as u64] {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in self.y.iter().chain(self.z.iter()) {
            w.write_all(&v.to_le_bytes())?;
        }
        let mut packed = vec![0u8; self.d.div_ceil(8)];
        for k in self.pattern.support() {
            packed[k / 8] |= 1 << (k % 8);
        }
        w.write_all(&packed)?;
        Ok(())
    }

    /// Reads a dump written by [`Dataset::write_dump`]. The hypothesis is not
    /// part of the format and is supplied by the caller.
    pub fn read_dump<R: Read>(mut r: R, hypothesis: Hypothesis) -> Result<Dataset> {
        let mut word = [0u8; 8];
        let mut header = [0u64; 3];
        for h in header.iter_mut() {
            r.read_exact(&mut word)?;
            *h = u64::from_le_bytes(word);
        }
        let [d, m, k] = header.map(|v| v as usize);
        let mut read_floats = |n: usize| -> Result<Vec<f64>> {
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                r.read_exact(&mut word)?;
                out.push(f64::from_le_bytes(word));
            }
            Ok(out)
        };
        let y = read_floats(m * d)?;
        let z = read_floats(d)?;
        let mut packed = vec![0u8; d.div_ceil(8)];
        r.read_exact(&mut packed)?;
        let pattern = SparsityPattern::from_bits((0..d).map(|i| packed[i / 8] >> (i % 8) & 1 == 1).collect());
        if pattern.k() != k {
            return Err(Error::Dimension {
                expected: k,
                got: pattern.k(),
            });
        }
        Dataset::new(m, y, z, hypothesis, pattern)
    }
}

fn noise_of(params: &ModelParams) -> NoiseModel {
    NoiseModel::from_std(params.noise, params.sigma)
}

/// Full dataset: `Y_j^k = a_d eps_k + noise`, and `Z^k` is pure noise under
/// H0 or `a_d eps_k + noise` under H1.
pub fn gen_dataset<R: Rng + ?Sized>(
    params: &ModelParams,
    pattern: &SparsityPattern,
    hypothesis: Hypothesis,
    rng: &mut R,
) -> Result<Dataset> {
    if pattern.d() != params.d {
        return Err(Error::Dimension {
            expected: params.d,
            got: pattern.d(),
        });
    }
    let noise = noise_of(params);
    let (m, d) = (params.m, params.d);
    let mut y = noise.sample(rng, m * d);
    for i in 0..m {
        for k in pattern.support() {
            y[i * d + k] += params.a_d;
        }
    }
    let mut z = noise.sample(rng, d);
    if hypothesis == Hypothesis::H1 {
        for k in pattern.support() {
            z[k] += params.a_d;
        }
    }
    Dataset::new(m, y, z, hypothesis, pattern.clone())
}

/// Draws the column statistics directly, without materializing `Y`.
///
/// For Gaussian noise the column sums are drawn from their exact
/// `N(m a_d eps_k, m sigma^2)` law; other families sum `m` draws. The
/// result has the same law as `ColumnStats::from_dataset(gen_dataset(..))`.
pub fn gen_column_stats<R: Rng + ?Sized>(
    params: &ModelParams,
    pattern: &SparsityPattern,
    hypothesis: Hypothesis,
    rng: &mut R,
) -> Result<ColumnStats> {
    if pattern.d() != params.d {
        return Err(Error::Dimension {
            expected: params.d,
            got: pattern.d(),
        });
    }
    let noise = noise_of(params);
    let (m, d) = (params.m, params.d);
    let mut y_sum = vec![0.0; d];
    match params.noise {
        NoiseKind::Gaussian => {
            let sum_noise = NoiseModel::gaussian(params.sigma * (m as f64).sqrt());
            sum_noise.fill(rng, &mut y_sum);
        }
        _ => {
            for v in y_sum.iter_mut() {
                *v = (0..m).map(|_| noise.draw(rng)).sum();
            }
        }
    }
    let shift = m as f64 * params.a_d;
    let bits = pattern.bits();
    for (v, &on) in y_sum.iter_mut().zip(bits) {
        if on {
            *v += shift;
        }
    }
    let mut z = noise.sample(rng, d);
    if hypothesis == Hypothesis::H1 {
        for (v, &on) in z.iter_mut().zip(bits) {
            if on {
                *v += params.a_d;
            }
        }
    }
    Ok(ColumnStats::from_sums(m, &y_sum, z))
}
