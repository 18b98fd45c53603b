//! Sparse mean-shift classification: boundary, classifiers, Bayes oracle and
//! Monte Carlo risk estimation.

pub mod classifiers;
#[cfg(feature = "cli")]
pub mod cli;
pub mod datagen;
pub mod error;
pub mod model;
pub mod noise;
pub mod oracle;
pub mod quad;
pub mod risk;
pub mod rng;
pub mod selftest;
pub mod special;

pub use classifiers::{Classifier, ClassifierId, ColumnStats, Decision, GridSpec};
pub use datagen::{Dataset, Hypothesis, KChoice, SparsityPattern};
pub use error::{Error, Result};
pub use model::{ModelParams, Regime, Scenario};
pub use noise::{NoiseKind, NoiseModel};
pub use risk::RiskEstimate;
