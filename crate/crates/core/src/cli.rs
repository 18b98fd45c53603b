//! Command-line front end.
//!
//! Settings come from built-in defaults, then an optional INI file, then
//! flags. The file may hold keys at top level or under `[model]`, `[grid]`,
//! `[run]` and one section per subcommand; a subcommand section is read only
//! by that subcommand. Comments must occupy a whole line.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classifiers::{make_grid_with, Classifier, ClassifierId, GridOverrides};
use crate::datagen::{gen_dataset, gen_pattern, Hypothesis, KChoice};
use crate::error::{Error, Result};
use crate::model::{derive_quantities, phi, ModelParams, Scenario};
use crate::noise::NoiseKind;
use crate::oracle::{compare_bayes, dd_index, second_moment_bound};
use crate::risk::{estimate_risk, fmt_f64, sweep, with_threads, SweepResult, SweepRow, SweepSpec};
use crate::rng::{self, Purpose};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "sparsebound", version, about = "Sparse mean-shift classification experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Boundary,
    Simulate,
    Sweep,
    Oracle,
    Selftest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the classification boundary phi(beta).
    Boundary(Flags),
    /// Estimate the risk of one classifier at one parameter point.
    Simulate(Flags),
    /// Risk over a grid of (beta, amplitude, d) cells.
    Sweep(Flags),
    /// Bayes oracle against classifiers on prior-drawn data.
    Oracle(Flags),
    /// Run the built-in invariant checks.
    Selftest(Flags),
}

impl Command {
    fn parts(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Boundary(f) => (CommandKind::Boundary, f),
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Sweep(f) => (CommandKind::Sweep, f),
            Command::Oracle(f) => (CommandKind::Oracle, f),
            Command::Selftest(f) => (CommandKind::Selftest, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 0 picks automatically. Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long = "a-d")]
    pub a_d: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub x1: Option<f64>,
    /// Amplitude through `x`; for Scenarios C/D this is what `x*` rescales.
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long = "x-star")]
    pub x_star: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long = "c-lo")]
    pub c_lo: Option<f64>,
    #[arg(long = "c-hi")]
    pub c_hi: Option<f64>,
    /// One id, or a comma-separated list for `sweep` and `oracle`.
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long = "unknown-sigma")]
    pub unknown_sigma: bool,
    #[arg(long = "k-choice")]
    pub k_choice: Option<String>,
    #[arg(long)]
    pub pi: Option<f64>,
    #[arg(long = "grid-threshold")]
    pub grid_threshold: Option<f64>,
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    #[arg(long = "grid-h")]
    pub grid_h: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    /// Comma-separated sweep axes.
    #[arg(long)]
    pub betas: Option<String>,
    #[arg(long)]
    pub amplitudes: Option<String>,
    #[arg(long)]
    pub ds: Option<String>,
    /// Write the generated dataset of replicate 0 (binary) to this path.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long = "record-time")]
    pub record_time: bool,
}

const KEYS: &[&str] = &[
    "seed", "reps", "n_reps", "out", "format", "threads", "d", "m", "beta", "a_d", "sigma", "x1", "x", "x_star",
    "gamma", "scenario", "noise", "c_lo", "c_hi", "classifier", "classifiers", "unknown_sigma", "k_choice", "pi",
    "h", "N", "H", "c0", "betas", "amplitudes", "ds", "dump", "record_time",
];

const SHARED_SECTIONS: &[&str] = &["model", "grid", "run"];
const COMMAND_SECTIONS: &[&str] = &["boundary", "simulate", "sweep", "oracle", "selftest"];

fn section_name(kind: CommandKind) -> &'static str {
    match kind {
        CommandKind::Boundary => "boundary",
        CommandKind::Simulate => "simulate",
        CommandKind::Sweep => "sweep",
        CommandKind::Oracle => "oracle",
        CommandKind::Selftest => "selftest",
    }
}

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Raw key-value settings from a config file, for one subcommand.
pub fn read_config_text(text: &str, kind: CommandKind) -> Result<BTreeMap<String, String>> {
    let ini = ini::Ini::load_from_str(text).map_err(|e| config_err("<file>", e.to_string()))?;
    let mut out = BTreeMap::new();
    for (section, props) in ini.iter() {
        let use_it = match section {
            None => true,
            Some(s) if SHARED_SECTIONS.contains(&s) => true,
            Some(s) if COMMAND_SECTIONS.contains(&s) => s == section_name(kind),
            Some(s) => return Err(config_err(s, "unknown section")),
        };
        for (k, v) in props.iter() {
            let key = if k == "n_reps" { "reps" } else { k };
            if !KEYS.contains(&key) {
                return Err(config_err(k, "unknown key"));
            }
            if use_it {
                out.insert(key.to_string(), v.trim().to_string());
            }
        }
    }
    Ok(out)
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| config_err(key, format!("cannot parse {v:?} as {}", std::any::type_name::<T>())))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(config_err(key, format!("cannot parse {v:?} as a boolean"))),
    }
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

/// Overlays file settings onto flags; flags win.
pub fn merge_file(flags: &Flags, file: &BTreeMap<String, String>) -> Result<Flags> {
    let mut f = flags.clone();
    macro_rules! fill {
        ($field:ident, $key:expr) => {
            if f.$field.is_none() {
                if let Some(v) = file.get($key) {
                    f.$field = Some(parse_value($key, v)?);
                }
            }
        };
    }
    fill!(seed, "seed");
    fill!(reps, "reps");
    fill!(out, "out");
    fill!(threads, "threads");
    fill!(d, "d");
    fill!(m, "m");
    fill!(beta, "beta");
    fill!(a_d, "a_d");
    fill!(sigma, "sigma");
    fill!(x1, "x1");
    fill!(x, "x");
    fill!(x_star, "x_star");
    fill!(gamma, "gamma");
    fill!(scenario, "scenario");
    fill!(noise, "noise");
    fill!(c_lo, "c_lo");
    fill!(c_hi, "c_hi");
    fill!(classifier, "classifier");
    fill!(k_choice, "k_choice");
    fill!(pi, "pi");
    fill!(grid_h, "h");
    fill!(grid_n, "N");
    fill!(grid_threshold, "H");
    fill!(c0, "c0");
    fill!(betas, "betas");
    fill!(amplitudes, "amplitudes");
    fill!(ds, "ds");
    fill!(dump, "dump");
    if f.classifier.is_none() {
        f.classifier = file.get("classifiers").cloned();
    }
    if f.format.is_none() {
        if let Some(v) = file.get("format") {
            f.format = Some(Format::from_str(v, true).map_err(|_| config_err("format", "must be csv or json"))?);
        }
    }
    if !f.unknown_sigma {
        if let Some(v) = file.get("unknown_sigma") {
            f.unknown_sigma = parse_bool("unknown_sigma", v)?;
        }
    }
    if !f.record_time {
        if let Some(v) = file.get("record_time") {
            f.record_time = parse_bool("record_time", v)?;
        }
    }
    Ok(f)
}

/// Validated settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: Option<ModelParams>,
    pub grid: GridOverrides,
    pub classifiers: Vec<Classifier>,
    pub k_choice: KChoice,
    pub pi: f64,
    pub n_reps: u64,
    pub seed: u64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub betas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub ds: Vec<usize>,
    pub dump: Option<PathBuf>,
    pub record_time: bool,
}

fn require<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| config_err(key, "is required"))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(config_err("beta", "beta must lie in (0,1)"));
    }
    Ok(())
}

fn base_params(f: &Flags, d: usize, beta: f64, need_amplitude: bool) -> Result<ModelParams> {
    let mut p = ModelParams::new(d, f.m.unwrap_or(1), beta, 1.0);
    if let Some(s) = &f.scenario {
        p.scenario = s.parse::<Scenario>()?;
    }
    if let Some(n) = &f.noise {
        p.noise = n.parse::<NoiseKind>()?;
    }
    if let Some(s) = f.sigma {
        p.sigma = s;
    }
    p.gamma = f.gamma;
    if let Some(c) = f.c_lo {
        p.c_lo = c;
    }
    if let Some(c) = f.c_hi {
        p.c_hi = c;
    }
    let given = [f.a_d.is_some(), f.x1.is_some(), f.x.is_some(), f.x_star.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given > 1 {
        return Err(config_err("a_d", "give only one of a_d, x1, x, x_star"));
    }
    if let Some(a) = f.a_d {
        p.a_d = a;
    } else if let Some(x1) = f.x1 {
        p.set_x1(x1);
    } else if let Some(x) = f.x {
        p.set_x(x);
    } else if let Some(xs) = f.x_star {
        let g = p.gamma();
        p.set_x(xs * (1.0 - g).sqrt());
    } else if need_amplitude {
        return Err(config_err("a_d", "an amplitude (a_d, x1, x or x_star) is required"));
    }
    Ok(p)
}

fn parse_classifiers(f: &Flags, default: &[ClassifierId]) -> Result<Vec<Classifier>> {
    let ids: Vec<ClassifierId> = match &f.classifier {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| Error::UnknownClassifier(s.to_string())))
            .collect::<Result<_>>()?,
        None => default.to_vec(),
    };
    if ids.is_empty() {
        return Err(config_err("classifier", "must name at least one classifier"));
    }
    Ok(ids
        .into_iter()
        .map(|id| if f.unknown_sigma { Classifier::unknown(id) } else { Classifier::known(id) })
        .collect())
}

impl RunConfig {
    pub fn from_flags(kind: CommandKind, f: &Flags) -> Result<Self> {
        let grid = GridOverrides {
            h: f.grid_h,
            n: f.grid_n,
            threshold: f.grid_threshold,
            c0: f.c0,
        };
        let k_choice = match &f.k_choice {
            Some(s) => s.parse()?,
            None => KChoice::Low,
        };
        let pi = f.pi.unwrap_or(0.5);
        if !(pi > 0.0 && pi < 1.0) {
            return Err(config_err("pi", "pi must lie in (0,1)"));
        }
        let n_reps = f.reps.unwrap_or(200);
        if n_reps < 1 {
            return Err(config_err("reps", "reps must be at least 1"));
        }
        let mut cfg = RunConfig {
            command: kind,
            params: None,
            grid,
            classifiers: Vec::new(),
            k_choice,
            pi,
            n_reps,
            seed: f.seed.unwrap_or(1),
            threads: f.threads.unwrap_or(0),
            out: f.out.clone(),
            format: f.format.unwrap_or(Format::Csv),
            betas: Vec::new(),
            amplitudes: Vec::new(),
            ds: Vec::new(),
            dump: f.dump.clone(),
            record_time: f.record_time,
        };
        match kind {
            CommandKind::Boundary | CommandKind::Selftest => {}
            CommandKind::Simulate | CommandKind::Oracle => {
                let d = require(f.d, "d")?;
                let beta = require(f.beta, "beta")?;
                check_beta(beta)?;
                let p = base_params(f, d, beta, true)?;
                validate_params(&p)?;
                cfg.classifiers = match kind {
                    CommandKind::Simulate => parse_classifiers(f, &[ClassifierId::Adaptive])?,
                    _ => match &f.classifier {
                        Some(_) => parse_classifiers(f, &[])?,
                        None => Vec::new(),
                    },
                };
                if kind == CommandKind::Simulate && cfg.classifiers.len() != 1 {
                    return Err(config_err("classifier", "simulate takes exactly one classifier"));
                }
                cfg.params = Some(p);
            }
            CommandKind::Sweep => {
                cfg.betas = match (&f.betas, f.beta) {
                    (Some(list), _) => parse_list("betas", list)?,
                    (None, Some(b)) => vec![b],
                    (None, None) => return Err(config_err("beta", "betas (or beta) is required")),
                };
                for &b in &cfg.betas {
                    check_beta(b)?;
                }
                cfg.ds = match (&f.ds, f.d) {
                    (Some(list), _) => parse_list("ds", list)?,
                    (None, Some(d)) => vec![d],
                    (None, None) => return Err(config_err("d", "ds (or d) is required")),
                };
                cfg.amplitudes = match &f.amplitudes {
                    Some(list) => parse_list("amplitudes", list)?,
                    None => match (f.x1, f.x_star) {
                        (Some(v), None) | (None, Some(v)) => vec![v],
                        _ => return Err(config_err("amplitudes", "amplitudes (or one x1 / x_star) is required")),
                    },
                };
                if cfg.betas.is_empty() || cfg.ds.is_empty() || cfg.amplitudes.is_empty() {
                    return Err(config_err("sweep", "every sweep axis needs at least one value"));
                }
                let mut base_flags = f.clone();
                base_flags.x1 = None;
                base_flags.x_star = None;
                base_flags.a_d = None;
                base_flags.x = None;
                let p = base_params(&base_flags, cfg.ds[0], cfg.betas[0], false)?;
                cfg.classifiers = parse_classifiers(f, &[ClassifierId::Adaptive])?;
                cfg.params = Some(p);
            }
        }
        Ok(cfg)
    }
}

fn validate_params(p: &ModelParams) -> Result<()> {
    p.validate().map_err(|e| match e {
        Error::Domain { name, constraint, value } => {
            config_err(name, format!("{name} must {constraint} (got {value})"))
        }
        other => other,
    })
}

pub fn parse_config(kind: CommandKind, flags: &Flags) -> Result<RunConfig> {
    let merged = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            merge_file(flags, &read_config_text(&text, kind)?)?
        }
        None => flags.clone(),
    };
    RunConfig::from_flags(kind, &merged)
}

#[derive(Debug, Serialize)]
struct BoundaryRow {
    beta: f64,
    phi: f64,
}

#[derive(Debug, Serialize)]
struct OracleRow {
    rule: String,
    d: usize,
    m: usize,
    beta: f64,
    a_d: f64,
    pi: f64,
    n_reps: u64,
    r0: f64,
    r1: f64,
    bayes_risk: f64,
    bayes_se: f64,
    dd_index: f64,
    second_moment_bound: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct SelftestRow {
    check: String,
    passed: bool,
    detail: String,
}

fn emit_table<T: Serialize>(rows: &[T], cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    match cfg.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_sweep(result: &SweepResult, cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    match cfg.format {
        Format::Csv => result.write_csv(out),
        Format::Json => {
            writeln!(out, "{}", result.to_json()?)?;
            Ok(())
        }
    }
}

/// Boundary table on `beta = i / 200` over the highly sparse zone `(1/2, 1)`.
pub fn boundary_table() -> Vec<(f64, f64)> {
    (101..200)
        .map(|i| {
            let b = i as f64 / 200.0;
            (b, phi(b).expect("beta in (0,1)"))
        })
        .collect()
}

/// Executes a validated configuration, writing results to `out`. Returns
/// whether every self-test passed (always true for other subcommands).
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    match cfg.command {
        CommandKind::Boundary => {
            let rows: Vec<BoundaryRow> = boundary_table().into_iter().map(|(beta, phi)| BoundaryRow { beta, phi }).collect();
            match cfg.format {
                Format::Csv => {
                    writeln!(out, "beta,phi")?;
                    for r in &rows {
                        writeln!(out, "{},{}", fmt_f64(r.beta), fmt_f64(r.phi))?;
                    }
                }
                Format::Json => emit_table(&rows, cfg, out)?,
            }
            Ok(true)
        }
        CommandKind::Selftest => {
            let checks = selftest::run_all();
            let ok = checks.iter().all(|c| c.passed);
            let rows: Vec<SelftestRow> = checks
                .into_iter()
                .map(|c| SelftestRow {
                    check: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail,
                })
                .collect();
            emit_table(&rows, cfg, out)?;
            Ok(ok)
        }
        CommandKind::Simulate => {
            let p = cfg.params.as_ref().expect("validated");
            let grid = make_grid_with(p, &cfg.grid)?;
            let c = cfg.classifiers[0];
            if let Some(path) = &cfg.dump {
                let mut s = rng::stream(cfg.seed, 0, Purpose::AltData);
                let pattern = gen_pattern(p, cfg.k_choice, &mut s)?;
                let data = gen_dataset(p, &pattern, Hypothesis::H1, &mut s)?;
                data.write_dump(io::BufWriter::new(File::create(path)?))?;
            }
            let est = with_threads(cfg.threads, || estimate_risk(c, p, &grid, cfg.k_choice, cfg.n_reps, cfg.seed))?;
            let row = SweepRow::new(p, cfg.k_choice, c, &grid, &est, cfg.seed, 0)?;
            emit_sweep(&SweepResult { rows: vec![row] }, cfg, out)?;
            Ok(true)
        }
        CommandKind::Sweep => {
            let spec = SweepSpec {
                base: cfg.params.clone().expect("validated"),
                betas: cfg.betas.clone(),
                amplitudes: cfg.amplitudes.clone(),
                ds: cfg.ds.clone(),
                classifiers: cfg.classifiers.clone(),
                grid: cfg.grid,
                n_reps: cfg.n_reps,
                seed: cfg.seed,
                record_time: cfg.record_time,
            };
            let result = with_threads(cfg.threads, || sweep(&spec))?;
            emit_sweep(&result, cfg, out)?;
            Ok(true)
        }
        CommandKind::Oracle => {
            let p = cfg.params.as_ref().expect("validated");
            let grid = if cfg.classifiers.is_empty() {
                None
            } else {
                Some(make_grid_with(p, &cfg.grid)?)
            };
            let results = with_threads(cfg.threads, || {
                compare_bayes(p, cfg.pi, &cfg.classifiers, grid.as_ref(), cfg.n_reps, cfg.seed)
            })?;
            let dd = dd_index(p)?;
            let bound = second_moment_bound(p)?;
            let rows: Vec<OracleRow> = results
                .into_iter()
                .map(|r| OracleRow {
                    rule: r.label,
                    d: p.d,
                    m: p.m,
                    beta: p.beta,
                    a_d: p.a_d,
                    pi: cfg.pi,
                    n_reps: cfg.n_reps,
                    r0: r.estimate.r0,
                    r1: r.estimate.r1,
                    bayes_risk: r.estimate.bayes_risk(cfg.pi),
                    bayes_se: r.estimate.bayes_se(cfg.pi),
                    dd_index: dd,
                    second_moment_bound: bound,
                    seed: cfg.seed,
                })
                .collect();
            emit_table(&rows, cfg, out)?;
            Ok(true)
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (kind, flags) = cli.command.parts();
    let outcome = parse_config(kind, flags).and_then(|cfg| {
        // Print derived quantities to stderr so stdout stays machine-readable.
        if let Some(p) = &cfg.params {
            if let Ok(q) = derive_quantities(p) {
                eprintln!("# x1 = {:.6}, x* = {:.6}, R_d = {:.6}", q.x1, q.x_star, q.r_d);
            }
        }
        match &cfg.out {
            Some(path) => {
                let mut w = io::BufWriter::new(File::create(path)?);
                let ok = run(&cfg, &mut w)?;
                w.flush()?;
                Ok(ok)
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                run(&cfg, &mut w)
            }
        }
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("selftest: some checks failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = read_config_text("[run]\nreps = 100\n[model]\nbeta = 0.6\nd = 64\nx1 = 1\n", CommandKind::Simulate).unwrap();
        let flags = Flags {
            reps: Some(400),
            ..Flags::default()
        };
        let cfg = RunConfig::from_flags(CommandKind::Simulate, &merge_file(&flags, &file).unwrap()).unwrap();
        assert_eq!(cfg.n_reps, 400);
        assert_eq!(cfg.params.unwrap().beta, 0.6);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = read_config_text("[model]\nbetta = 0.5\n", CommandKind::Simulate).unwrap_err();
        assert!(err.to_string().contains("betta"), "{err}");
        assert!(read_config_text("[colours]\nx = 1\n", CommandKind::Simulate).is_err());
    }

    #[test]
    fn other_subcommand_sections_are_ignored() {
        let file = read_config_text("[sweep]\nreps = 7\n[simulate]\nreps = 9\n", CommandKind::Simulate).unwrap();
        assert_eq!(file.get("reps").map(String::as_str), Some("9"));
    }

    #[test]
    fn missing_and_bad_beta() {
        let flags = Flags {
            d: Some(64),
            x1: Some(1.0),
            ..Flags::default()
        };
        let err = RunConfig::from_flags(CommandKind::Simulate, &flags).unwrap_err();
        assert!(err.to_string().contains("beta"), "{err}");
        let flags = Flags {
            beta: Some(1.5),
            ..flags
        };
        let err = RunConfig::from_flags(CommandKind::Simulate, &flags).unwrap_err();
        assert!(err.to_string().contains("beta must lie in (0,1)"), "{err}");
    }

    #[test]
    fn type_mismatch_names_key() {
        let file = read_config_text("d = lots\n", CommandKind::Simulate).unwrap();
        let err = merge_file(&Flags::default(), &file).unwrap_err();
        assert!(err.to_string().contains("d"), "{err}");
    }

    #[test]
    fn boundary_grid() {
        let t = boundary_table();
        assert_eq!(t.len(), 99);
        assert_eq!(t[0].0, 0.505);
        let (b, v) = t[49];
        assert_eq!(b, 0.75);
        assert!((v - 0.70711).abs() < 5e-6);
    }
}
