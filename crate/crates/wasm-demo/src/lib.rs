//! Browser bindings for the boundary curve, regime lookup and a small
//! Monte Carlo risk estimate. Results cross the boundary as JSON strings.

use serde_json::json;
use sparsebound::classifiers::{make_grid, Classifier, ClassifierId};
use sparsebound::datagen::KChoice;
use sparsebound::model::{boundary_gap, derive_quantities, phi, regime, ModelParams};
use sparsebound::risk::estimate_risk;
use wasm_bindgen::prelude::*;

/// Largest replicate count accepted from the page; one estimate must not
/// block the main thread for long.
pub const MAX_REPS: u32 = 2000;

/// `n` samples of the boundary on the open interval, flattened as
/// `[beta_0, phi_0, beta_1, phi_1, ...]`.
#[wasm_bindgen]
pub fn boundary_curve(n: u32) -> Vec<f64> {
    let n = n.max(2);
    let mut out = Vec::with_capacity(2 * n as usize);
    for i in 0..n {
        let beta = 0.5 + 0.5 * (f64::from(i) + 0.5) / f64::from(n);
        out.push(beta);
        out.push(phi(beta).expect("beta inside (1/2,1)"));
    }
    out
}

fn params(d: u32, m: u32, beta: f64, x1: f64) -> Result<ModelParams, String> {
    let p = ModelParams::from_x1(d as usize, m as usize, beta, x1);
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

/// Regime, boundary gap and derived quantities at one point.
#[wasm_bindgen]
pub fn regime_at(d: u32, m: u32, beta: f64, x1: f64) -> Result<String, String> {
    let p = params(d, m, beta, x1)?;
    let r = regime(&p).map_err(|e| e.to_string())?;
    let q = derive_quantities(&p).map_err(|e| e.to_string())?;
    let gap = boundary_gap(&p).ok();
    Ok(json!({
        "tag": r.tag,
        "side": r.boundary_side,
        "gap": gap,
        "phi": phi(beta).ok(),
        "a_d": p.a_d,
        "derived": q,
    })
    .to_string())
}

/// Worst-case risk over both pattern sizes for one known-sigma rule.
#[wasm_bindgen]
pub fn risk_point(classifier: &str, d: u32, m: u32, beta: f64, x1: f64, reps: u32, seed: u32) -> Result<String, String> {
    let id: ClassifierId = classifier.parse().map_err(|e: sparsebound::Error| e.to_string())?;
    let p = params(d, m, beta, x1)?;
    let grid = make_grid(&p).map_err(|e| e.to_string())?;
    let reps = u64::from(reps.clamp(1, MAX_REPS));
    let mut worst = None;
    for k in [KChoice::Low, KChoice::High] {
        let est = estimate_risk(Classifier::known(id), &p, &grid, k, reps, u64::from(seed)).map_err(|e| e.to_string())?;
        if worst.as_ref().is_none_or(|w: &sparsebound::RiskEstimate| est.max_risk > w.max_risk) {
            worst = Some(est);
        }
    }
    let est = worst.expect("two estimates");
    Ok(json!({
        "classifier": id.as_str(),
        "reps": reps,
        "r0": est.r0,
        "r1": est.r1,
        "r0_ci": est.r0_ci,
        "r1_ci": est.r1_ci,
        "max_risk": est.max_risk,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn curve_is_flattened_and_increasing() {
        let c = boundary_curve(50);
        assert_eq!(c.len(), 100);
        for w in c.chunks(2).collect::<Vec<_>>().windows(2) {
            assert!(w[1][0] > w[0][0] && w[1][1] > w[0][1]);
        }
        assert!(c.chunks(2).all(|p| p[0] > 0.5 && p[0] < 1.0));
    }

    #[test]
    fn regime_reports_side_of_curve() {
        let above: Value = serde_json::from_str(&regime_at(4096, 1, 0.75, 1.2).unwrap()).unwrap();
        assert_eq!(above["tag"], "HighlySparse");
        assert_eq!(above["side"], "Above");
        let gap = above["gap"].as_f64().unwrap();
        assert!((gap - (1.2 - 0.5f64.sqrt())).abs() < 1e-12);
        let below: Value = serde_json::from_str(&regime_at(4096, 1, 0.75, 0.3).unwrap()).unwrap();
        assert_eq!(below["side"], "Below");
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(regime_at(4096, 1, 1.5, 1.0).is_err());
        assert!(risk_point("nope", 256, 1, 0.6, 1.0, 10, 1).is_err());
    }

    #[test]
    fn risk_is_deterministic_and_in_range() {
        let a = risk_point("max", 256, 1, 0.6, 2.0, 50, 3).unwrap();
        assert_eq!(a, risk_point("max", 256, 1, 0.6, 2.0, 50, 3).unwrap());
        let v: Value = serde_json::from_str(&a).unwrap();
        let r = v["max_risk"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&r));
        assert_eq!(v["reps"], 50);
    }
}
