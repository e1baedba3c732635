//! Browser bindings for the Werner-flag example.
//!
//! Every export returns a JSON string so the page can stay plain JavaScript.

use secret_states::entanglement::{enumerate_splits, negativity_report, werner_example_sweep};
use secret_states::states::make_example_state;
use secret_states::verifier::{
    check_block_criterion, default_chain, verify_secret_sharing, DEFAULT_TOL,
};
use secret_states::DensityMatrix;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_D: usize = 6;

fn noisy_example(d: usize, a1: f64, noise: f64) -> Result<DensityMatrix, String> {
    if !(2..=MAX_D).contains(&d) {
        return Err(format!("d must lie in 2..={MAX_D}, got {d}"));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(format!("noise must lie in [0, 1], got {noise}"));
    }
    let rho = make_example_state(a1, 0.5 - a1, d).map_err(|e| e.to_string())?;
    let flat = DensityMatrix::maximally_mixed(rho.layout().clone());
    rho.mix(&flat, noise).map_err(|e| e.to_string())
}

/// Dealer-split trace norm of the partial transpose for `d = 2..=d_max`.
pub fn sweep_json(d_max: usize, a1: f64) -> Result<String, String> {
    if !(2..=MAX_D).contains(&d_max) {
        return Err(format!("d_max must lie in 2..={MAX_D}, got {d_max}"));
    }
    let ds: Vec<usize> = (2..=d_max).collect();
    let rows = werner_example_sweep(&ds, &[a1]).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// Runs both verifiers on the example mixed with white noise.
pub fn verify_json(d: usize, a1: f64, noise: f64) -> Result<String, String> {
    let rho = noisy_example(d, a1, noise)?;
    let register: Vec<String> = rho
        .layout()
        .register()
        .into_iter()
        .map(String::from)
        .collect();
    let chain = default_chain(register.len()).map_err(|e| e.to_string())?;
    let block =
        check_block_criterion(&rho, &register, &chain, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let semantic =
        verify_secret_sharing(&rho, &register, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let out = json!({
        "d": d,
        "a1": a1,
        "noise": noise,
        "accepted": block.accepted && semantic.accepted,
        "block": block,
        "semantic": semantic,
    });
    Ok(out.to_string())
}

/// Negativity across every party split of the noisy example.
pub fn negativities_json(d: usize, a1: f64, noise: f64) -> Result<String, String> {
    let rho = noisy_example(d, a1, noise)?;
    let splits = enumerate_splits(rho.layout()).map_err(|e| e.to_string())?;
    let reports = splits
        .iter()
        .map(|s| negativity_report(&rho, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&reports).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn werner_sweep(d_max: usize, a1: f64) -> Result<String, JsValue> {
    sweep_json(d_max, a1).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify_example(d: usize, a1: f64, noise: f64) -> Result<String, JsValue> {
    verify_json(d, a1, noise).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn split_negativities(d: usize, a1: f64, noise: f64) -> Result<String, JsValue> {
    negativities_json(d, a1, noise).map_err(|e| JsValue::from_str(&e))
}
