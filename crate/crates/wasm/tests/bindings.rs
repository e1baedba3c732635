use secret_states_wasm::{negativities_json, sweep_json, verify_json};
use serde_json::Value;

#[test]
fn sweep_matches_law() {
    let rows: Value = serde_json::from_str(&sweep_json(6, 0.25).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let d = r["d"].as_f64().unwrap();
        assert!((r["trace_norm_pt"].as_f64().unwrap() - (d + 2.0) / d).abs() <= 1e-8);
    }
}

#[test]
fn clean_example_verifies_and_noise_breaks_it() {
    let clean: Value = serde_json::from_str(&verify_json(3, 0.1, 0.0).unwrap()).unwrap();
    assert_eq!(clean["accepted"], Value::Bool(true));
    let noisy: Value = serde_json::from_str(&verify_json(3, 0.1, 0.05).unwrap()).unwrap();
    assert_eq!(noisy["accepted"], Value::Bool(false));
    assert_eq!(noisy["block"]["accepted"], noisy["semantic"]["accepted"]);
}

#[test]
fn negativities_cover_three_splits() {
    let reports: Value = serde_json::from_str(&negativities_json(2, 0.25, 0.0).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports
        .iter()
        .all(|r| r["negativity"].as_f64().unwrap() > 1e-9));
    let flat: Value = serde_json::from_str(&negativities_json(2, 0.25, 1.0).unwrap()).unwrap();
    assert!(flat
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["negativity"].as_f64().unwrap() <= 1e-9));
}

#[test]
fn out_of_range_inputs_are_errors() {
    assert!(sweep_json(9, 0.25).is_err());
    assert!(verify_json(2, 0.7, 0.0).is_err());
    assert!(verify_json(2, 0.25, 1.5).is_err());
    assert!(negativities_json(1, 0.25, 0.0).is_err());
}
