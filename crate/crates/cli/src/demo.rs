//! End-to-end reproduction of the Werner-flag example.

use secret_states::distill::{check_private_state, reduce_to_private};
use secret_states::entanglement::{
    enumerate_splits, format_sweep_table, negativity_report, werner_example_sweep,
};
use secret_states::states::make_example_state;
use secret_states::verifier::{self, default_chain, DEFAULT_TOL};
use serde_json::{json, Value};

use crate::{CmdResult, Failure};

const D_VALUES: [usize; 5] = [2, 3, 4, 5, 6];
const A1_VALUES: [f64; 3] = [0.1, 0.25, 0.4];
const LAW_TOL: f64 = 1e-8;
const NPT_TOL: f64 = 1e-9;

struct Scorecard {
    rows: Vec<(String, bool, String)>,
}

impl Scorecard {
    fn record(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.rows.push((name.into(), pass, detail.into()));
    }

    fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.1)
    }
}

pub(crate) fn run(as_json: bool) -> CmdResult {
    let mut card = Scorecard { rows: Vec::new() };
    let mut extra = serde_json::Map::new();

    let mut verdicts = Vec::new();
    for &d in &D_VALUES {
        for &a1 in &A1_VALUES {
            let rho = make_example_state(a1, 0.5 - a1, d)?;
            let register = rho.layout().register();
            let block =
                verifier::check_block_criterion(&rho, &register, &default_chain(3)?, DEFAULT_TOL)?;
            let semantic = verifier::verify_secret_sharing(&rho, &register, DEFAULT_TOL)?;
            card.record(
                format!("verify example d={d} a1={a1}"),
                block.accepted && semantic.accepted,
                format!(
                    "block {} / semantic {}, max violation {:.2e}",
                    verdict(block.accepted),
                    verdict(semantic.accepted),
                    block.max_violation().max(semantic.max_violation())
                ),
            );
            verdicts.push(
                json!({"d": d, "a1": a1, "block": block.accepted, "semantic": semantic.accepted}),
            );
        }
    }
    extra.insert("verification".into(), Value::Array(verdicts));

    let rows = werner_example_sweep(&D_VALUES, &A1_VALUES)?;
    let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    card.record(
        "trace norm law (d+2)/d",
        worst <= LAW_TOL,
        format!("max deviation {worst:.2e} over {} rows", rows.len()),
    );
    let decreasing = A1_VALUES.iter().all(|&a1| {
        let col: Vec<f64> = rows
            .iter()
            .filter(|r| r.a1 == a1)
            .map(|r| r.log_negativity)
            .collect();
        col.windows(2).all(|w| w[1] < w[0])
    });
    card.record("log-negativity decreasing in d", decreasing, "for every a1");

    let rho = make_example_state(0.25, 0.25, 2)?;
    let branches = reduce_to_private(&rho)?;
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let mut private_ok = branches.len() == 2;
    for b in &branches {
        let c = check_private_state(&b.post_state, LAW_TOL, 1e-10)?;
        private_ok &= c.accepted;
        card.record(
            format!("reduction branch {} is private", b.result),
            c.accepted,
            format!(
                "p={:.12}, max norm deviation {:.2e}",
                b.probability, c.max_norm_deviation
            ),
        );
    }
    card.record(
        "reduction probabilities sum to 1",
        private_ok && (total - 1.0).abs() <= 1e-9,
        format!("total {total:.12}"),
    );

    let mut npt_rows = Vec::new();
    for split in enumerate_splits(rho.layout())? {
        let r = negativity_report(&rho, &split)?;
        card.record(
            format!("NPT across {}", r.split),
            r.min_eigenvalue < -NPT_TOL,
            format!("min eigenvalue {:.6e}", r.min_eigenvalue),
        );
        npt_rows.push(r);
    }

    let pass = card.all_pass();
    if as_json {
        let checks: Vec<Value> = card
            .rows
            .iter()
            .map(|(name, ok, detail)| json!({"check": name, "pass": ok, "detail": detail}))
            .collect();
        let mut out = serde_json::Map::new();
        out.insert("pass".into(), json!(pass));
        out.insert("checks".into(), Value::Array(checks));
        out.insert(
            "sweep".into(),
            serde_json::to_value(&rows).map_err(json_failure)?,
        );
        out.insert(
            "negativity".into(),
            serde_json::to_value(&npt_rows).map_err(json_failure)?,
        );
        out.extend(extra);
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(out)).map_err(json_failure)?
        );
    } else {
        print!("{}", format_sweep_table(&rows));
        println!();
        for (name, ok, detail) in &card.rows {
            println!("{} {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        }
        let failed = card.rows.iter().filter(|r| !r.1).count();
        println!("{} checks, {failed} failed", card.rows.len());
    }
    Ok(pass)
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accept"
    } else {
        "reject"
    }
}

fn json_failure(e: serde_json::Error) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}
