//! Partial-transpose diagnostics across party splits.

use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, SystemLayout};
use crate::states::make_example_state;

/// A bipartition of all layout labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteSplit {
    pub side0: Vec<String>,
    pub side1: Vec<String>,
}

impl BipartiteSplit {
    /// `side0` as given, `side1` the remaining labels. Rejects splits that
    /// separate a party from any of its subsystems.
    pub fn new<S: AsRef<str>>(layout: &SystemLayout, side0: &[S]) -> Result<Self> {
        let split = Self::raw(layout, side0)?;
        for s in layout.subsystems() {
            let party = s.party.as_deref().ok_or_else(|| {
                Error::InvalidSplit(format!("subsystem `{}` has no party", s.label))
            })?;
            let mine = split.side0.contains(&s.label);
            let separated = layout.subsystems().iter().any(|t| {
                t.party.as_deref() == Some(party) && split.side0.contains(&t.label) != mine
            });
            if separated {
                return Err(Error::InvalidSplit(format!(
                    "party `{party}` is split across both sides"
                )));
            }
        }
        Ok(split)
    }

    /// Any nonempty proper subset of labels, ignoring party ownership.
    pub fn raw<S: AsRef<str>>(layout: &SystemLayout, side0: &[S]) -> Result<Self> {
        let mut chosen = Vec::new();
        for l in side0 {
            let l = l.as_ref();
            layout.position(l)?;
            if chosen.iter().any(|c: &String| c == l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            chosen.push(l.to_string());
        }
        let labels = layout.labels();
        let side0: Vec<String> = labels
            .iter()
            .filter(|l| chosen.iter().any(|c| c == *l))
            .map(|l| l.to_string())
            .collect();
        let side1: Vec<String> = labels
            .iter()
            .filter(|l| !chosen.iter().any(|c| c == *l))
            .map(|l| l.to_string())
            .collect();
        if side0.is_empty() || side1.is_empty() {
            return Err(Error::InvalidSplit("both sides must be nonempty".into()));
        }
        Ok(Self { side0, side1 })
    }

    /// The split putting every subsystem of `parties` on side 0.
    pub fn from_parties<S: AsRef<str>>(layout: &SystemLayout, parties: &[S]) -> Result<Self> {
        let known = layout.parties();
        for p in parties {
            if !known.contains(&p.as_ref()) {
                return Err(Error::InvalidSplit(format!(
                    "unknown party `{}`",
                    p.as_ref()
                )));
            }
        }
        let side0: Vec<&str> = layout
            .subsystems()
            .iter()
            .filter(|s| {
                s.party
                    .as_deref()
                    .is_some_and(|p| parties.iter().any(|q| q.as_ref() == p))
            })
            .map(|s| s.label.as_str())
            .collect();
        Self::new(layout, &side0)
    }

    pub fn describe(&self) -> String {
        format!("{} | {}", self.side0.join(","), self.side1.join(","))
    }
}

/// All `2^{p-1} - 1` party-respecting bipartitions. Side 0 never holds the
/// last party; ordered by side-0 size, then by party order.
pub fn enumerate_splits(layout: &SystemLayout) -> Result<Vec<BipartiteSplit>> {
    if let Some(s) = layout.subsystems().iter().find(|s| s.party.is_none()) {
        return Err(Error::InvalidSplit(format!(
            "subsystem `{}` has no party",
            s.label
        )));
    }
    let parties = layout.parties();
    if parties.len() < 2 {
        return Err(Error::InvalidSplit("need at least two parties".into()));
    }
    let free = parties.len() - 1;
    let mut masks: Vec<usize> = (1..1usize << free).collect();
    let members = |m: usize| (0..free).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>();
    masks.sort_by_key(|&m| (m.count_ones(), members(m)));
    masks
        .into_iter()
        .map(|mask| {
            let chosen: Vec<&str> = (0..free)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| parties[k])
                .collect();
            BipartiteSplit::from_parties(layout, &chosen)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativityReport {
    pub split: String,
    pub trace_norm_pt: f64,
    pub negativity: f64,
    pub log_negativity: f64,
    pub min_eigenvalue: f64,
}

/// Spectrum of `ρ^{T_side0}`, ascending.
pub fn partial_transpose_spectrum(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<Vec<f64>> {
    eigvalsh(&rho.partial_transpose(&split.side0)?)
}

pub fn negativity_report(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<NegativityReport> {
    let spectrum = partial_transpose_spectrum(rho, split)?;
    let trace_norm_pt: f64 = spectrum.iter().map(|x| x.abs()).sum();
    Ok(NegativityReport {
        split: split.describe(),
        trace_norm_pt,
        negativity: (trace_norm_pt - 1.0) / 2.0,
        log_negativity: trace_norm_pt.log2(),
        min_eigenvalue: spectrum.first().copied().unwrap_or(0.0),
    })
}

/// Negative partial transpose across `split`.
pub fn is_npt(rho: &DensityMatrix, split: &BipartiteSplit, tol: f64) -> Result<bool> {
    Ok(partial_transpose_spectrum(rho, split)?
        .first()
        .is_some_and(|&m| m < -tol))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub a1: f64,
    pub trace_norm_pt: f64,
    /// `(d + 2) / d`
    pub expected: f64,
    pub deviation: f64,
    pub log_negativity: f64,
}

/// `‖ρ^{T_{AA'}}‖₁` of the Werner-flag example for every `(d, a1)`, rows
/// ordered by `d` then `a1`.
pub fn werner_example_sweep(d_values: &[usize], a1_values: &[f64]) -> Result<Vec<SweepRow>> {
    if let Some(a) = a1_values.iter().find(|&&a| !(a > 0.0 && a < 0.5)) {
        return Err(Error::InvalidParameter(format!(
            "a1 = {a} is not in (0, 1/2)"
        )));
    }
    let mut ds = d_values.to_vec();
    ds.sort_unstable();
    let mut a1s = a1_values.to_vec();
    a1s.sort_by(|a, b| a.partial_cmp(b).expect("finite a1"));
    let mut rows = Vec::new();
    for &d in &ds {
        for &a1 in &a1s {
            let rho = make_example_state(a1, 0.5 - a1, d)?;
            let split = BipartiteSplit::from_parties(rho.layout(), &["A"])?;
            let report = negativity_report(&rho, &split)?;
            let expected = (d as f64 + 2.0) / d as f64;
            rows.push(SweepRow {
                d,
                a1,
                trace_norm_pt: report.trace_norm_pt,
                expected,
                deviation: (report.trace_norm_pt - expected).abs(),
                log_negativity: report.log_negativity,
            });
        }
    }
    Ok(rows)
}

/// Plain-text rendering of sweep rows.
pub fn format_sweep_table(rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{:>4} {:>6} {:>20} {:>20} {:>10} {:>14}\n",
        "d", "a1", "trace_norm_pt", "(d+2)/d", "deviation", "log_negativity"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>6.3} {:>20.15} {:>20.15} {:>10.2e} {:>14.10}\n",
            r.d, r.a1, r.trace_norm_pt, r.expected, r.deviation, r.log_negativity
        ));
    }
    out
}
