//! Two independent decisions of the secret-sharing property.
//!
//! The *block criterion* looks only at the dealer/player register blocks:
//! every block touching an odd-parity index must vanish and each block along
//! a [`NormChain`] must have trace norm `2^{-(n-1)}`. The *semantic* check
//! measures the register statistics and compares the eavesdropper's
//! conditional states obtained from a purification. The two meet through
//! `‖X_{I,J}‖₁ = √(p_I p_J) F(ρ_I^E, ρ_J^E)`, which
//! [`fidelity_identity_residuals`] evaluates directly.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ops, sqrt_psd, trace_norm, ComplexMatrix, SystemLayout};
use crate::states::{purify, ParityIndex, EVE};

/// Default acceptance tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;

const ZERO_PROBABILITY: f64 = 1e-12;

impl Serialize for ParityIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Register blocks `⟨I|ρ|J⟩` as operators on the remaining systems.
#[derive(Clone, Debug)]
pub struct BlockTable {
    pub n: usize,
    pub block_dim: usize,
    /// Layout of the systems each block acts on.
    pub rest: SystemLayout,
    pub blocks: BTreeMap<(ParityIndex, ParityIndex), ComplexMatrix>,
}

impl BlockTable {
    pub fn get(&self, i: ParityIndex, j: ParityIndex) -> &ComplexMatrix {
        &self.blocks[&(i, j)]
    }

    /// Diagonal block traces `p_I`.
    pub fn probabilities(&self) -> BTreeMap<ParityIndex, f64> {
        self.blocks
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|((i, _), b)| (*i, b.trace().re))
            .collect()
    }

    /// Largest entry over blocks whose row or column index has odd parity.
    pub fn support_violation(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|((i, j), _)| !i.is_even() || !j.is_even())
            .map(|(_, b)| b.max_abs())
            .fold(0.0, f64::max)
    }
}

fn check_register<S: AsRef<str>>(layout: &SystemLayout, register: &[S]) -> Result<Vec<String>> {
    if register.is_empty() {
        return Err(Error::InvalidParameter("empty register".into()));
    }
    for l in register {
        layout.require_qubit(l.as_ref())?;
    }
    let labels: Vec<String> = register.iter().map(|s| s.as_ref().to_string()).collect();
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(labels)
}

/// Permutes the register to the front and returns the reordered matrix with
/// the layout of the remaining systems.
fn register_first<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
) -> Result<(ComplexMatrix, SystemLayout, usize)> {
    let labels = check_register(rho.layout(), register)?;
    let mut order = labels.clone();
    order.extend(
        rho.layout()
            .labels()
            .into_iter()
            .filter(|l| !labels.iter().any(|r| r == l))
            .map(String::from),
    );
    let (m, layout) = ops::permute_systems(rho.matrix(), rho.layout(), &order)?;
    let rest_positions: Vec<usize> = (labels.len()..layout.len()).collect();
    let rest = if rest_positions.is_empty() {
        SystemLayout::single("trivial", 1)
    } else {
        layout.select(&rest_positions)
    };
    Ok((m, rest, labels.len()))
}

pub fn extract_blocks<S: AsRef<str>>(rho: &DensityMatrix, register: &[S]) -> Result<BlockTable> {
    let (m, rest, n) = register_first(rho, register)?;
    let k = rest.total_dim();
    let all = ParityIndex::all(n)?;
    let mut blocks = BTreeMap::new();
    for &i in &all {
        for &j in &all {
            blocks.insert((i, j), m.submatrix(i.value() * k, j.value() * k, k, k));
        }
    }
    Ok(BlockTable {
        n,
        block_dim: k,
        rest,
        blocks,
    })
}

/// Ordered off-diagonal block pairs whose trace norms are tested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormChain {
    pub n: usize,
    pub pairs: Vec<(ParityIndex, ParityIndex)>,
}

impl NormChain {
    /// Accepts a path `I_0 – I_1 – … – I_m` through every even-parity index
    /// exactly once.
    ///
    /// A spanning tree is not enough: with the star centred on `0…0` a state
    /// with `p_{0…0} = ½` can still reach the target norm on every edge. A
    /// path on `2^{n-1}` vertices always contains a perfect matching, which
    /// pins every `p_I` to `2^{-(n-1)}`.
    pub fn new(n: usize, pairs: Vec<(ParityIndex, ParityIndex)>) -> Result<Self> {
        let even = ParityIndex::even(n)?;
        if pairs.len() + 1 != even.len() {
            return Err(Error::InvalidParameter(format!(
                "chain for {n} parties needs {} pairs, got {}",
                even.len() - 1,
                pairs.len()
            )));
        }
        let mut visited = vec![pairs[0].0];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if a.len() != n || b.len() != n || !a.is_even() || !b.is_even() {
                return Err(Error::InvalidParameter(format!(
                    "chain pair ({a},{b}) is not an even-parity pair of length {n}"
                )));
            }
            if k > 0 && pairs[k - 1].1 != a {
                return Err(Error::InvalidParameter(format!(
                    "chain breaks between ({},{}) and ({a},{b})",
                    pairs[k - 1].0,
                    pairs[k - 1].1
                )));
            }
            if visited.contains(&b) {
                return Err(Error::InvalidParameter(format!("chain revisits {b}")));
            }
            visited.push(b);
        }
        Ok(Self { n, pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Consecutive even-parity strings in lexicographic order; for three parties
/// `(000,011), (011,101), (101,110)`.
pub fn default_chain(n: usize) -> Result<NormChain> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "chain needs n ≥ 2, got {n}"
        )));
    }
    let even = ParityIndex::even(n)?;
    let pairs = even.windows(2).map(|w| (w[0], w[1])).collect();
    NormChain::new(n, pairs)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockNorm {
    pub pair: (ParityIndex, ParityIndex),
    pub norm: f64,
    /// `|norm − 2^{-(n-1)}|`
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairFidelity {
    pub pair: (ParityIndex, ParityIndex),
    pub fidelity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Block,
    Semantic,
}

/// Outcome of one verification run, with every magnitude that went into
/// the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub n: usize,
    pub tolerance: f64,
    pub accepted: bool,
    pub statistics: BTreeMap<ParityIndex, f64>,
    /// `max_I |p_I − target_I|`, target `2^{-(n-1)}` on even and `0` on odd parity.
    pub statistics_violation: f64,
    pub support_violation: f64,
    pub block_norms: Vec<BlockNorm>,
    pub eve_fidelities: Vec<PairFidelity>,
    /// Set by the semantic run: the block criterion's verdict on the same state.
    pub block_criterion_accepted: Option<bool>,
    /// Why the semantic run stopped early, if it did.
    pub note: Option<String>,
}

impl VerificationReport {
    /// Largest violation magnitude among the checks this mode decides on.
    pub fn max_violation(&self) -> f64 {
        let norms = self
            .block_norms
            .iter()
            .map(|b| b.deviation)
            .fold(0.0, f64::max);
        let fid = self
            .eve_fidelities
            .iter()
            .map(|p| 1.0 - p.fidelity)
            .fold(0.0, f64::max);
        match self.mode {
            Mode::Block => self.support_violation.max(norms),
            Mode::Semantic => self
                .statistics_violation
                .max(self.support_violation)
                .max(fid),
        }
    }
}

/// Target register statistic `2^{-(n-1)}`.
pub fn uniform_weight(n: usize) -> f64 {
    1.0 / (1u64 << (n - 1)) as f64
}

pub fn check_block_criterion<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
    chain: &NormChain,
    tol: f64,
) -> Result<VerificationReport> {
    let table = extract_blocks(rho, register)?;
    if chain.n != table.n {
        return Err(Error::InvalidParameter(format!(
            "chain is for {} parties, register has {}",
            chain.n, table.n
        )));
    }
    let target = uniform_weight(table.n);
    let block_norms: Vec<BlockNorm> = chain
        .pairs
        .iter()
        .map(|&(i, j)| {
            let norm = trace_norm(table.get(i, j));
            BlockNorm {
                pair: (i, j),
                norm,
                deviation: (norm - target).abs(),
            }
        })
        .collect();
    let support_violation = table.support_violation();
    let statistics = table.probabilities();
    let accepted = support_violation <= tol && block_norms.iter().all(|b| b.deviation <= tol);
    Ok(VerificationReport {
        mode: Mode::Block,
        n: table.n,
        tolerance: tol,
        accepted,
        statistics_violation: statistics_violation(&statistics, table.n),
        statistics,
        support_violation,
        block_norms,
        eve_fidelities: Vec::new(),
        block_criterion_accepted: Some(accepted),
        note: None,
    })
}

fn statistics_violation(stats: &BTreeMap<ParityIndex, f64>, n: usize) -> f64 {
    let target = uniform_weight(n);
    stats
        .iter()
        .map(|(i, &p)| {
            if i.is_even() {
                (p - target).abs()
            } else {
                p.abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Register outcome probabilities `p_I = tr⟨I|ρ|I⟩`.
pub fn check_statistics<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
) -> Result<BTreeMap<ParityIndex, f64>> {
    let (m, rest, n) = register_first(rho, register)?;
    let k = rest.total_dim();
    Ok(ParityIndex::all(n)?
        .into_iter()
        .map(|i| {
            let base = i.value() * k;
            let p = (0..k).map(|a| m[(base + a, base + a)].re).sum();
            (i, p)
        })
        .collect())
}

/// Whether `stats` are the unbiased, perfectly correlated distribution.
pub fn statistics_pass(stats: &BTreeMap<ParityIndex, f64>, n: usize, tol: f64) -> bool {
    statistics_violation(stats, n) <= tol
}

/// Eavesdropper state after the register reads `I`.
#[derive(Clone, Debug)]
pub struct EveConditional {
    pub outcome: ParityIndex,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// Conditional Eve states for every even-parity outcome, from the canonical
/// eigenbasis purification.
pub fn eve_conditional_states<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
) -> Result<Vec<EveConditional>> {
    let labels = check_register(rho.layout(), register)?;
    let n = labels.len();
    let psi = purify(rho)?;
    let mut order = labels.clone();
    order.extend(
        psi.layout()
            .labels()
            .into_iter()
            .filter(|l| !labels.iter().any(|r| r == l))
            .map(String::from),
    );
    let (amps, layout) = ops::permute_vector(psi.amplitudes(), psi.layout(), &order)?;
    let rest = layout.select(&(n..layout.len()).collect::<Vec<_>>());
    let segment = rest.total_dim();
    let mut out = Vec::new();
    for i in ParityIndex::even(n)? {
        let slice = &amps[i.value() * segment..(i.value() + 1) * segment];
        let p: f64 = slice.iter().map(|z| z.norm_sqr()).sum();
        if p <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(i.to_string()));
        }
        let (m, eve_layout) = ops::reduced_from_vector(slice, &rest, &[EVE])?;
        out.push(EveConditional {
            outcome: i,
            probability: p,
            state: DensityMatrix::unchecked(m.scale(1.0 / p), eve_layout)?,
        });
    }
    Ok(out)
}

/// Pairwise fidelities `F(ρ_I^E, ρ_J^E)` for `I < J`, sorted by pair.
pub fn check_eve_blindness<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
) -> Result<Vec<PairFidelity>> {
    let conditionals = eve_conditional_states(rho, register)?;
    pairwise_fidelities(&conditionals)
}

fn pairwise_fidelities(conditionals: &[EveConditional]) -> Result<Vec<PairFidelity>> {
    let roots = conditionals
        .iter()
        .map(|c| sqrt_psd(c.state.matrix()))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for a in 0..conditionals.len() {
        for b in a + 1..conditionals.len() {
            out.push(PairFidelity {
                pair: (conditionals[a].outcome, conditionals[b].outcome),
                fidelity: trace_norm(&(&roots[a] * &roots[b])),
            });
        }
    }
    Ok(out)
}

/// Semantic decision: unbiased perfectly correlated statistics and
/// identical eavesdropper states for every outcome.
pub fn verify_secret_sharing<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
    tol: f64,
) -> Result<VerificationReport> {
    let table = extract_blocks(rho, register)?;
    let n = table.n;
    let statistics = table.probabilities();
    let stat_violation = statistics_violation(&statistics, n);
    let support_violation = table.support_violation();
    let block = check_block_criterion(rho, register, &default_chain(n)?, tol)?;

    let mut note = None;
    let mut eve_fidelities = Vec::new();
    let mut accepted = stat_violation <= tol && support_violation <= tol;
    if accepted {
        match check_eve_blindness(rho, register) {
            Ok(f) => {
                accepted = f.iter().all(|p| p.fidelity >= 1.0 - tol);
                eve_fidelities = f;
            }
            Err(Error::ZeroProbability(i)) => {
                accepted = false;
                note = Some(format!("outcome {i} has zero probability"));
            }
            Err(e) => return Err(e),
        }
    } else {
        note = Some("register statistics are not uniform over even parity".into());
    }
    Ok(VerificationReport {
        mode: Mode::Semantic,
        n,
        tolerance: tol,
        accepted,
        statistics,
        statistics_violation: stat_violation,
        support_violation,
        block_norms: block.block_norms,
        eve_fidelities,
        block_criterion_accepted: Some(block.accepted),
        note,
    })
}

/// One row of the block-norm / fidelity identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityResidual {
    pub pair: (ParityIndex, ParityIndex),
    pub block_norm: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// `|‖X_{I,J}‖₁ − √(p_I p_J) F(ρ_I^E, ρ_J^E)|` for every even-parity pair `I < J`.
pub fn fidelity_identity_residuals<S: AsRef<str>>(
    rho: &DensityMatrix,
    register: &[S],
) -> Result<Vec<IdentityResidual>> {
    let table = extract_blocks(rho, register)?;
    let conditionals = eve_conditional_states(rho, register)?;
    let fidelities = pairwise_fidelities(&conditionals)?;
    let prob: BTreeMap<ParityIndex, f64> = conditionals
        .iter()
        .map(|c| (c.outcome, c.probability))
        .collect();
    Ok(fidelities
        .into_iter()
        .map(|pf| {
            let (i, j) = pf.pair;
            let block_norm = trace_norm(table.get(i, j));
            let predicted = (prob[&i] * prob[&j]).sqrt() * pf.fidelity;
            IdentityResidual {
                pair: (i, j),
                block_norm,
                predicted,
                residual: (block_norm - predicted).abs(),
            }
        })
        .collect())
}
