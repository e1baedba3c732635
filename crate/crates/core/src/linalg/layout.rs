use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One tensor factor of a multipartite Hilbert space.
///
/// `party` names the participant holding the subsystem. A register qubit is
/// a qubit whose label equals its party name (`A` held by `A`); primed
/// ancillas carry their owner's name (`A'` held by `A`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub party: Option<String>,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
            party: None,
        }
    }

    pub fn owned(label: impl Into<String>, dim: usize, party: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            dim,
            party: Some(party.into()),
        }
    }

    /// A register qubit owned by the party of the same name.
    pub fn register_qubit(label: impl Into<String>) -> Self {
        let label = label.into();
        Self {
            party: Some(label.clone()),
            label,
            dim: 2,
        }
    }

    pub fn is_register_qubit(&self) -> bool {
        self.dim == 2 && self.party.as_deref() == Some(self.label.as_str())
    }
}

/// Ordered list of labelled subsystems. The first subsystem is the slowest
/// varying tensor index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Subsystem>", into = "Vec<Subsystem>")]
pub struct SystemLayout {
    subsystems: Vec<Subsystem>,
}

impl TryFrom<Vec<Subsystem>> for SystemLayout {
    type Error = Error;

    fn try_from(subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::new(subsystems)
    }
}

impl From<SystemLayout> for Vec<Subsystem> {
    fn from(layout: SystemLayout) -> Self {
        layout.subsystems
    }
}

impl SystemLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        for (k, s) in subsystems.iter().enumerate() {
            if s.dim == 0 {
                return Err(Error::ZeroDimension(s.label.clone()));
            }
            if subsystems[..k].iter().any(|t| t.label == s.label) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
        }
        Ok(Self { subsystems })
    }

    /// Unowned subsystems from `(label, dim)` pairs.
    pub fn from_dims(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(l, d)| Subsystem::new(l, d)).collect())
    }

    /// A single unlabelled-party subsystem covering the whole space.
    pub fn single(label: &str, dim: usize) -> Self {
        Self {
            subsystems: vec![Subsystem::new(label, dim.max(1))],
        }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.get(label)?.dim)
    }

    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l.as_ref())).collect()
    }

    pub fn require_qubit(&self, label: &str) -> Result<usize> {
        let pos = self.position(label)?;
        let dim = self.subsystems[pos].dim;
        if dim != 2 {
            return Err(Error::NotQubit {
                label: label.to_string(),
                dim,
            });
        }
        Ok(pos)
    }

    /// Register qubits in layout order (see [`Subsystem::is_register_qubit`]).
    pub fn register(&self) -> Vec<&str> {
        self.subsystems
            .iter()
            .filter(|s| s.is_register_qubit())
            .map(|s| s.label.as_str())
            .collect()
    }

    /// Distinct party names in order of first appearance.
    pub fn parties(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in self.subsystems.iter().filter_map(|s| s.party.as_deref()) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Layout restricted to the subsystems at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            subsystems: positions
                .iter()
                .map(|&p| self.subsystems[p].clone())
                .collect(),
        }
    }

    pub fn without(&self, label: &str) -> Result<Self> {
        let pos = self.position(label)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&k| k != pos).collect();
        Ok(self.select(&keep))
    }

    /// Appends a subsystem; fails on a duplicate label.
    pub fn with(&self, extra: Subsystem) -> Result<Self> {
        let mut subsystems = self.subsystems.clone();
        subsystems.push(extra);
        Self::new(subsystems)
    }

    /// Replaces subsystem `label` by `parts`, whose dims must multiply to its dim.
    /// The replacement occupies the same tensor slot, so no matrix data moves.
    pub fn split_subsystem(&self, label: &str, parts: Vec<Subsystem>) -> Result<Self> {
        let pos = self.position(label)?;
        let product: usize = parts.iter().map(|s| s.dim).product();
        if product != self.subsystems[pos].dim {
            return Err(Error::DimensionMismatch {
                expected: self.subsystems[pos].dim,
                found: product,
            });
        }
        let mut subsystems = self.subsystems[..pos].to_vec();
        subsystems.extend(parts);
        subsystems.extend_from_slice(&self.subsystems[pos + 1..]);
        Self::new(subsystems)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.subsystems[k + 1].dim;
        }
        strides
    }

    /// Offsets into the full index for every joint value of the subsystems at
    /// `positions`, enumerated with `positions[0]` slowest.
    pub(crate) fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &p in positions {
            let dim = self.subsystems[p].dim;
            let stride = strides[p];
            out = out
                .iter()
                .flat_map(|&base| (0..dim).map(move |v| base + v * stride))
                .collect();
        }
        out
    }

    /// Positions not listed in `positions`, in layout order.
    pub(crate) fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|k| !positions.contains(k)).collect()
    }
}
