//! Versioned JSON state files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "tolerance": 1e-7,
//!   "layout": [{"label": "A", "dim": 2, "party": "A"}, ...],
//!   "matrix": [[[re, im], ...], ...],
//!   "metadata": {"kind": "eq1-random", ...}
//! }
//! ```
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces every `f64` bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem, SystemLayout, C64};

pub const FORMAT_VERSION: u32 = 1;
/// Validation tolerance when a file does not declare one.
pub const DEFAULT_FILE_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub layout: Vec<Subsystem>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            format_version: FORMAT_VERSION,
            tolerance: None,
            layout: rho.layout().subsystems().to_vec(),
            matrix: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Parses into a validated [`DensityMatrix`].
    pub fn to_state(&self) -> Result<DensityMatrix> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let layout = SystemLayout::new(self.layout.clone())?;
        let n = self.matrix.len();
        if n != layout.total_dim() {
            return Err(Error::Format(format!(
                "matrix has {n} rows but layout dimension is {}",
                layout.total_dim()
            )));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        let m = ComplexMatrix::from_row_major(n, n, data)?;
        DensityMatrix::with_tolerance(m, layout, self.tolerance.unwrap_or(DEFAULT_FILE_TOL))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub fn write_state(rho: &DensityMatrix, path: &Path) -> Result<()> {
    StateFile::from_state(rho).write(path)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    StateFile::read(path)?.to_state()
}
