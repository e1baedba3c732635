//! Validated density operators and pure states over a [`SystemLayout`].

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, ops, ComplexMatrix, Subsystem, SystemLayout, C64};

/// Structural tolerance used when validating constructor outputs.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix paired with the
/// layout that gives its tensor indices meaning.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    layout: SystemLayout,
}

impl DensityMatrix {
    /// Validates at [`STRUCTURAL_TOL`].
    pub fn new(matrix: ComplexMatrix, layout: SystemLayout) -> Result<Self> {
        Self::with_tolerance(matrix, layout, STRUCTURAL_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, layout: SystemLayout, tol: f64) -> Result<Self> {
        let dm = Self::unchecked(matrix, layout)?;
        dm.validate(tol)?;
        Ok(dm)
    }

    /// Checks only shape agreement; for outputs of trusted constructions.
    pub(crate) fn unchecked(matrix: ComplexMatrix, layout: SystemLayout) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if matrix.rows() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: matrix.rows(),
            });
        }
        Ok(Self { matrix, layout })
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herr = self.matrix.hermiticity_error();
        if herr > tol {
            return Err(Error::NotHermitian(herr));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne(tr.re));
        }
        let min = eigvalsh(&self.matrix.hermitian_part())?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotPsd(min));
        }
        Ok(())
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            layout,
        }
    }

    /// `|v⟩⟨v|` for a computational-basis product state, one index per subsystem.
    pub fn basis_state(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() {
            return Err(Error::DimensionMismatch {
                expected: layout.len(),
                found: digits.len(),
            });
        }
        let mut index = 0;
        for (d, s) in digits.iter().zip(layout.subsystems()) {
            if *d >= s.dim {
                return Err(Error::InvalidParameter(format!(
                    "basis index {d} out of range for `{}`",
                    s.label
                )));
            }
            index = index * s.dim + d;
        }
        let n = layout.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        m[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self { matrix: m, layout })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn into_parts(self) -> (ComplexMatrix, SystemLayout) {
        (self.matrix, self.layout)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Replaces the layout by another of equal total dimension (e.g. after
    /// [`SystemLayout::split_subsystem`]).
    pub fn relabel(self, layout: SystemLayout) -> Result<Self> {
        Self::unchecked(self.matrix, layout)
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut subsystems = self.layout.subsystems().to_vec();
        subsystems.extend_from_slice(other.layout.subsystems());
        Self::unchecked(
            crate::linalg::tensor(&self.matrix, &other.matrix),
            SystemLayout::new(subsystems)?,
        )
    }

    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let (m, l) = ops::partial_trace(&self.matrix, &self.layout, keep)?;
        Self::unchecked(m, l)
    }

    pub fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (m, l) = ops::permute_systems(&self.matrix, &self.layout, order)?;
        Self::unchecked(m, l)
    }

    pub fn partial_transpose<S: AsRef<str>>(&self, subset: &[S]) -> Result<ComplexMatrix> {
        ops::partial_transpose(&self.matrix, &self.layout, subset)
    }

    /// `U ρ U†` with `U` acting on `targets`.
    pub fn apply_unitary<S: AsRef<str>>(&self, u: &ComplexMatrix, targets: &[S]) -> Result<Self> {
        let full = ops::embed_operator(u, &self.layout, targets)?;
        Self::unchecked(self.matrix.conjugate_by(&full), self.layout.clone())
    }

    /// Convex mixture `(1-p) ρ + p σ` on identical layouts.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::InvalidParameter(
                "mixing states with different layouts".into(),
            ));
        }
        Self::unchecked(
            &self.matrix.scale(1.0 - p) + &other.matrix.scale(p),
            self.layout.clone(),
        )
    }
}

/// Normalized state vector over a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    layout: SystemLayout,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, layout: SystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = crate::linalg::vector_norm(&amplitudes);
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, layout })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            layout: self.layout.clone(),
        }
    }

    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let (m, l) = ops::reduced_from_vector(&self.amplitudes, &self.layout, keep)?;
        DensityMatrix::unchecked(m, l)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut subsystems = self.layout.subsystems().to_vec();
        subsystems.extend_from_slice(other.layout.subsystems());
        Ok(Self {
            amplitudes: crate::linalg::tensor_vec(&self.amplitudes, &other.amplitudes),
            layout: SystemLayout::new(subsystems)?,
        })
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        crate::linalg::inner_product(&self.amplitudes, &other.amplitudes)
    }
}

/// Computational-basis qubit layout with register qubits named by `labels`.
pub fn qubit_register<S: AsRef<str>>(labels: &[S]) -> Result<SystemLayout> {
    SystemLayout::new(
        labels
            .iter()
            .map(|l| Subsystem::register_qubit(l.as_ref()))
            .collect(),
    )
}
