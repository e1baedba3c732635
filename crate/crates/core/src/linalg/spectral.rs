use nalgebra::{SymmetricEigen, SVD};

use super::jacobi::jacobi_eigh;
use super::matrix::{ComplexMatrix, C64};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};

/// Inputs further than this from Hermitian are rejected by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Up to this dimension the Jacobi solver is used directly.
const JACOBI_MAX_DIM: usize = 64;
/// Residual above which a tridiagonal-QR decomposition is redone by Jacobi.
const DECOMPOSITION_TOL: f64 = 1e-11;

/// Spectral decomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }

    /// `V f(Λ) V†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let scaled = ComplexMatrix::from_fn(n, n, |i, k| v[(i, k)] * weights[k]);
        &scaled * &v.adjoint()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }
}

fn scale_of(m: &ComplexMatrix) -> f64 {
    m.max_abs().max(1.0)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let herr = m.hermiticity_error();
    if herr > HERMITIAN_TOL * scale_of(m) {
        return Err(Error::NotHermitian(herr));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    if n <= JACOBI_MAX_DIM {
        return Ok(from_jacobi(m));
    }
    // nalgebra's complex tridiagonalization can drop phases when a Householder
    // step is skipped, which corrupts eigenvectors of nearly diagonal inputs
    let decomposition = SymmetricEigen::new(m.hermitian_part().to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomposition.eigenvalues[a].total_cmp(&decomposition.eigenvalues[b]));
    let eigen = HermitianEigen {
        eigenvalues: order
            .iter()
            .map(|&k| decomposition.eigenvalues[k])
            .collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |i, j| {
            decomposition.eigenvectors[(i, order[j])]
        }),
    };
    if decomposition_error(m, &eigen) > DECOMPOSITION_TOL * scale_of(m) {
        return Ok(from_jacobi(m));
    }
    Ok(eigen)
}

fn from_jacobi(m: &ComplexMatrix) -> HermitianEigen {
    let (eigenvalues, vectors) = jacobi_eigh(m, true);
    HermitianEigen {
        eigenvalues,
        eigenvectors: vectors.expect("vectors requested"),
    }
}

/// Larger of `‖MV − VΛ‖_max` and `‖V†V − I‖_max`.
fn decomposition_error(m: &ComplexMatrix, eigen: &HermitianEigen) -> f64 {
    let v = &eigen.eigenvectors;
    let n = v.rows();
    let mv = m * v;
    let residual =
        ComplexMatrix::from_fn(n, n, |i, k| mv[(i, k)] - v[(i, k)] * eigen.eigenvalues[k]);
    let gram = &v.adjoint() * v;
    residual
        .max_abs()
        .max(gram.max_abs_diff(&ComplexMatrix::identity(n)))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let herr = m.hermiticity_error();
    if herr > HERMITIAN_TOL * scale_of(m) {
        return Err(Error::NotHermitian(herr));
    }
    if m.rows() <= JACOBI_MAX_DIM {
        return Ok(jacobi_eigh(m, false).0);
    }
    let h = m.hermitian_part();
    let mut values: Vec<f64> = h
        .to_nalgebra()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    // the spectrum must reproduce the trace and the Frobenius norm
    let frob: f64 = h.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let sum_sq: f64 = values.iter().map(|x| x * x).sum();
    let tol = DECOMPOSITION_TOL * scale_of(m) * m.rows() as f64;
    if (values.iter().sum::<f64>() - h.trace().re).abs() > tol
        || (sum_sq - frob).abs() > tol * scale_of(m)
    {
        return Ok(jacobi_eigh(m, false).0);
    }
    Ok(values)
}

/// Positive semidefinite square root.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let min = eig.min_eigenvalue();
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let svd = SVD::new(m.to_nalgebra(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    s
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// `tr|√a √b|` on raw PSD matrices.
pub fn fidelity_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let sa = sqrt_psd(a)?;
    let sb = sqrt_psd(b)?;
    Ok(trace_norm(&(&sa * &sb)))
}

/// Root fidelity `F(ρ, σ) = tr|√ρ √σ|`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    fidelity_matrices(rho.matrix(), sigma.matrix())
}
