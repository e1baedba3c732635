//! Cyclic Jacobi diagonalization of complex Hermitian matrices.

use super::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and, if requested, column eigenvectors.
pub(crate) fn jacobi_eigh(
    m: &ComplexMatrix,
    want_vectors: bool,
) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.rows();
    let mut a: Vec<C64> = m.hermitian_part().as_slice().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n).as_slice().to_vec());
    let scale = m.max_abs();
    let floor = f64::EPSILON * 1e-3 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let b = apq.norm();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if b <= floor || b <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                let e = apq / b;
                let ec = e.conj();
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ec * s;
                    a[k * n + q] = akp * s + akq * ec * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * e * s;
                    a[q * n + k] = apk * s + aqk * e * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * ec * s;
                        v[k * n + q] = vkp * s + vkq * ec * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]));
    (values, vectors)
}
