//! Subsystem-aware operations on `(matrix, layout)` pairs.

use super::layout::SystemLayout;
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

fn check_dims(m: &ComplexMatrix, layout: &SystemLayout) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            found: m.rows(),
        });
    }
    Ok(())
}

fn unique_positions<S: AsRef<str>>(layout: &SystemLayout, labels: &[S]) -> Result<Vec<usize>> {
    let positions = layout.positions(labels)?;
    for (k, p) in positions.iter().enumerate() {
        if positions[..k].contains(p) {
            return Err(Error::DuplicateLabel(layout.subsystems()[*p].label.clone()));
        }
    }
    Ok(positions)
}

/// Reorders tensor factors so that `order` becomes the new layout order.
pub fn permute_systems<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SystemLayout,
    order: &[S],
) -> Result<(ComplexMatrix, SystemLayout)> {
    check_dims(m, layout)?;
    let positions = unique_positions(layout, order).map_err(|e| match e {
        Error::DuplicateLabel(_) => Error::NotPermutation,
        other => other,
    })?;
    if positions.len() != layout.len() {
        return Err(Error::NotPermutation);
    }
    let map = layout.offsets(&positions);
    let out = ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(map[i], map[j])]);
    Ok((out, layout.select(&positions)))
}

/// Same reordering applied to a state vector.
pub fn permute_vector<S: AsRef<str>>(
    v: &[C64],
    layout: &SystemLayout,
    order: &[S],
) -> Result<(Vec<C64>, SystemLayout)> {
    if v.len() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            found: v.len(),
        });
    }
    let positions = unique_positions(layout, order).map_err(|_| Error::NotPermutation)?;
    if positions.len() != layout.len() {
        return Err(Error::NotPermutation);
    }
    let map = layout.offsets(&positions);
    Ok((
        map.iter().map(|&k| v[k]).collect(),
        layout.select(&positions),
    ))
}

/// Traces out every subsystem not in `keep`. Kept subsystems retain their
/// layout order regardless of the order in `keep`.
pub fn partial_trace<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SystemLayout,
    keep: &[S],
) -> Result<(ComplexMatrix, SystemLayout)> {
    check_dims(m, layout)?;
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut kept = unique_positions(layout, keep)?;
    kept.sort_unstable();
    let traced = layout.complement(&kept);
    let keep_off = layout.offsets(&kept);
    let trace_off = layout.offsets(&traced);
    let out = ComplexMatrix::from_fn(keep_off.len(), keep_off.len(), |i, j| {
        let (r, c) = (keep_off[i], keep_off[j]);
        trace_off.iter().map(|&t| m[(r + t, c + t)]).sum()
    });
    Ok((out, layout.select(&kept)))
}

/// Transposes the tensor indices of the subsystems in `subset`.
pub fn partial_transpose<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SystemLayout,
    subset: &[S],
) -> Result<ComplexMatrix> {
    check_dims(m, layout)?;
    let sub = unique_positions(layout, subset)?;
    let rest = layout.complement(&sub);
    let s_off = layout.offsets(&sub);
    let q_off = layout.offsets(&rest);
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for &qa in &q_off {
        for &qb in &q_off {
            for &sa in &s_off {
                for &sb in &s_off {
                    out[(qa + sa, qb + sb)] = m[(qa + sb, qb + sa)];
                }
            }
        }
    }
    Ok(out)
}

/// Reduced density matrix `tr_rest |v⟩⟨v|` computed without forming the
/// full projector.
pub fn reduced_from_vector<S: AsRef<str>>(
    v: &[C64],
    layout: &SystemLayout,
    keep: &[S],
) -> Result<(ComplexMatrix, SystemLayout)> {
    if v.len() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            found: v.len(),
        });
    }
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut kept = unique_positions(layout, keep)?;
    kept.sort_unstable();
    let rest = layout.complement(&kept);
    let keep_off = layout.offsets(&kept);
    let rest_off = layout.offsets(&rest);
    let coeffs = ComplexMatrix::from_fn(keep_off.len(), rest_off.len(), |i, r| {
        v[keep_off[i] + rest_off[r]]
    });
    let out = &coeffs * &coeffs.adjoint();
    Ok((out, layout.select(&kept)))
}

/// Embeds an operator acting on `targets` (in the given order) into the full
/// space of `layout`.
pub fn embed_operator<S: AsRef<str>>(
    op: &ComplexMatrix,
    layout: &SystemLayout,
    targets: &[S],
) -> Result<ComplexMatrix> {
    let tpos = unique_positions(layout, targets)?;
    let t_off = layout.offsets(&tpos);
    if op.rows() != t_off.len() || !op.is_square() {
        return Err(Error::DimensionMismatch {
            expected: t_off.len(),
            found: op.rows(),
        });
    }
    let rest = layout.complement(&tpos);
    let r_off = layout.offsets(&rest);
    let n = layout.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for &r in &r_off {
        for (a, &ta) in t_off.iter().enumerate() {
            for (b, &tb) in t_off.iter().enumerate() {
                let z = op[(a, b)];
                if z != ZERO {
                    out[(r + ta, r + tb)] = z;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_vector, tensor};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample(rows: usize, seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, rows, |i, j| {
            c((i as f64 + 1.0) * seed - j as f64, (j as f64) * 0.5 - seed)
        })
    }

    #[test]
    fn permute_identity_and_swap() {
        let a = sample(2, 0.3);
        let b = sample(3, 1.7);
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 3)]).unwrap();
        let ab = tensor(&a, &b);
        let (same, _) = permute_systems(&ab, &l, &["A", "B"]).unwrap();
        assert_eq!(same, ab);
        let (swapped, nl) = permute_systems(&ab, &l, &["B", "A"]).unwrap();
        assert_eq!(swapped, tensor(&b, &a));
        assert_eq!(nl.labels(), vec!["B", "A"]);
        let (back, _) = permute_systems(&swapped, &nl, &["A", "B"]).unwrap();
        assert_eq!(back, ab);
    }

    #[test]
    fn permute_rejects_bad_orders() {
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 2)]).unwrap();
        let m = ComplexMatrix::identity(4);
        assert_eq!(
            permute_systems(&m, &l, &["A"]).unwrap_err(),
            Error::NotPermutation
        );
        assert_eq!(
            permute_systems(&m, &l, &["A", "A"]).unwrap_err(),
            Error::NotPermutation
        );
        assert_eq!(
            permute_systems(&m, &l, &["A", "Z"]).unwrap_err(),
            Error::UnknownLabel("Z".into())
        );
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let rb = ComplexMatrix::real_diag(&[0.2, 0.5, 0.3]);
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 3)]).unwrap();
        let (out, nl) = partial_trace(&tensor(&ra, &rb), &l, &["A"]).unwrap();
        assert!(out.max_abs_diff(&ra) < 1e-15);
        assert_eq!(nl.labels(), vec!["A"]);
        let (outb, _) = partial_trace(&tensor(&ra, &rb), &l, &["B"]).unwrap();
        assert!(outb.max_abs_diff(&rb) < 1e-15);
    }

    #[test]
    fn partial_trace_keep_all_and_errors() {
        let m = sample(4, 0.9);
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 2)]).unwrap();
        let (out, _) = partial_trace(&m, &l, &["B", "A"]).unwrap();
        assert_eq!(out, m);
        let none: [&str; 0] = [];
        assert_eq!(partial_trace(&m, &l, &none).unwrap_err(), Error::EmptyKeep);
        assert_eq!(
            partial_trace(&m, &l, &["Q"]).unwrap_err(),
            Error::UnknownLabel("Q".into())
        );
    }

    #[test]
    fn partial_transpose_of_product_and_involution() {
        let ra = sample(2, 0.4);
        let rb = sample(3, 2.1);
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 3)]).unwrap();
        let m = tensor(&ra, &rb);
        let pt = partial_transpose(&m, &l, &["B"]).unwrap();
        assert_eq!(pt, tensor(&ra, &rb.transpose()));
        assert_eq!(partial_transpose(&pt, &l, &["B"]).unwrap(), m);
        assert_eq!(
            partial_transpose(&m, &l, &["A", "B"]).unwrap(),
            m.transpose()
        );
    }

    #[test]
    fn reduced_from_vector_matches_partial_trace() {
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 3), ("C", 2)]).unwrap();
        let v: Vec<C64> = (0..12)
            .map(|k| c(k as f64 * 0.1, 1.0 - k as f64 * 0.05))
            .collect();
        let full = ComplexMatrix::outer(&v, &v);
        for keep in [vec!["A"], vec!["B", "C"], vec!["C", "A"]] {
            let (a, la) = reduced_from_vector(&v, &l, &keep).unwrap();
            let (b, lb) = partial_trace(&full, &l, &keep).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn embed_on_second_factor() {
        let l = SystemLayout::from_dims(&[("A", 2), ("B", 2)]).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = embed_operator(&x, &l, &["B"]).unwrap();
        assert_eq!(e, tensor(&ComplexMatrix::identity(2), &x));
        let v = e.apply(&basis_vector(4, 0));
        assert_eq!(v, basis_vector(4, 1));
    }
}
