//! CNOT-and-measure reductions: a 3-party secret-sharing state collapses to
//! a private state between the dealer and one player, and an `n`-party state
//! to an `(n-1)`-party one.

use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{trace_norm, ComplexMatrix};
use crate::states::ParityIndex;

const ZERO_BRANCH: f64 = 1e-12;

/// One branch of a computational-basis measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub result: u8,
    pub probability: f64,
    /// Renormalized, with the measured qubit removed.
    pub post_state: DensityMatrix,
}

/// Conjugation by CNOT with the given control and target qubits.
pub fn apply_cnot(rho: &DensityMatrix, control: &str, target: &str) -> Result<DensityMatrix> {
    if control == target {
        return Err(Error::InvalidParameter(format!(
            "CNOT control and target are both `{control}`"
        )));
    }
    let layout = rho.layout();
    let c = layout.require_qubit(control)?;
    let t = layout.require_qubit(target)?;
    let strides = layout.strides();
    let (cs, ts) = (strides[c], strides[t]);
    // CNOT is a permutation of basis states, and an involution
    let perm: Vec<usize> = (0..rho.dim())
        .map(|i| {
            if (i / cs) % 2 == 1 {
                flip_digit(i, ts)
            } else {
                i
            }
        })
        .collect();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(rho.dim(), rho.dim(), |i, j| m[(perm[i], perm[j])]);
    DensityMatrix::unchecked(out, layout.clone())
}

/// Flips the qubit digit with the given stride.
fn flip_digit(i: usize, stride: usize) -> usize {
    if (i / stride).is_multiple_of(2) {
        i + stride
    } else {
        i - stride
    }
}

/// Projective measurement of `system` in `{|0⟩, |1⟩}`. Branches with
/// probability ≤ 1e-12 are omitted.
pub fn measure_computational(rho: &DensityMatrix, system: &str) -> Result<Vec<MeasurementOutcome>> {
    let layout = rho.layout();
    let pos = layout.require_qubit(system)?;
    let stride = layout.strides()[pos];
    let rest = layout.complement(&[pos]);
    let rest_off = layout.offsets(&rest);
    let new_layout = layout.without(system)?;
    let m = rho.matrix();
    let mut out = Vec::new();
    for r in 0..2u8 {
        let shift = r as usize * stride;
        let block = ComplexMatrix::from_fn(rest_off.len(), rest_off.len(), |a, b| {
            m[(rest_off[a] + shift, rest_off[b] + shift)]
        });
        let p = block.trace().re;
        if p <= ZERO_BRANCH {
            continue;
        }
        out.push(MeasurementOutcome {
            result: r,
            probability: p,
            post_state: DensityMatrix::unchecked(block.scale(1.0 / p), new_layout.clone())?,
        });
    }
    Ok(out)
}

fn register_of(rho: &DensityMatrix) -> Vec<String> {
    rho.layout()
        .register()
        .into_iter()
        .map(String::from)
        .collect()
}

/// For a 3-party state with register `A, B, C`: CNOT from `B` to `C`, then
/// measure `B`. Every branch of a secret-sharing input is a private state
/// on `A, C`.
pub fn reduce_to_private(rho: &DensityMatrix) -> Result<Vec<MeasurementOutcome>> {
    let register = register_of(rho);
    if register.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "expected a 3-qubit register, found {:?}",
            register
        )));
    }
    let after = apply_cnot(rho, &register[1], &register[2])?;
    measure_computational(&after, &register[1])
}

/// CNOT from `control` to `target` followed by measurement of `control`;
/// for `n ≥ 4` parties.
pub fn reduce_n_party(
    rho: &DensityMatrix,
    control: &str,
    target: &str,
) -> Result<Vec<MeasurementOutcome>> {
    let register = register_of(rho);
    if register.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "reduce_n_party needs at least 4 register qubits, found {}; use reduce_to_private",
            register.len()
        )));
    }
    for label in [control, target] {
        if !register.iter().any(|r| r == label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
    }
    let after = apply_cnot(rho, control, target)?;
    measure_computational(&after, control)
}

/// Block-structure test of a two-qubit-register private state: the four
/// blocks on `|00⟩, |11⟩` have trace norm ½ and every other block vanishes.
#[derive(Clone, Debug, Serialize)]
pub struct PrivateStateCheck {
    pub accepted: bool,
    pub block_norms: Vec<(String, f64)>,
    pub max_norm_deviation: f64,
    pub support_violation: f64,
}

pub fn check_private_state(
    rho: &DensityMatrix,
    norm_tol: f64,
    support_tol: f64,
) -> Result<PrivateStateCheck> {
    let register = register_of(rho);
    if register.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a 2-qubit register, found {register:?}"
        )));
    }
    let table = crate::verifier::extract_blocks(rho, &register)?;
    let even = ParityIndex::even(2)?;
    let mut block_norms = Vec::new();
    let mut max_dev: f64 = 0.0;
    for &i in &even {
        for &j in &even {
            let norm = trace_norm(table.get(i, j));
            max_dev = max_dev.max((norm - 0.5).abs());
            block_norms.push((format!("{i},{j}"), norm));
        }
    }
    let support_violation = table.support_violation();
    Ok(PrivateStateCheck {
        accepted: max_dev <= norm_tol && support_violation <= support_tol,
        block_norms,
        max_norm_deviation: max_dev,
        support_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::qubit_register;
    use crate::linalg::random::random_density_matrix;
    use crate::linalg::{basis_vector, seeded_rng, tensor, SystemLayout, C64};
    use crate::states::{
        inner_layout, make_even_parity_state, make_private_state, SecretSharingInstance,
    };
    use approx::assert_abs_diff_eq;

    #[test]
    fn cnot_classical_action_and_involution() {
        let mut rng = seeded_rng(1);
        let inner =
            DensityMatrix::new(random_density_matrix(3, 2, &mut rng), inner_layout(3)).unwrap();
        let reg = qubit_register(&["A", "B", "C"]).unwrap();
        let before = DensityMatrix::basis_state(reg.clone(), &[0, 1, 1])
            .unwrap()
            .tensor(&inner)
            .unwrap();
        let expected = DensityMatrix::basis_state(reg, &[0, 1, 0])
            .unwrap()
            .tensor(&inner)
            .unwrap();
        let after = apply_cnot(&before, "B", "C").unwrap();
        assert_eq!(after.matrix(), expected.matrix());
        assert_eq!(
            apply_cnot(&after, "B", "C").unwrap().matrix(),
            before.matrix()
        );
    }

    #[test]
    fn cnot_on_psi0() {
        // |000⟩+|011⟩+|101⟩+|110⟩ → |000⟩+|010⟩+|101⟩+|111⟩ = (|0·0⟩+|1·1⟩)_AC ⊗ (|0⟩+|1⟩)_B
        let rho = make_even_parity_state(0).unwrap().projector();
        let after = apply_cnot(&rho, "B", "C").unwrap();
        let v: Vec<C64> = [0, 2, 5, 7]
            .iter()
            .map(|&k| basis_vector(8, k))
            .fold(vec![C64::new(0.0, 0.0); 8], |acc, e| {
                acc.iter().zip(e).map(|(a, b)| a + b * 0.5).collect()
            });
        assert!(after.matrix().max_abs_diff(&ComplexMatrix::outer(&v, &v)) < 1e-15);
    }

    #[test]
    fn cnot_errors() {
        let rho = crate::states::make_example_state(0.25, 0.25, 3).unwrap();
        assert!(apply_cnot(&rho, "B", "B").is_err());
        assert!(matches!(
            apply_cnot(&rho, "A'", "B"),
            Err(Error::NotQubit { .. })
        ));
        assert!(matches!(
            apply_cnot(&rho, "Z", "B"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn cnot_with_non_power_of_two_strides() {
        // target qubit sits above a qutrit, so its stride is 3
        let layout = SystemLayout::from_dims(&[("A", 2), ("B", 2), ("Q", 3)]).unwrap();
        let s = DensityMatrix::basis_state(layout.clone(), &[1, 0, 2]).unwrap();
        let e = DensityMatrix::basis_state(layout, &[1, 1, 2]).unwrap();
        assert_eq!(apply_cnot(&s, "A", "B").unwrap().matrix(), e.matrix());
    }

    #[test]
    fn measurement_examples() {
        let plus = [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
        let v = tensor(
            &ComplexMatrix::outer(&basis_vector(2, 0), &basis_vector(2, 0)),
            &ComplexMatrix::outer(&plus, &plus),
        );
        let rho =
            DensityMatrix::new(v, SystemLayout::from_dims(&[("A", 2), ("B", 2)]).unwrap()).unwrap();
        let out = measure_computational(&rho, "B").unwrap();
        assert_eq!(out.len(), 2);
        for o in &out {
            assert_abs_diff_eq!(o.probability, 0.5, epsilon = 1e-15);
            assert!(
                o.post_state
                    .matrix()
                    .max_abs_diff(&ComplexMatrix::real_diag(&[1.0, 0.0]))
                    < 1e-15
            );
            assert_eq!(o.post_state.layout().labels(), vec!["A"]);
        }

        let one = DensityMatrix::basis_state(SystemLayout::from_dims(&[("Q", 2)]).unwrap(), &[1])
            .unwrap();
        let out = measure_computational(&one, "Q").unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].result, 1);
        assert_eq!(out[0].probability, 1.0);
    }

    #[test]
    fn branch_probabilities_after_cnot() {
        let mut rng = seeded_rng(4);
        let inst = SecretSharingInstance::random(3, 2, &mut rng).unwrap();
        let after = apply_cnot(&inst.state, "B", "C").unwrap();
        let out = measure_computational(&after, "B").unwrap();
        assert_eq!(out.len(), 2);
        for o in &out {
            assert_abs_diff_eq!(o.probability, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn psi0_reduces_to_bell_pair() {
        let rho = make_even_parity_state(0).unwrap().projector();
        let out = reduce_to_private(&rho).unwrap();
        let h = 0.5;
        let bell = ComplexMatrix::from_real_rows(&[
            &[h, 0.0, 0.0, h],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[h, 0.0, 0.0, h],
        ]);
        for o in &out {
            assert!(o.post_state.matrix().max_abs_diff(&bell) < 1e-15);
        }
        assert_eq!(out[0].post_state.layout().labels(), vec!["A", "C"]);
    }

    #[test]
    fn random_state_reduces_to_assembled_private_state() {
        let mut rng = seeded_rng(12);
        let inst = SecretSharingInstance::random(3, 3, &mut rng).unwrap();
        let out = reduce_to_private(&inst.state).unwrap();
        for o in &out {
            let r = o.result;
            // original register index (i, r, i⊕r); after the CNOT C reads i
            let u = |i: u8| &inst.unitaries[&ParityIndex::from_bits(&[i, r, i ^ r]).unwrap()];
            let oracle = make_private_state(&inst.inner, u(0), u(1)).unwrap();
            assert!(o.post_state.matrix().max_abs_diff(oracle.matrix()) <= 1e-9);
            let check = check_private_state(&o.post_state, 1e-8, 1e-10).unwrap();
            assert!(check.accepted, "{check:?}");
        }
    }

    #[test]
    fn reduce_n_party_requires_four() {
        let rho = make_even_parity_state(0).unwrap().projector();
        assert!(reduce_n_party(&rho, "B", "C").is_err());
        let mut rng = seeded_rng(3);
        let inst = SecretSharingInstance::random(4, 1, &mut rng).unwrap();
        assert!(matches!(
            reduce_n_party(&inst.state, "B", "inner"),
            Err(Error::UnknownLabel(_))
        ));
        assert!(reduce_to_private(&inst.state).is_err());
    }

    #[test]
    fn four_party_reduction_gives_three_party_state() {
        let mut rng = seeded_rng(5);
        let inst = SecretSharingInstance::random(4, 2, &mut rng).unwrap();
        let out = reduce_n_party(&inst.state, "B", "C").unwrap();
        assert_eq!(out.len(), 2);
        for o in &out {
            assert_abs_diff_eq!(o.probability, 0.5, epsilon = 1e-12);
            let reg = o.post_state.layout().register();
            assert_eq!(reg, vec!["A", "C", "D"]);
            o.post_state.validate(1e-10).unwrap();
            let rep = crate::verifier::verify_secret_sharing(&o.post_state, &reg, 1e-7).unwrap();
            assert!(rep.accepted);
        }
    }
}
