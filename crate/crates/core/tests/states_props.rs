use std::collections::BTreeMap;

use proptest::prelude::*;
use secret_states::linalg::random::random_density_matrix;
use secret_states::linalg::{seeded_rng, ComplexMatrix, C64};
use secret_states::states::{
    inner_layout, make_even_parity_state, make_example_state, make_flip, make_secret_sharing_state,
    purify, werner_matrix, ParityIndex, SecretSharingInstance, WernerKind, EVE,
};
use secret_states::DensityMatrix;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn odd_parity_blocks_vanish(n in 2usize..5, k in 1usize..4, seed: u64) {
        let inst = SecretSharingInstance::random(n, k, &mut seeded_rng(seed)).unwrap();
        let rho = &inst.state;
        rho.validate(1e-10).unwrap();
        let m = rho.matrix();
        for i in ParityIndex::all(n).unwrap() {
            for j in ParityIndex::all(n).unwrap() {
                if i.is_even() && j.is_even() {
                    continue;
                }
                let block = m.submatrix(i.value() * k, j.value() * k, k, k);
                prop_assert!(block.max_abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn purification_round_trip(rank in 1usize..9, extra in 0usize..4, seed: u64) {
        let mut rng = seeded_rng(seed);
        let d = rank + extra;
        let rho = DensityMatrix::new(random_density_matrix(d, rank, &mut rng), inner_layout(d)).unwrap();
        let psi = purify(&rho).unwrap();
        prop_assert_eq!(psi.layout().dim_of(EVE).unwrap(), rank);
        let back = psi.reduced(&["inner"]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-9);
    }

    #[test]
    fn example_state_is_valid(a1 in 0.01f64..0.49, d in 2usize..5) {
        let rho = make_example_state(a1, 0.5 - a1, d).unwrap();
        rho.validate(1e-10).unwrap();
        prop_assert_eq!(rho.dim(), 8 * 2 * d * d);
    }
}

#[test]
fn scalar_inner_gives_even_parity_projector() {
    for n in [2, 3, 4] {
        let one = ComplexMatrix::identity(1);
        let inner = DensityMatrix::new(one.clone(), inner_layout(1)).unwrap();
        let unitaries: BTreeMap<ParityIndex, ComplexMatrix> = ParityIndex::even(n)
            .unwrap()
            .into_iter()
            .map(|i| (i, one.clone()))
            .collect();
        let rho = make_secret_sharing_state(&inner, &unitaries, n).unwrap();
        let w = 1.0 / (1u64 << (n - 1)) as f64;
        let expected = ComplexMatrix::from_fn(1 << n, 1 << n, |i, j| {
            let even = |x: usize| x.count_ones().is_multiple_of(2);
            if even(i) && even(j) {
                C64::new(w, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert_eq!(rho.matrix(), &expected, "n = {n}");
        if n == 3 {
            assert_eq!(
                rho.matrix(),
                make_even_parity_state(0).unwrap().projector().matrix()
            );
        }
    }
}

#[test]
fn werner_states_are_flip_eigenstates() {
    for d in 2..7 {
        let f = make_flip(d);
        let s = werner_matrix(d, WernerKind::Symmetric).unwrap();
        let a = werner_matrix(d, WernerKind::Antisymmetric).unwrap();
        assert!((&f * &s).max_abs_diff(&s) <= 1e-12);
        assert!((&f * &a).max_abs_diff(&a.scale(-1.0)) <= 1e-12);
        assert!((s.trace().re - 1.0).abs() <= 1e-12);
        assert!((a.trace().re - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn missing_or_odd_keys_are_rejected() {
    let inner = DensityMatrix::new(ComplexMatrix::identity(1), inner_layout(1)).unwrap();
    let mut unitaries: BTreeMap<ParityIndex, ComplexMatrix> = ParityIndex::even(3)
        .unwrap()
        .into_iter()
        .map(|i| (i, ComplexMatrix::identity(1)))
        .collect();
    let first = *unitaries.keys().next().unwrap();
    unitaries.remove(&first);
    assert!(make_secret_sharing_state(&inner, &unitaries, 3).is_err());
    unitaries.insert(first, ComplexMatrix::identity(1));
    unitaries.insert(
        ParityIndex::from_bits(&[0, 0, 1]).unwrap(),
        ComplexMatrix::identity(1),
    );
    assert!(make_secret_sharing_state(&inner, &unitaries, 3).is_err());
}
