//! Constructors for the secret-sharing family and its building blocks.
//!
//! Register qubits are named `A`, `B`, `C`, ... (dealer first). A register
//! qubit's party is its own label; primed ancillas (`A'`, ...) belong to the
//! party whose name they carry. The purifying system is always `Eve`.

mod parity;

use std::collections::BTreeMap;

use rand::Rng;

pub use parity::{ParityIndex, MAX_PARTIES};

use crate::density::{qubit_register, DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::linalg::random::{haar_unitary_with, random_density_matrix};
use crate::linalg::{basis_vector, eigh, tensor, ComplexMatrix, Subsystem, SystemLayout, C64};

/// Label of the purifying (eavesdropper) system.
pub const EVE: &str = "Eve";
/// Label of the joint primed system when it is not split per party.
pub const INNER: &str = "inner";

const UNITARY_TOL: f64 = 1e-10;
const RANK_CUTOFF: f64 = 1e-12;

/// Register labels `A, B, C, ...` for `n` parties.
pub fn party_labels(n: usize) -> Result<Vec<String>> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::InvalidParameter(format!(
            "party count {n} outside 1..={MAX_PARTIES}"
        )));
    }
    Ok((0..n)
        .map(|k| ((b'A' + k as u8) as char).to_string())
        .collect())
}

/// Layout of a single joint inner system of dimension `dim`, held by the dealer.
pub fn inner_layout(dim: usize) -> SystemLayout {
    SystemLayout::new(vec![Subsystem::owned(INNER, dim, "A")]).expect("single subsystem")
}

/// Per-party primed layout `A', B', ...` with the given dimensions.
pub fn primed_layout(dims: &[usize]) -> Result<SystemLayout> {
    let parties = party_labels(dims.len())?;
    SystemLayout::new(
        parties
            .iter()
            .zip(dims)
            .map(|(p, &d)| Subsystem::owned(format!("{p}'"), d, p.clone()))
            .collect(),
    )
}

fn check_unitary(u: &ComplexMatrix, dim: usize) -> Result<()> {
    if !u.is_square() || u.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.rows(),
        });
    }
    let err = u.unitarity_error();
    if err > UNITARY_TOL {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

fn register_then(n: usize, rest: &SystemLayout) -> Result<SystemLayout> {
    let mut subsystems = qubit_register(&party_labels(n)?)?.subsystems().to_vec();
    subsystems.extend_from_slice(rest.subsystems());
    SystemLayout::new(subsystems)
}

/// `2^{-(n-1)} Σ_{I,J even} |I⟩⟨J| ⊗ U_I ρ U_J†`.
///
/// The output layout is the register `A, B, ...` followed by `inner`'s own
/// layout, so per-party primed labels survive when `inner` carries them.
pub fn make_secret_sharing_state(
    inner: &DensityMatrix,
    unitaries: &BTreeMap<ParityIndex, ComplexMatrix>,
    n: usize,
) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 parties, got {n}"
        )));
    }
    let even = ParityIndex::even(n)?;
    for key in unitaries.keys() {
        if key.len() != n {
            return Err(Error::InvalidParameter(format!(
                "index {key} has length {}, expected {n}",
                key.len()
            )));
        }
        if !key.is_even() {
            return Err(Error::OddParityKey(key.to_string()));
        }
    }
    let k = inner.dim();
    let mut left = Vec::with_capacity(even.len());
    for idx in &even {
        let u = unitaries
            .get(idx)
            .ok_or_else(|| Error::MissingParityKey(idx.to_string()))?;
        check_unitary(u, k)?;
        left.push((idx.value(), u * inner.matrix(), u.adjoint()));
    }
    let weight = 1.0 / even.len() as f64;
    let total = (1usize << n) * k;
    let mut out = ComplexMatrix::zeros(total, total);
    for (row, u_rho, _) in &left {
        for (col, _, u_dag) in &left {
            let block = (u_rho * u_dag).scale(weight);
            out.set_submatrix(row * k, col * k, &block);
        }
    }
    DensityMatrix::unchecked(out.hermitian_part(), register_then(n, inner.layout())?)
}

/// A random secret-sharing state together with the data that generated it.
#[derive(Clone, Debug)]
pub struct SecretSharingInstance {
    pub n: usize,
    pub inner: DensityMatrix,
    pub unitaries: BTreeMap<ParityIndex, ComplexMatrix>,
    pub state: DensityMatrix,
}

impl SecretSharingInstance {
    /// Random inner state of random rank and independent Haar unitaries,
    /// all on a single joint `inner` system.
    pub fn random<R: Rng + ?Sized>(n: usize, inner_dim: usize, rng: &mut R) -> Result<Self> {
        Self::random_on(n, inner_layout(inner_dim.max(1)), rng)
    }

    /// As [`Self::random`], on a caller-provided primed layout.
    pub fn random_on<R: Rng + ?Sized>(n: usize, layout: SystemLayout, rng: &mut R) -> Result<Self> {
        let dim = layout.total_dim();
        let rank = rng.gen_range(1..=dim);
        let inner = DensityMatrix::unchecked(random_density_matrix(dim, rank, rng), layout)?;
        let unitaries = ParityIndex::even(n)?
            .into_iter()
            .map(|i| (i, haar_unitary_with(dim, rng)))
            .collect();
        let state = make_secret_sharing_state(&inner, &unitaries, n)?;
        Ok(Self {
            n,
            inner,
            unitaries,
            state,
        })
    }
}

/// The even-parity 3-qubit basis `ψ_0..ψ_3`: equal-weight superpositions of
/// `|000⟩, |011⟩, |101⟩, |110⟩` with sign patterns `++++`, `++--`, `+-+-`,
/// `+--+`.
pub fn make_even_parity_state(j: usize) -> Result<PureState> {
    let amplitudes = even_parity_vector(j)?;
    PureState::new(amplitudes, qubit_register(&["A", "B", "C"])?)
}

const EVEN_PARITY_SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];
const EVEN_3: [usize; 4] = [0b000, 0b011, 0b101, 0b110];

fn even_parity_vector(j: usize) -> Result<Vec<C64>> {
    let signs = EVEN_PARITY_SIGNS.get(j).ok_or_else(|| {
        Error::InvalidParameter(format!("even-parity state index {j} not in 0..4"))
    })?;
    let mut v = vec![C64::new(0.0, 0.0); 8];
    for (s, &idx) in signs.iter().zip(&EVEN_3) {
        v[idx] = C64::new(0.5 * s, 0.0);
    }
    Ok(v)
}

/// `½ Σ_{i,j} |ii⟩⟨jj| ⊗ u_i ρ u_j†` on register `A, B` followed by `inner`'s layout.
pub fn make_private_state(
    inner: &DensityMatrix,
    u0: &ComplexMatrix,
    u1: &ComplexMatrix,
) -> Result<DensityMatrix> {
    let k = inner.dim();
    check_unitary(u0, k)?;
    check_unitary(u1, k)?;
    let us = [u0, u1];
    let mut out = ComplexMatrix::zeros(4 * k, 4 * k);
    for (i, ui) in us.iter().enumerate() {
        for (j, uj) in us.iter().enumerate() {
            let block = (&(*ui * inner.matrix()) * &uj.adjoint()).scale(0.5);
            // |ii⟩ sits at row 3i of the two-qubit register
            out.set_submatrix(3 * i * k, 3 * j * k, &block);
        }
    }
    DensityMatrix::unchecked(out.hermitian_part(), register_then(2, inner.layout())?)
}

/// Swap operator `Σ_{ij} |ij⟩⟨ji|` on `d ⊗ d`.
pub fn make_flip(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WernerKind {
    Symmetric,
    Antisymmetric,
}

/// `(I ± F) / (d² ± d)` as a bare matrix.
pub fn werner_matrix(d: usize, kind: WernerKind) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("Werner dimension {d} < 2")));
    }
    let id = ComplexMatrix::identity(d * d);
    let flip = make_flip(d);
    let d2 = (d * d) as f64;
    Ok(match kind {
        WernerKind::Symmetric => (&id + &flip).scale(1.0 / (d2 + d as f64)),
        WernerKind::Antisymmetric => (&id - &flip).scale(1.0 / (d2 - d as f64)),
    })
}

/// Extreme Werner state on subsystems `X ⊗ Y`, each of dimension `d`.
pub fn make_werner(d: usize, kind: WernerKind) -> Result<DensityMatrix> {
    DensityMatrix::unchecked(
        werner_matrix(d, kind)?,
        SystemLayout::from_dims(&[("X", d), ("Y", d)])?,
    )
}

fn flag_projector(bit: usize) -> ComplexMatrix {
    ComplexMatrix::outer(&basis_vector(2, bit), &basis_vector(2, bit))
}

/// `Σ_j a_j |ψ_j⟩⟨ψ_j| ⊗ σ_j` with no condition on the `σ_j`.
pub fn even_parity_mixture(a: &[f64; 4], sigmas: &[DensityMatrix; 4]) -> Result<DensityMatrix> {
    let layout = sigmas[0].layout().clone();
    if sigmas
        .iter()
        .any(|s| s.layout().total_dim() != layout.total_dim())
    {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            found: sigmas
                .iter()
                .map(|s| s.dim())
                .find(|&d| d != layout.total_dim())
                .unwrap_or(0),
        });
    }
    let k = layout.total_dim();
    let mut out = ComplexMatrix::zeros(8 * k, 8 * k);
    for (j, (weight, sigma)) in a.iter().zip(sigmas).enumerate() {
        let psi = even_parity_vector(j)?;
        let proj = ComplexMatrix::outer(&psi, &psi);
        let term = tensor(&proj, &sigma.matrix().scale(*weight));
        out = &out + &term;
    }
    DensityMatrix::unchecked(out, register_then(3, &layout)?)
}

/// `Σ_j a_j |ψ_j⟩⟨ψ_j| ⊗ σ_j` for a probability vector `a` and states with
/// mutually orthogonal supports.
pub fn make_general_example(a: &[f64; 4], sigmas: &[DensityMatrix; 4]) -> Result<DensityMatrix> {
    if a.iter().any(|&x| x < 0.0 || !x.is_finite()) || (a.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "weights {a:?} are not a probability distribution"
        )));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if sigmas[i].dim() != sigmas[j].dim() {
                return Err(Error::DimensionMismatch {
                    expected: sigmas[i].dim(),
                    found: sigmas[j].dim(),
                });
            }
            if (sigmas[i].matrix() * sigmas[j].matrix()).max_abs() > 1e-10 {
                return Err(Error::OverlappingSupports(i, j));
            }
        }
    }
    even_parity_mixture(a, sigmas)
}

/// The Werner-flag family: weights `(a1, a1, a2, a2)` with `a1 + a2 = ½` and
/// `σ_0 = ρ_s⊗|0⟩⟨0|`, `σ_1 = ρ_a⊗|0⟩⟨0|`, `σ_2 = ρ_a⊗|1⟩⟨1|`,
/// `σ_3 = ρ_s⊗|1⟩⟨1|`. Layout `A, B, C, A'(d), B'(d), C'(2)`.
pub fn make_example_state(a1: f64, a2: f64, d: usize) -> Result<DensityMatrix> {
    if !(a1 > 0.0 && a2 > 0.0) || (a1 + a2 - 0.5).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "weights a1={a1}, a2={a2} must be positive with a1 + a2 = 1/2"
        )));
    }
    let sym = werner_matrix(d, WernerKind::Symmetric)?;
    let anti = werner_matrix(d, WernerKind::Antisymmetric)?;
    let primed = primed_layout(&[d, d, 2])?;
    let sigma = |w: &ComplexMatrix, flag: usize| {
        DensityMatrix::unchecked(tensor(w, &flag_projector(flag)), primed.clone())
    };
    let sigmas = [
        sigma(&sym, 0)?,
        sigma(&anti, 0)?,
        sigma(&anti, 1)?,
        sigma(&sym, 1)?,
    ];
    even_parity_mixture(&[a1, a1, a2, a2], &sigmas)
}

/// Canonical purification `Σ_l √λ_l |v_l⟩|l⟩_Eve` over the eigenvectors with
/// `λ_l > 1e-12`.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = eigh(rho.matrix())?;
    let support: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&l| eig.eigenvalues[l] > RANK_CUTOFF)
        .collect();
    let rank = support.len().max(1);
    let n = rho.dim();
    let weights: Vec<f64> = support.iter().map(|&l| eig.eigenvalues[l]).collect();
    let norm: f64 = weights.iter().sum();
    let mut amps = vec![C64::new(0.0, 0.0); n * rank];
    for (e, (&l, &w)) in support.iter().zip(&weights).enumerate() {
        let scale = (w / norm).sqrt();
        for i in 0..n {
            amps[i * rank + e] = eig.eigenvectors[(i, l)] * scale;
        }
    }
    let layout = rho.layout().with(Subsystem::new(EVE, rank))?;
    PureState::new(amps, layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity, partial_trace, seeded_rng, trace_norm};
    use approx::assert_abs_diff_eq;

    fn identity_unitaries(n: usize, dim: usize) -> BTreeMap<ParityIndex, ComplexMatrix> {
        ParityIndex::even(n)
            .unwrap()
            .into_iter()
            .map(|i| (i, ComplexMatrix::identity(dim)))
            .collect()
    }

    fn scalar_inner() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::identity(1), inner_layout(1)).unwrap()
    }

    #[test]
    fn trivial_inner_gives_even_parity_projector() {
        let rho = make_secret_sharing_state(&scalar_inner(), &identity_unitaries(3, 1), 3).unwrap();
        let psi0 = make_even_parity_state(0).unwrap().projector();
        assert_eq!(rho.matrix(), psi0.matrix());
    }

    #[test]
    fn pauli_unitaries_blockwise() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let us: BTreeMap<ParityIndex, ComplexMatrix> = [
            ("000", ComplexMatrix::identity(2)),
            ("011", x.clone()),
            ("101", z.clone()),
            ("110", &x * &z),
        ]
        .into_iter()
        .map(|(k, u)| (k.parse().unwrap(), u))
        .collect();
        let inner =
            DensityMatrix::new(ComplexMatrix::identity(2).scale(0.5), inner_layout(2)).unwrap();
        let rho = make_secret_sharing_state(&inner, &us, 3).unwrap();
        assert_eq!(rho.dim(), 16);
        rho.validate(1e-10).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let block = rho.matrix().submatrix(2 * i, 2 * j, 2, 2);
                let (pi, pj) = (
                    ParityIndex::new(3, i).unwrap(),
                    ParityIndex::new(3, j).unwrap(),
                );
                let expected = match (us.get(&pi), us.get(&pj)) {
                    (Some(ui), Some(uj)) => (&(ui * inner.matrix()) * &uj.adjoint()).scale(0.25),
                    _ => ComplexMatrix::zeros(2, 2),
                };
                assert!(block.max_abs_diff(&expected) < 1e-15, "block ({pi},{pj})");
            }
        }
    }

    #[test]
    fn secret_sharing_key_errors() {
        let mut us = identity_unitaries(3, 1);
        let missing = us.remove(&"101".parse().unwrap()).unwrap();
        assert_eq!(
            make_secret_sharing_state(&scalar_inner(), &us, 3).unwrap_err(),
            Error::MissingParityKey("101".into())
        );
        us.insert("101".parse().unwrap(), missing);
        us.insert("001".parse().unwrap(), ComplexMatrix::identity(1));
        assert_eq!(
            make_secret_sharing_state(&scalar_inner(), &us, 3).unwrap_err(),
            Error::OddParityKey("001".into())
        );
        let mut us = identity_unitaries(3, 1);
        us.insert(
            "000".parse().unwrap(),
            ComplexMatrix::scalar(C64::new(2.0, 0.0)),
        );
        assert!(matches!(
            make_secret_sharing_state(&scalar_inner(), &us, 3),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn random_instances_are_states_with_odd_blocks_zero() {
        let mut rng = seeded_rng(7);
        for n in [3, 4] {
            for dim in 1..=3 {
                let inst = SecretSharingInstance::random(n, dim, &mut rng).unwrap();
                inst.state.validate(1e-10).unwrap();
                for i in ParityIndex::all(n).unwrap() {
                    for j in ParityIndex::all(n).unwrap() {
                        if i.is_even() && j.is_even() {
                            continue;
                        }
                        let b = inst.state.matrix().submatrix(
                            i.value() * dim,
                            j.value() * dim,
                            dim,
                            dim,
                        );
                        assert!(b.max_abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn even_parity_basis() {
        let s0 = make_even_parity_state(0).unwrap();
        let idx = [0, 3, 5, 6];
        for (k, z) in s0.amplitudes().iter().enumerate() {
            let expected = if idx.contains(&k) { 0.5 } else { 0.0 };
            assert_eq!(*z, C64::new(expected, 0.0));
        }
        let s3 = make_even_parity_state(3).unwrap();
        let expected3 = [0.5, 0.0, 0.0, -0.5, 0.0, -0.5, 0.5, 0.0];
        for (z, e) in s3.amplitudes().iter().zip(expected3) {
            assert_eq!(*z, C64::new(e, 0.0));
        }
        for i in 0..4 {
            for j in 0..4 {
                let ov = make_even_parity_state(i)
                    .unwrap()
                    .overlap(&make_even_parity_state(j).unwrap());
                assert_abs_diff_eq!(ov.re, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
        assert!(make_even_parity_state(4).is_err());
    }

    #[test]
    fn single_qubit_marginal_of_psi0_is_maximally_mixed() {
        let p = make_even_parity_state(0).unwrap().projector();
        for keep in ["A", "B", "C"] {
            let (m, _) = partial_trace(p.matrix(), p.layout(), &[keep]).unwrap();
            assert!(m.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        }
    }

    #[test]
    fn private_state_examples() {
        let one = ComplexMatrix::identity(1);
        let bell = make_private_state(&scalar_inner(), &one, &one).unwrap();
        let h = 0.5;
        let expected = ComplexMatrix::from_real_rows(&[
            &[h, 0.0, 0.0, h],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[h, 0.0, 0.0, h],
        ]);
        assert!(bell.matrix().max_abs_diff(&expected) < 1e-15);

        let mut rng = seeded_rng(3);
        let inner =
            DensityMatrix::new(random_density_matrix(3, 2, &mut rng), inner_layout(3)).unwrap();
        let (u0, u1) = (
            haar_unitary_with(3, &mut rng),
            haar_unitary_with(3, &mut rng),
        );
        let p = make_private_state(&inner, &u0, &u1).unwrap();
        p.validate(1e-10).unwrap();
        let off = p.matrix().submatrix(0, 9, 3, 3);
        assert_abs_diff_eq!(trace_norm(&off), 0.5, epsilon = 1e-10);
        assert!(matches!(
            make_private_state(&inner, &u0.scale(2.0), &u1),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn flip_properties() {
        let f2 = make_flip(2);
        let e = |k| basis_vector(4, k);
        assert_eq!(f2.apply(&e(1)), e(2));
        assert_eq!(f2.apply(&e(2)), e(1));
        assert_eq!(f2.apply(&e(0)), e(0));
        assert_eq!(f2.apply(&e(3)), e(3));
        for d in 2..6 {
            let f = make_flip(d);
            assert_eq!(&f * &f, ComplexMatrix::identity(d * d));
            assert_eq!(f.trace(), C64::new(d as f64, 0.0));
        }
    }

    #[test]
    fn werner_properties() {
        let singlet = {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let v = [0.0, h, -h, 0.0].map(|x| C64::new(x, 0.0));
            ComplexMatrix::outer(&v, &v)
        };
        let rho_a2 = make_werner(2, WernerKind::Antisymmetric).unwrap();
        assert!(rho_a2.matrix().max_abs_diff(&singlet) < 1e-15);
        for d in 2..6 {
            let s = make_werner(d, WernerKind::Symmetric).unwrap();
            let a = make_werner(d, WernerKind::Antisymmetric).unwrap();
            s.validate(1e-10).unwrap();
            a.validate(1e-10).unwrap();
            assert!((s.matrix() * a.matrix()).max_abs() <= 1e-12);
            let f = make_flip(d);
            assert!((&f * s.matrix()).max_abs_diff(s.matrix()) <= 1e-12);
            assert!((&f * a.matrix()).max_abs_diff(&a.matrix().scale(-1.0)) <= 1e-12);
        }
        assert!(make_werner(1, WernerKind::Symmetric).is_err());
    }

    #[test]
    fn example_state_shape_and_validity() {
        let rho = make_example_state(0.25, 0.25, 2).unwrap();
        assert_eq!(rho.dim(), 64);
        rho.validate(1e-10).unwrap();
        assert_eq!(rho.layout().labels(), vec!["A", "B", "C", "A'", "B'", "C'"]);
        assert!(make_example_state(0.6, -0.1, 2).is_err());
        assert!(make_example_state(0.3, 0.3, 2).is_err());
    }

    #[test]
    fn general_example_checks() {
        let q = |bits: &[usize]| {
            DensityMatrix::basis_state(SystemLayout::from_dims(&[("S", 4)]).unwrap(), bits).unwrap()
        };
        let sigmas = [q(&[0]), q(&[1]), q(&[2]), q(&[3])];
        let rho = make_general_example(&[1.0, 0.0, 0.0, 0.0], &sigmas).unwrap();
        let expected = tensor(
            make_even_parity_state(0).unwrap().projector().matrix(),
            sigmas[0].matrix(),
        );
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
        let same = [q(&[0]), q(&[0]), q(&[1]), q(&[2])];
        assert_eq!(
            make_general_example(&[0.25; 4], &same).unwrap_err(),
            Error::OverlappingSupports(0, 1)
        );
        assert!(make_general_example(&[0.5; 4], &sigmas).is_err());
    }

    #[test]
    fn purification_round_trip() {
        let mut rng = seeded_rng(21);
        for rank in 1..=8 {
            let rho = DensityMatrix::new(
                random_density_matrix(8, rank, &mut rng),
                SystemLayout::single("S", 8),
            )
            .unwrap();
            let psi = purify(&rho).unwrap();
            assert_eq!(psi.layout().dim_of(EVE).unwrap(), rank);
            let back = psi.reduced(&["S"]).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn purify_pure_and_mixed_qubit() {
        let phi = make_even_parity_state(2).unwrap();
        let psi = purify(&phi.projector()).unwrap();
        assert_eq!(psi.layout().dim_of(EVE).unwrap(), 1);
        assert_abs_diff_eq!(
            psi.overlap(
                &phi.tensor(
                    &PureState::new(vec![C64::new(1.0, 0.0)], SystemLayout::single(EVE, 1))
                        .unwrap()
                )
                .unwrap()
            )
            .norm(),
            1.0,
            epsilon = 1e-12
        );

        let mixed = DensityMatrix::maximally_mixed(SystemLayout::single("Q", 2));
        let psi = purify(&mixed).unwrap();
        let bell = PureState::new(
            vec![
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
            SystemLayout::from_dims(&[("Q", 2), (EVE, 2)]).unwrap(),
        )
        .unwrap();
        let eve = psi.reduced(&[EVE]).unwrap();
        let f = fidelity(&eve, &bell.reduced(&[EVE]).unwrap()).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
        assert!(
            psi.reduced(&["Q"])
                .unwrap()
                .matrix()
                .max_abs_diff(mixed.matrix())
                < 1e-12
        );
    }
}
