//! Seeded random matrices: Haar unitaries, Ginibre-style PSD matrices and
//! random density operators.

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};

/// The crate's reproducible RNG.
pub type StateRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary drawn from `rng`.
///
/// QR of a complex Ginibre matrix, with the columns of `Q` rephased so that
/// `R` has a positive real diagonal.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng).to_nalgebra();
    let qr = QR::new(g);
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j])
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(dim, &mut seeded_rng(seed))
}

/// `G G†` for a `dim × rank` Ginibre `G`; rank `min(dim, rank)` almost surely.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rank, rng);
    (&g * &g.adjoint()).hermitian_part()
}

/// Random density operator of the given rank, normalized to unit trace.
pub fn random_density_matrix<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let m = random_psd(dim, rank.max(1), rng);
    let t = m.trace().re;
    m.scale(1.0 / t)
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, dim, rng).hermitian_part()
}

/// Random unit vector.
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let n = super::matrix::vector_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        for dim in [1, 2, 3, 8, 33] {
            let u = haar_unitary(dim, dim as u64 * 17);
            assert!(u.unitarity_error() <= 1e-10, "dim {dim}");
        }
    }

    #[test]
    fn dim_one_is_a_phase() {
        let u = haar_unitary(1, 9);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(haar_unitary(5, 42), haar_unitary(5, 42));
        assert_ne!(haar_unitary(5, 42), haar_unitary(5, 43));
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U_00] = 0 and E|U_00|² = 1/d for Haar measure
        let dim = 3;
        let mut rng = seeded_rng(1);
        let samples = 4000;
        let (mut mean, mut second) = (C64::new(0.0, 0.0), 0.0);
        for _ in 0..samples {
            let u = haar_unitary_with(dim, &mut rng);
            mean += u[(0, 0)];
            second += u[(0, 0)].norm_sqr();
        }
        mean /= samples as f64;
        second /= samples as f64;
        assert!(mean.norm() < 0.05);
        assert!((second - 1.0 / dim as f64).abs() < 0.02);
    }

    #[test]
    fn random_density_is_normalized() {
        let mut rng = seeded_rng(2);
        let rho = random_density_matrix(6, 3, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.hermiticity_error() == 0.0);
    }
}
