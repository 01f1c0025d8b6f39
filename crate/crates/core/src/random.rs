//! Seeded randomness. Every random object in the crate is drawn from a
//! ChaCha20 stream addressed by `(seed, index)`, so trials can be generated
//! in any order or in parallel and still come out bit-identical.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{symmetrize, ComplexMatrix};

pub type Rng64 = ChaCha20Rng;

/// Independent generator for trial `index` under a 64-bit `seed`.
pub fn stream(seed: u64, index: u64) -> Rng64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // Filled row-major so the draw order does not depend on storage layout.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Unit vector, uniform on the complex sphere.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Hermitian matrix with Gaussian entries (GUE up to scale).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    symmetrize(&gaussian_matrix(rng, n, n))
}

/// Haar-random unitary via QR with phase correction.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_vector(&mut stream(42, 0), 5);
        let b = gaussian_vector(&mut stream(42, 0), 5);
        let c = gaussian_vector(&mut stream(42, 1), 5);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(&mut stream(7, 0), 6);
        assert!(max_abs_diff(&(u.adjoint() * &u), &ComplexMatrix::identity(6, 6)) < 1e-12);
    }
}
