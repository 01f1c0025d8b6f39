//! Dense complex numerics on finite-dimensional Hilbert spaces.
//!
//! Everything here works on [`ComplexMatrix`] (a dense `nalgebra` matrix of
//! `Complex64`). Hermitian inputs are diagonalized by [`eigh`]; spectral
//! calculus, weighted traces and the entropy functionals are built on top.
//!
//! Tolerances scale with the dimension `n`, machine epsilon and the Frobenius
//! norm of the input, so the same code is stable from `1x1` up to the
//! `|G|^2`-sized operators of the larger groups.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{input, mismatch, Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const EPS: f64 = f64::EPSILON;

/// Multiplier applied to `n * eps * ||A||` for Hermiticity and
/// reconstruction checks.
pub const SPECTRAL_SLACK: f64 = 64.0;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c(v, 0.0);
    }
    m
}

/// `|v><v|` for a column vector given as a slice.
pub fn outer(v: &[Complex64]) -> ComplexMatrix {
    let n = v.len();
    ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

pub fn hermitian_tolerance(a: &ComplexMatrix) -> f64 {
    SPECTRAL_SLACK * a.nrows().max(1) as f64 * EPS * frobenius(a)
}

/// `(A + A^dagger) / 2`.
pub fn symmetrize(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn ensure_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(mismatch(
            "square matrix",
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    let asym = frobenius(&(a - a.adjoint()));
    let tol = hermitian_tolerance(a);
    if asym > tol {
        return input(format!(
            "matrix is not Hermitian: ||A - A^dagger|| = {asym:.3e} exceeds {tol:.3e}"
        ));
    }
    Ok(symmetrize(a))
}

/// Spectral decomposition `A = U diag(eigenvalues) U^dagger` with
/// eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    /// `U diag(f(lambda)) U^dagger` without domain checks.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fx = f(lam);
            scaled.column_mut(j).scale_mut(fx);
        }
        scaled * u.adjoint()
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn eigh(a: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let h = ensure_hermitian(a)?;
    let n = h.nrows();
    // Exactly zero rows are eigenvectors for 0; splitting them off also keeps
    // the solver away from the structured zeros it handles worst.
    let zero = c(0.0, 0.0);
    let active: Vec<usize> = (0..n).filter(|&i| h.row(i).iter().any(|z| *z != zero)).collect();
    let m = active.len();
    let (sub_vals, sub_vecs) = if m == n {
        dense_eigh(h)?
    } else {
        dense_eigh(ComplexMatrix::from_fn(m, m, |i, j| h[(active[i], active[j])]))?
    };
    let mut values = sub_vals;
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &row) in active.iter().enumerate() {
        for j in 0..m {
            vectors[(row, j)] = sub_vecs[(k, j)];
        }
    }
    let mut col = m;
    for i in (0..n).filter(|i| active.binary_search(i).is_err()) {
        vectors[(i, col)] = c(1.0, 0.0);
        values.push(0.0);
        col += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(HermitianSpectrum {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |r, k| vectors[(r, order[k])]),
    })
}

fn all_finite<'a>(xs: impl IntoIterator<Item = &'a f64>) -> bool {
    xs.into_iter().all(|x| x.is_finite())
}

/// Fixed unitary used to move a matrix off structure that trips the solver.
fn rebasing_unitary(n: usize) -> ComplexMatrix {
    crate::random::haar_unitary(&mut crate::random::stream(0x7e7a_5eed, n as u64), n)
}

fn dense_eigh(h: ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::new(h.clone());
    if all_finite(eig.eigenvalues.iter()) && eig.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Ok((eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors));
    }
    // nalgebra's tridiagonal QR can underflow to NaN on matrices with many
    // exact zeros; the spectrum is basis independent, so retry rotated.
    let u = rebasing_unitary(n);
    let eig = SymmetricEigen::new(symmetrize(&(u.adjoint() * &h * &u)));
    let vectors = &u * eig.eigenvectors;
    if all_finite(eig.eigenvalues.iter()) && vectors.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Ok((eig.eigenvalues.iter().cloned().collect(), vectors));
    }
    Err(Error::Domain("eigensolver produced non-finite values".into()))
}

pub fn eigvalsh(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.eigenvalues)
}

/// Spectral calculus `f(A)` for Hermitian `A`. Fails if `f` is not finite at
/// some eigenvalue.
pub fn matrix_fn(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let spec = eigh(a)?;
    for &lam in &spec.eigenvalues {
        let v = f(lam);
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "f({lam:.6e}) = {v} is not finite"
            )));
        }
    }
    Ok(spec.apply(f))
}

/// Numerical rank: singular values below `n * eps * sigma_max * 16` count
/// as zero, `n` being the larger matrix dimension.
pub fn numerical_rank(a: &ComplexMatrix) -> usize {
    let n = a.nrows().max(a.ncols());
    if n == 0 {
        return 0;
    }
    let sv = singular_values(a);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    rank_with_threshold(&sv, n as f64 * EPS * smax * 16.0)
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let sv = a.clone().singular_values();
    if all_finite(sv.iter()) || a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return sv.iter().cloned().collect();
    }
    let sv = (rebasing_unitary(a.nrows()) * a).singular_values();
    assert!(all_finite(sv.iter()), "SVD produced non-finite singular values");
    sv.iter().cloned().collect()
}

pub fn rank_with_threshold(singular_values: &[f64], threshold: f64) -> usize {
    singular_values.iter().filter(|&&s| s > threshold).count()
}

/// One diagonal block of a [`WeightedTrace`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBlock {
    pub dim: usize,
    pub weight: f64,
}

/// `phi(X) = sum_b weight_b * tr(X_bb)` over the diagonal blocks of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTrace {
    blocks: Vec<TraceBlock>,
}

impl WeightedTrace {
    pub fn new(blocks: Vec<TraceBlock>) -> Result<Self> {
        if let Some(b) = blocks.iter().find(|b| !(b.weight > 0.0) || !b.weight.is_finite()) {
            return input(format!("trace weight must be positive, got {}", b.weight));
        }
        Ok(Self { blocks })
    }

    /// The canonical trace on `n x n` matrices.
    pub fn unit(n: usize) -> Self {
        Self {
            blocks: vec![TraceBlock { dim: n, weight: 1.0 }],
        }
    }

    pub fn scalar(n: usize, weight: f64) -> Result<Self> {
        Self::new(vec![TraceBlock { dim: n, weight }])
    }

    pub fn blocks(&self) -> &[TraceBlock] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.blocks.iter().all(|b| b.weight == 1.0)
    }

    /// Start offsets of each block along the diagonal.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.dim;
                Some(start)
            })
            .collect()
    }

    pub fn evaluate(&self, x: &ComplexMatrix) -> Result<Complex64> {
        let n = self.total_dim();
        if x.shape() != (n, n) {
            return Err(mismatch(format!("{n}x{n}"), format!("{:?}", x.shape())));
        }
        Ok(self
            .blocks
            .iter()
            .zip(self.offsets())
            .map(|(b, off)| {
                let tr: Complex64 = (off..off + b.dim).map(|i| x[(i, i)]).sum();
                tr * b.weight
            })
            .sum())
    }

    /// Same trace with every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.blocks
                .iter()
                .map(|b| TraceBlock {
                    dim: b.dim,
                    weight: b.weight * factor,
                })
                .collect(),
        )
    }
}

/// Positive semidefinite, block-diagonal operator with unit weighted trace.
///
/// Block eigenvalues are computed once at construction; both entropy
/// functionals read them from here.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    trace: WeightedTrace,
    block_spectra: Vec<Vec<f64>>,
}

pub const DENSITY_TRACE_TOL: f64 = 1e-10;

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, trace: WeightedTrace) -> Result<Self> {
        let n = trace.total_dim();
        if matrix.shape() != (n, n) {
            return Err(mismatch(
                format!("{n}x{n} (trace blocks)"),
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        let matrix = ensure_hermitian(&matrix)?;
        let norm = frobenius(&matrix);
        let tol = SPECTRAL_SLACK * n.max(1) as f64 * EPS * norm;

        let offsets = trace.offsets();
        let mut off_block = 0.0f64;
        for (bi, (b, &off)) in trace.blocks().iter().zip(&offsets).enumerate() {
            for (bj, (b2, &off2)) in trace.blocks().iter().zip(&offsets).enumerate() {
                if bi == bj {
                    continue;
                }
                for i in off..off + b.dim {
                    for j in off2..off2 + b2.dim {
                        off_block = off_block.max(matrix[(i, j)].norm());
                    }
                }
            }
        }
        if off_block > tol {
            return input(format!(
                "density has {off_block:.3e} mass outside its trace blocks"
            ));
        }

        let mut block_spectra = Vec::with_capacity(trace.blocks().len());
        for (b, &off) in trace.blocks().iter().zip(&offsets) {
            let sub = matrix.view((off, off), (b.dim, b.dim)).into_owned();
            let eig = eigvalsh(&sub)?;
            if let Some(&min) = eig.first() {
                if min < -tol {
                    return input(format!(
                        "density has negative eigenvalue {min:.3e} (floor {:.3e})",
                        -tol
                    ));
                }
            }
            block_spectra.push(eig);
        }

        let phi = trace.evaluate(&matrix)?;
        if (phi.re - 1.0).abs() > DENSITY_TRACE_TOL {
            return input(format!("weighted trace of density is {:.12}, not 1", phi.re));
        }
        Ok(Self {
            matrix,
            trace,
            block_spectra,
        })
    }

    /// Unit-weight density; the common case for states on `B(l2(G))`.
    pub fn unit(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, WeightedTrace::unit(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> &WeightedTrace {
        &self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues of each diagonal block.
    pub fn block_spectra(&self) -> &[Vec<f64>] {
        &self.block_spectra
    }

    /// All eigenvalues with the weight of the block they live in.
    pub fn weighted_eigenvalues(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.trace
            .blocks()
            .iter()
            .zip(&self.block_spectra)
            .flat_map(|(b, spec)| spec.iter().map(move |&l| (l, b.weight)))
    }

    fn entropy_cutoff(&self) -> f64 {
        let lmax = self
            .block_spectra
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x));
        self.dim().max(1) as f64 * EPS * lmax
    }
}

/// `-lambda log lambda`, with eigenvalues under `cutoff` treated as zero.
fn eta(lambda: f64, cutoff: f64) -> f64 {
    if lambda < cutoff || lambda <= 0.0 {
        0.0
    } else {
        -lambda * lambda.ln()
    }
}

/// `H(D, phi) = -phi(D log D)`.
pub fn weighted_entropy(d: &DensityOperator) -> f64 {
    let cutoff = d.entropy_cutoff();
    d.weighted_eigenvalues()
        .map(|(l, w)| w * eta(l, cutoff))
        .fold(0.0, |acc, x| acc + x)
}

/// Decreasing rearrangement `t -> mu_t(D)` of a density, as a step function.
///
/// `mu_t = inf { s >= 0 : phi(e_(s, inf)) <= t }`; each distinct eigenvalue
/// occupies an interval whose length is the weighted trace of its spectral
/// projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularNumbers {
    /// `(value, interval length)`, values strictly decreasing.
    pub steps: Vec<(f64, f64)>,
}

impl SingularNumbers {
    pub fn of(d: &DensityOperator) -> Self {
        let mut pairs: Vec<(f64, f64)> = d
            .weighted_eigenvalues()
            .map(|(l, w)| (l.max(0.0), w))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut steps: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            match steps.last_mut() {
                Some(last) if last.0 == v => last.1 += w,
                _ => steps.push((v, w)),
            }
        }
        Self { steps }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let mut end = 0.0;
        for &(v, len) in &self.steps {
            end += len;
            if t < end {
                return v;
            }
        }
        0.0
    }

    /// `int mu_t dt`; equals 1 for a density.
    pub fn mass(&self) -> f64 {
        self.steps.iter().map(|&(v, len)| v * len).sum()
    }

    pub fn entropy(&self, cutoff: f64) -> f64 {
        self.steps.iter().map(|&(v, len)| len * eta(v, cutoff)).fold(0.0, |acc, x| acc + x)
    }
}

/// `-int_0^inf mu_t log mu_t dt`, integrated exactly over the steps.
pub fn singular_number_entropy(d: &DensityOperator) -> f64 {
    SingularNumbers::of(d).entropy(d.entropy_cutoff())
}

/// `log sum_i exp(x_i)` without overflow.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Gibbs variational inequality `tr(rho A) + tr(rho log rho) >= -log tr(e^{-A})`.
/// Returns `(lhs, rhs)`.
pub fn gibbs_check(a: &ComplexMatrix, rho: &DensityOperator) -> Result<(f64, f64)> {
    if a.shape() != rho.matrix().shape() {
        return Err(mismatch(
            format!("{:?}", rho.matrix().shape()),
            format!("{:?}", a.shape()),
        ));
    }
    if !rho.trace().is_unit() || rho.trace().blocks().len() != 1 {
        return input("gibbs_check needs a density under the unit-weight trace");
    }
    let spec_a = eigh(a)?;
    let energy = trace(&(rho.matrix() * a)).re;
    let neg_entropy = -weighted_entropy(rho);
    let rhs = -log_sum_exp(spec_a.eigenvalues.iter().map(|l| -l));
    Ok((energy + neg_entropy, rhs))
}

/// `e^{-A} / tr(e^{-A})`, the equality case of [`gibbs_check`].
pub fn gibbs_state(a: &ComplexMatrix) -> Result<DensityOperator> {
    let spec = eigh(a)?;
    let lse = log_sum_exp(spec.eigenvalues.iter().map(|l| -l));
    DensityOperator::unit(spec.apply(|l| (-l - lse).exp()))
}

/// Golden-Thompson `tr(e^{A+B}) <= tr(e^{A/2} e^B e^{A/2})`. Returns `(lhs, rhs)`.
pub fn golden_thompson_check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(f64, f64)> {
    if a.shape() != b.shape() {
        return Err(mismatch(
            format!("{:?}", a.shape()),
            format!("{:?}", b.shape()),
        ));
    }
    let lhs = eigvalsh(&(a + b))?.iter().map(|l| l.exp()).sum();
    let half_a = matrix_fn(a, |l| (0.5 * l).exp())?;
    let exp_b = matrix_fn(b, f64::exp)?;
    let rhs = trace(&(&half_a * exp_b * &half_a)).re;
    Ok((lhs, rhs))
}
