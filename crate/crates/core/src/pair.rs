//! The dual pair `l_inf(G)` (diagonal multiplication operators) and `VN(G)`
//! (span of the left regular representation) inside `B(l2(G))`.

use num_complex::Complex64;

use crate::error::{input, mismatch, Result};
use crate::fourier::{fourier_unitary, FourierBasis};
use crate::group::{GroupSpec, GroupTable};
use crate::irreps::{irrep_decomposition, IrrepBundle};
use crate::linalg::{
    c, frobenius, max_abs_diff, numerical_rank, outer, trace, ComplexMatrix, DensityOperator,
};
use crate::multiplicative::MultiplicativeUnitary;
use crate::random::{haar_vector, stream};

/// Seed used for the irrep decomposition when none is given.
pub const DEFAULT_IRREP_SEED: u64 = 0x1f0e_2d3c;

#[derive(Debug, Clone)]
pub struct QuantumPair {
    group: GroupTable,
    bundle: IrrepBundle,
    fourier: FourierBasis,
    w: MultiplicativeUnitary,
}

impl QuantumPair {
    pub fn new(group: GroupTable, irrep_seed: u64) -> Result<Self> {
        let bundle = irrep_decomposition(&group, irrep_seed)?;
        let fourier = fourier_unitary(&group, &bundle)?;
        let w = MultiplicativeUnitary::new(&group);
        Ok(Self {
            group,
            bundle,
            fourier,
            w,
        })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        Self::new(spec.build()?, DEFAULT_IRREP_SEED)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn bundle(&self) -> &IrrepBundle {
        &self.bundle
    }

    pub fn fourier(&self) -> &FourierBasis {
        &self.fourier
    }

    pub fn multiplicative_unitary(&self) -> &MultiplicativeUnitary {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    fn lambda(&self, g: usize) -> ComplexMatrix {
        self.group
            .regular_representation(g)
            .expect("element index from this group")
    }

    /// `E(rho)`: the diagonal part, a density on `l_inf(G)` under `tr`.
    pub fn expect_diagonal(&self, rho: &StateDensity) -> DensityOperator {
        let n = self.dim();
        let mut d = ComplexMatrix::zeros(n, n);
        for s in 0..n {
            d[(s, s)] = c(rho.matrix()[(s, s)].re, 0.0);
        }
        DensityOperator::unit(d).expect("diagonal of a state is a state")
    }

    /// `psi_rho(g) = tr(rho lambda(g)) = sum_t rho[t, g t]`.
    pub fn positive_definite_function(&self, rho: &StateDensity) -> Vec<Complex64> {
        let m = rho.matrix();
        self.group
            .elements()
            .map(|g| self.group.elements().map(|t| m[(t, self.group.mul(g, t))]).sum())
            .collect()
    }

    /// `E^(x) = (1/n) sum_g tr(x lambda(g)^dagger) lambda(g)`, the
    /// Hilbert-Schmidt projection onto `VN(G)`.
    pub fn project_dual(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for g in self.group.elements() {
            // tr(x lambda(g)^dagger) = sum_t x[g t, t]
            let coeff: Complex64 = self
                .group
                .elements()
                .map(|t| x[(self.group.mul(g, t), t)])
                .sum::<Complex64>()
                / n as f64;
            for t in self.group.elements() {
                out[(self.group.mul(g, t), t)] += coeff;
            }
        }
        out
    }

    /// `E(x)` for a general operator: keep the diagonal.
    pub fn project_diagonal(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { x[(i, i)] } else { c(0.0, 0.0) })
    }

    pub fn expect_dual(&self, rho: &StateDensity) -> DensityOperator {
        DensityOperator::unit(self.project_dual(rho.matrix()))
            .expect("conditional expectation of a state is a state")
    }

    /// `C_rho[s, t] = psi_rho(s^-1 t)`.
    pub fn correlation_matrix(&self, rho: &StateDensity) -> ComplexMatrix {
        let psi = self.positive_definite_function(rho);
        let g = &self.group;
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |s, t| psi[g.mul(g.inv(s), t)])
    }

    /// `(omega_{xi, eta} (x) id)(W)`, entry `[t, t'] = sum_{s,s'} conj(eta_s) W[(s,t),(s',t')] xi_s'`.
    pub fn slice_w(&self, xi: &[Complex64], eta: &[Complex64]) -> Result<ComplexMatrix> {
        let n = self.dim();
        if xi.len() != n || eta.len() != n {
            return Err(mismatch(n, format!("{} and {}", xi.len(), eta.len())));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for s in 0..n {
            if eta[s] == c(0.0, 0.0) {
                continue;
            }
            for t in 0..n {
                for s2 in 0..n {
                    for t2 in 0..n {
                        let w = self.w.entry(s, t, s2, t2);
                        if w != 0.0 {
                            out[(t, t2)] += eta[s].conj() * xi[s2] * w;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Theta(omega_xi)(T) = (omega_xi (x) id) W^dagger (1 (x) T) W`.
    pub fn theta_channel(&self, xi: &[Complex64], t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if xi.len() != n {
            return Err(mismatch(n, xi.len()));
        }
        if t.shape() != (n, n) {
            return Err(mismatch(format!("{n}x{n}"), format!("{:?}", t.shape())));
        }
        let perm = self.w.permutation();
        let mut out = ComplexMatrix::zeros(n, n);
        // (W^dagger A W)[x, y] = A[perm x, perm y]; (1 (x) T) is block diagonal in the first leg
        for x in 0..n * n {
            let (a, b) = (perm[x] / n, perm[x] % n);
            let (s, tt) = (x / n, x % n);
            for y in 0..n * n {
                let (a2, b2) = (perm[y] / n, perm[y] % n);
                if a != a2 {
                    continue;
                }
                let (s2, tt2) = (y / n, y % n);
                out[(tt, tt2)] += xi[s].conj() * xi[s2] * t[(b, b2)];
            }
        }
        Ok(out)
    }

    /// Kraus operators `w_k = (omega_{xi, delta_k} (x) id)(W)`, `k` over the
    /// canonical basis.
    pub fn kraus_decomposition(&self, xi: &[Complex64]) -> Result<Vec<ComplexMatrix>> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut e = vec![c(0.0, 0.0); n];
                e[k] = c(1.0, 0.0);
                self.slice_w(xi, &e)
            })
            .collect()
    }

    /// `(J^ xi)(s) = conj(xi(s^-1))`.
    pub fn modular_conjugation(&self, xi: &[Complex64]) -> Vec<Complex64> {
        self.group.elements().map(|s| xi[self.group.inv(s)].conj()).collect()
    }

    pub fn kraus_report(&self, xi: &[Complex64], tests: &[ComplexMatrix]) -> Result<KrausReport> {
        let n = self.dim();
        let ops = self.kraus_decomposition(xi)?;
        let norm_sq: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
        let target = ComplexMatrix::identity(n, n).scale(norm_sq);
        let mut left = ComplexMatrix::zeros(n, n);
        let mut right = ComplexMatrix::zeros(n, n);
        let mut membership = 0.0f64;
        for w in &ops {
            left += w.adjoint() * w;
            right += w * w.adjoint();
            membership = membership.max(self.fourier.block_pattern_residual(&self.fourier.to_dual(w)));
        }
        let mut channel = 0.0f64;
        for t in tests {
            let via_kraus = ops
                .iter()
                .fold(ComplexMatrix::zeros(n, n), |acc, w| acc + w.adjoint() * t * w);
            channel = channel.max(max_abs_diff(&via_kraus, &self.theta_channel(xi, t)?));
        }
        let jxi = self.modular_conjugation(xi);
        let mut adjoint_via_j = 0.0f64;
        for (k, w) in ops.iter().enumerate() {
            let mut e = vec![c(0.0, 0.0); n];
            e[k] = c(1.0, 0.0);
            let v = self.slice_w(&jxi, &self.modular_conjugation(&e))?;
            adjoint_via_j = adjoint_via_j.max(max_abs_diff(&v, &w.adjoint()));
        }
        Ok(KrausReport {
            operators: ops.len(),
            omega_one: norm_sq,
            completeness_left: max_abs_diff(&left, &target),
            completeness_right: max_abs_diff(&right, &target),
            channel_agreement: channel,
            dual_membership: membership,
            adjoint_via_modular_conjugation: adjoint_via_j,
        })
    }

    /// The four equivalent Petz conditions, each as a residual.
    pub fn complementarity_check(&self) -> ComplementarityReport {
        let n = self.dim();
        let nf = n as f64;
        let tau = |x: &ComplexMatrix| trace(x) / nf;
        let unit = |s: usize| {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(s, s)] = c(1.0, 0.0);
            m
        };

        // (i) minimal projections: F^dagger (|v><v| (x) I) F per class, v from
        // the standard basis and a few Haar-random directions.
        let mut rng = stream(0xc0de, 0);
        let mut min_proj = Vec::new();
        for (k, sc) in self.fourier.layout().iter().enumerate() {
            let mut dirs: Vec<Vec<Complex64>> = (0..sc.dim)
                .map(|i| (0..sc.dim).map(|j| c(f64::from(u8::from(i == j)), 0.0)).collect())
                .collect();
            if sc.dim > 1 {
                dirs.push(haar_vector(&mut rng, sc.dim));
                dirs.push(haar_vector(&mut rng, sc.dim));
            }
            for v in dirs {
                let blocks: Vec<ComplexMatrix> = self
                    .fourier
                    .layout()
                    .iter()
                    .enumerate()
                    .map(|(k2, sc2)| {
                        if k2 == k {
                            outer(&v)
                        } else {
                            ComplexMatrix::zeros(sc2.dim, sc2.dim)
                        }
                    })
                    .collect();
                min_proj.push(self.fourier.from_dual(&self.fourier.embed_blocks(&blocks)));
            }
        }
        let mut minimal_projections = 0.0f64;
        for s in 0..n {
            let p = unit(s);
            for q in &min_proj {
                let lhs = tau(&(&p * q));
                let rhs = tau(&p) * tau(q);
                minimal_projections = minimal_projections.max((lhs - rhs).norm());
            }
        }

        // (ii) trace-zero parts orthogonal; (iii) tau factorizes on basis pairs
        let lambdas: Vec<ComplexMatrix> = self.group.elements().map(|g| self.lambda(g)).collect();
        let mut orthogonality = 0.0f64;
        let mut trace_factorization = 0.0f64;
        let centered = |s: usize| unit(s) - ComplexMatrix::identity(n, n).scale(1.0 / nf);
        for s in 0..n {
            let a0 = centered(s);
            let a = unit(s);
            for (g, l) in lambdas.iter().enumerate() {
                if g != self.group.identity() {
                    let ip = trace(&(a0.adjoint() * l));
                    orthogonality = orthogonality.max(ip.norm());
                }
                let lhs = tau(&(&a * l));
                trace_factorization = trace_factorization.max((lhs - tau(&a) * tau(l)).norm());
            }
        }

        // (iv) E^ maps the diagonal algebra onto scalars: E^(diag a) = mean(a) I
        let mut diag_tests: Vec<Vec<f64>> = (0..n)
            .map(|s| (0..n).map(|t| f64::from(u8::from(s == t))).collect())
            .collect();
        for _ in 0..4 {
            diag_tests.push(
                crate::random::gaussian_vector(&mut rng, n)
                    .iter()
                    .map(|z| z.re)
                    .collect(),
            );
        }
        let mut scalar_expectation = 0.0f64;
        for a in diag_tests {
            let m = crate::linalg::diag_real(&a);
            let mean = a.iter().sum::<f64>() / nf;
            let projected = self.project_dual(&m);
            scalar_expectation = scalar_expectation
                .max(max_abs_diff(&projected, &ComplexMatrix::identity(n, n).scale(mean)));
        }

        ComplementarityReport {
            minimal_projections,
            orthogonality,
            trace_factorization,
            scalar_expectation,
            minimal_projections_tested: min_proj.len(),
        }
    }

    /// Rank of the `n^2` products `e_ss lambda(g)` as vectors in `M_n`.
    pub fn span_check(&self) -> usize {
        let n = self.dim();
        let mut assembly = ComplexMatrix::zeros(n * n, n * n);
        let mut col = 0;
        for s in 0..n {
            for g in self.group.elements() {
                // e_ss lambda(g) keeps row s of lambda(g): a single 1 at (s, g^-1 s)
                let l = self.lambda(g);
                for t in 0..n {
                    assembly[(s * n + t, col)] = l[(s, t)];
                }
                col += 1;
            }
        }
        numerical_rank(&assembly)
    }
}

/// A state on `B(l2(G))`: a density under the unit-weight trace.
#[derive(Debug, Clone)]
pub struct StateDensity(DensityOperator);

impl StateDensity {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        DensityOperator::unit(matrix).map(Self)
    }

    /// Vector state `omega_xi / ||xi||^2`.
    pub fn from_vector(xi: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return input("vector state needs a nonzero vector");
        }
        Self::new(outer(xi).scale(1.0 / norm_sq))
    }

    /// `x / tr(x)` for a nonzero positive `x`.
    pub fn normalized(x: &ComplexMatrix) -> Result<Self> {
        let tr = trace(x).re;
        if !(tr > 0.0) || frobenius(x) == 0.0 {
            return input("cannot normalize a zero or non-positive operator");
        }
        Self::new(x.scale(1.0 / tr))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n, n).scale(1.0 / n as f64)).expect("I/n is a state")
    }

    pub fn point(n: usize, s: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(s, s)] = c(1.0, 0.0);
        Self::new(m).expect("point mass is a state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn density(&self) -> &DensityOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(u * self.matrix() * u.adjoint())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausReport {
    pub operators: usize,
    pub omega_one: f64,
    pub completeness_left: f64,
    pub completeness_right: f64,
    pub channel_agreement: f64,
    pub dual_membership: f64,
    pub adjoint_via_modular_conjugation: f64,
}

impl KrausReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.completeness_left,
            self.completeness_right,
            self.channel_agreement,
            self.dual_membership,
            self.adjoint_via_modular_conjugation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementarityReport {
    pub minimal_projections: f64,
    pub orthogonality: f64,
    pub trace_factorization: f64,
    pub scalar_expectation: f64,
    pub minimal_projections_tested: usize,
}

impl ComplementarityReport {
    pub fn residuals(&self) -> [f64; 4] {
        [
            self.minimal_projections,
            self.orthogonality,
            self.trace_factorization,
            self.scalar_expectation,
        ]
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residuals().iter().all(|&r| r <= tol)
    }
}
