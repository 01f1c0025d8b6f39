//! Verifiers for the entropic and rank-support uncertainty relations on a
//! finite quantum pair.
//!
//! Three routes evaluate the same entropic inequality:
//!
//! * [`verify_dual_density_route`]: `H(D, tr) + H(D^, tr/n) >= H(rho)` with `D^` the dual
//!   density `n F E^(rho) F^dagger`, kept in compressed class blocks under the
//!   per-class weights `d_alpha / n`.
//! * [`verify_entropic_uncertainty`]: `H(E(rho)) + H(E^(rho)) >= H(rho) + log n`, all under
//!   the unit trace.
//! * [`verify_correlation_route`]: Shannon entropy of the diagonal plus the entropy of
//!   the correlation matrix `C_rho / n`.
//!
//! The slacks of all three coincide.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{input, Result};
use crate::irreps::fourier_coefficients;
use crate::linalg::{
    c, rank_with_threshold, singular_values, weighted_entropy, ComplexMatrix, DensityOperator, TraceBlock,
    WeightedTrace, EPS,
};
use crate::pair::{QuantumPair, StateDensity};

/// Absolute tolerance on inequality slack.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Multiplier in the `n * eps * scale * 16` rank and support thresholds.
const THRESHOLD_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub h_d: f64,
    pub h_dhat: f64,
    pub h_rho: f64,
    pub bound: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl UncertaintyReport {
    pub fn new(h_d: f64, h_dhat: f64, h_rho: f64, bound: f64, tolerance: f64) -> Self {
        let slack = h_d + h_dhat - bound;
        Self {
            h_d,
            h_dhat,
            h_rho,
            bound,
            slack,
            tolerance,
            pass: slack >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankSupportReport {
    pub support_measure: f64,
    pub rank_sum: usize,
    pub product: f64,
    pub rhs: f64,
    /// `product - rhs`.
    pub margin: f64,
    pub support_threshold: f64,
    pub rank_threshold: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RankSupportReport {
    fn new(
        support_measure: f64,
        rank_sum: usize,
        rhs: f64,
        support_threshold: f64,
        rank_threshold: f64,
        tolerance: f64,
    ) -> Self {
        let product = support_measure * rank_sum as f64;
        Self {
            support_measure,
            rank_sum,
            product,
            rhs,
            margin: product - rhs,
            support_threshold,
            rank_threshold,
            tolerance,
            pass: product >= rhs - tolerance,
        }
    }
}

/// Shannon entropy of a probability vector with the `0 log 0 = 0` cutoff.
fn shannon(p: &[f64]) -> f64 {
    let max = p.iter().cloned().fold(0.0, f64::max);
    let cutoff = p.len() as f64 * EPS * max;
    p.iter()
        .filter(|&&x| x >= cutoff && x > 0.0)
        .map(|&x| -x * x.ln())
        .fold(0.0, |acc, x| acc + x)
}

/// The dual density `D^` in compressed form: block `alpha` is
/// `n X_alpha` where `F E^(rho) F^dagger = (+) X_alpha (x) I`, weighted by
/// `d_alpha / n` (each block stands for `d_alpha` copies under `tr / n`).
pub fn dual_density(pair: &QuantumPair, rho: &StateDensity) -> Result<DensityOperator> {
    let n = pair.dim();
    let fourier = pair.fourier();
    let projected = pair.project_dual(rho.matrix());
    let blocks = fourier.class_blocks(&fourier.to_dual(&projected));
    let total: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = ComplexMatrix::zeros(total, total);
    let mut weights = Vec::with_capacity(blocks.len());
    let mut off = 0;
    for (sc, b) in fourier.layout().iter().zip(&blocks) {
        let d = sc.dim;
        m.view_mut((off, off), (d, d)).copy_from(&b.scale(n as f64));
        weights.push(TraceBlock {
            dim: d,
            weight: d as f64 / n as f64,
        });
        off += d;
    }
    DensityOperator::new(m, WeightedTrace::new(weights)?)
}

pub fn verify_dual_density_route(pair: &QuantumPair, rho: &StateDensity, tolerance: f64) -> Result<UncertaintyReport> {
    check_dim(pair, rho)?;
    let h_d = weighted_entropy(&pair.expect_diagonal(rho));
    let h_dhat = weighted_entropy(&dual_density(pair, rho)?);
    let h_rho = weighted_entropy(rho.density());
    Ok(UncertaintyReport::new(h_d, h_dhat, h_rho, h_rho, tolerance))
}

pub fn verify_entropic_uncertainty(pair: &QuantumPair, rho: &StateDensity, tolerance: f64) -> Result<UncertaintyReport> {
    check_dim(pair, rho)?;
    let h_d = weighted_entropy(&pair.expect_diagonal(rho));
    let h_dhat = weighted_entropy(&pair.expect_dual(rho));
    let h_rho = weighted_entropy(rho.density());
    let bound = h_rho + (pair.dim() as f64).ln();
    Ok(UncertaintyReport::new(h_d, h_dhat, h_rho, bound, tolerance))
}

pub fn verify_correlation_route(pair: &QuantumPair, rho: &StateDensity, tolerance: f64) -> Result<UncertaintyReport> {
    check_dim(pair, rho)?;
    let n = pair.dim();
    let mu: Vec<f64> = (0..n).map(|s| rho.matrix()[(s, s)].re).collect();
    let h_mu = shannon(&mu);
    let corr = pair.correlation_matrix(rho).scale(1.0 / n as f64);
    let h_corr = weighted_entropy(&DensityOperator::unit(corr)?);
    let h_rho = weighted_entropy(rho.density());
    Ok(UncertaintyReport::new(h_mu, h_corr, h_rho, h_rho + (n as f64).ln(), tolerance))
}

/// Rank-support inequality for a positive, possibly unnormalized `rho`.
pub fn verify_rank_support_state(pair: &QuantumPair, rho: &ComplexMatrix, tolerance: f64) -> Result<RankSupportReport> {
    let n = pair.dim();
    if rho.shape() != (n, n) {
        return Err(crate::error::mismatch(format!("{n}x{n}"), format!("{:?}", rho.shape())));
    }
    if rho.iter().all(|z| *z == c(0.0, 0.0)) {
        return input("rank-support check needs a nonzero operator");
    }
    let state = StateDensity::normalized(rho)?;

    let diag: Vec<f64> = (0..n).map(|s| state.matrix()[(s, s)].re).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let support_threshold = n as f64 * EPS * dmax * THRESHOLD_FACTOR;
    let support = diag.iter().filter(|&&x| x > support_threshold).count() as f64 / n as f64;

    let fourier = pair.fourier();
    let blocks = fourier.class_blocks(&fourier.to_dual(&pair.project_dual(state.matrix())));
    let (rank_sum, rank_threshold) = weighted_rank(pair, &blocks);

    let rhs = weighted_entropy(state.density()).exp();
    Ok(RankSupportReport::new(
        support,
        rank_sum,
        rhs,
        support_threshold,
        rank_threshold,
        tolerance,
    ))
}

/// `sum_alpha d_alpha rank(B_alpha)` with a threshold shared across classes.
fn weighted_rank(pair: &QuantumPair, blocks: &[ComplexMatrix]) -> (usize, f64) {
    let n = pair.dim();
    let svs: Vec<Vec<f64>> = blocks.iter().map(singular_values).collect();
    let smax = svs.iter().flatten().cloned().fold(0.0, f64::max);
    let threshold = n as f64 * EPS * smax * THRESHOLD_FACTOR;
    let sum = pair
        .bundle()
        .classes()
        .iter()
        .zip(&svs)
        .map(|(cl, sv)| cl.dim * rank_with_threshold(sv, threshold))
        .sum();
    (sum, threshold)
}

/// `mu(supp f) * sum_alpha d_alpha rank(f^(alpha)) >= 1`.
pub fn verify_rank_support_function(pair: &QuantumPair, f: &[Complex64], tolerance: f64) -> Result<RankSupportReport> {
    let n = pair.dim();
    if f.len() != n {
        return Err(crate::error::mismatch(n, f.len()));
    }
    let density: Vec<f64> = f.iter().map(|z| z.norm_sqr()).collect();
    let dmax = density.iter().cloned().fold(0.0, f64::max);
    if dmax == 0.0 {
        return input("rank-support check needs a nonzero function");
    }
    let support_threshold = n as f64 * EPS * dmax * THRESHOLD_FACTOR;
    let support = density.iter().filter(|&&x| x > support_threshold).count() as f64 / n as f64;
    let blocks = fourier_coefficients(f, pair.bundle())?;
    let (rank_sum, rank_threshold) = weighted_rank(pair, &blocks);
    Ok(RankSupportReport::new(
        support,
        rank_sum,
        1.0,
        support_threshold,
        rank_threshold,
        tolerance,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MubReport {
    pub max_deviation: f64,
    pub orthonormality: f64,
}

/// Overlaps `|<delta_s, n^-1/2 chi^t>|^2` against `1/n` for abelian groups.
pub fn mub_check(pair: &QuantumPair) -> Result<MubReport> {
    let bundle = pair.bundle();
    if !bundle.is_abelian() {
        return input(format!(
            "{} is not abelian; mutually unbiased character bases only exist for abelian groups, use the complementarity check",
            pair.group().name()
        ));
    }
    let n = pair.dim();
    let nf = n as f64;
    let chars: Vec<&Vec<Complex64>> = bundle.classes().iter().map(|cl| &cl.character).collect();
    let mut max_deviation = 0.0f64;
    for chi in &chars {
        for z in chi.iter() {
            max_deviation = max_deviation.max((z.norm_sqr() / nf - 1.0 / nf).abs());
        }
    }
    let mut orthonormality = 0.0f64;
    for (a, x) in chars.iter().enumerate() {
        for (b, y) in chars.iter().enumerate() {
            let ip: Complex64 = x.iter().zip(y.iter()).map(|(p, q)| p.conj() * q).sum::<Complex64>() / nf;
            let want = if a == b { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((ip - want).norm());
        }
    }
    Ok(MubReport {
        max_deviation,
        orthonormality,
    })
}

fn check_dim(pair: &QuantumPair, rho: &StateDensity) -> Result<()> {
    if rho.dim() != pair.dim() {
        return Err(crate::error::mismatch(pair.dim(), rho.dim()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{equality_census, EnsembleKind};
    use crate::group::GroupSpec;
    use crate::linalg::outer;

    fn pair(spec: GroupSpec) -> QuantumPair {
        QuantumPair::from_spec(&spec).unwrap()
    }

    #[test]
    fn point_state_equality_all_routes() {
        let p = pair(GroupSpec::Symmetric(3));
        let ln6 = 6f64.ln();
        let rho = StateDensity::point(6, 0);
        let t = verify_dual_density_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!(t.h_d.abs() < 1e-12 && t.h_dhat.abs() < 1e-12 && t.slack.abs() < 1e-12, "{t:?}");
        let c33 = verify_entropic_uncertainty(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!((c33.h_dhat - ln6).abs() < 1e-12 && c33.slack.abs() < 1e-12);
        let r = verify_correlation_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!(r.h_d.abs() < 1e-12 && (r.h_dhat - ln6).abs() < 1e-12 && r.slack.abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_equality() {
        let p = pair(GroupSpec::Quaternion8);
        let rho = StateDensity::maximally_mixed(8);
        let t = verify_dual_density_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!((t.h_d - 8f64.ln()).abs() < 1e-12);
        assert!((t.h_rho - 8f64.ln()).abs() < 1e-12);
        assert!(t.h_dhat.abs() < 1e-12 && t.slack.abs() < 1e-12);
        let c33 = verify_entropic_uncertainty(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!(c33.slack.abs() < 1e-12);
    }

    #[test]
    fn uniform_superposition_correlation_route() {
        let p = pair(GroupSpec::Dihedral(4));
        let rho = StateDensity::from_vector(&vec![c(1.0, 0.0); 8]).unwrap();
        let r = verify_correlation_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
        assert!((r.h_d - 8f64.ln()).abs() < 1e-12);
        assert!(r.h_dhat.abs() < 1e-12);
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn census_slacks_vanish() {
        for spec in [GroupSpec::Cyclic(5), GroupSpec::Symmetric(3), GroupSpec::klein_four()] {
            let p = pair(spec);
            for cs in equality_census(&p) {
                let r = verify_entropic_uncertainty(&p, &cs.state, DEFAULT_TOLERANCE).unwrap();
                assert!(r.slack.abs() <= 1e-9, "{}: {r:?}", cs.label);
            }
        }
    }

    #[test]
    fn three_routes_agree_on_random_states() {
        let p = pair(GroupSpec::Dihedral(4));
        for i in 0..30 {
            let kind = if i % 2 == 0 { EnsembleKind::PureHaar } else { EnsembleKind::Wishart { rank: None } };
            let rho = kind.state(8, 99, i).unwrap();
            let a = verify_dual_density_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
            let b = verify_entropic_uncertainty(&p, &rho, DEFAULT_TOLERANCE).unwrap();
            let r = verify_correlation_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
            assert!(a.pass && b.pass && r.pass);
            assert!((a.slack - b.slack).abs() < 1e-9);
            assert!((b.slack - r.slack).abs() < 1e-9);
            // rescaling by n on the dual side shifts the entropy by log n
            assert!((b.h_dhat - a.h_dhat - 8f64.ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn wishart_sweep_on_s3() {
        let p = pair(GroupSpec::Symmetric(3));
        for i in 0..500 {
            let rho = EnsembleKind::Wishart { rank: None }.state(6, 7, i).unwrap();
            let r = verify_dual_density_route(&p, &rho, DEFAULT_TOLERANCE).unwrap();
            assert!(r.slack >= -1e-9, "{r:?}");
        }
    }

    #[test]
    fn rank_support_examples() {
        let p = pair(GroupSpec::Symmetric(3));
        let mut x = vec![c(0.0, 0.0); 6];
        x[p.group().identity()] = c(1.0, 0.0);
        let r = verify_rank_support_state(&p, &outer(&x), 1e-6).unwrap();
        assert_eq!(r.rank_sum, 6);
        assert!((r.support_measure - 1.0 / 6.0).abs() < 1e-15);
        assert!((r.product - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);

        let ones = vec![c(1.0, 0.0); 6];
        let r = verify_rank_support_state(&p, &outer(&ones), 1e-6).unwrap();
        assert_eq!(r.rank_sum, 1);
        assert_eq!(r.support_measure, 1.0);

        let r = verify_rank_support_state(&p, &ComplexMatrix::identity(6, 6).scale(1.0 / 6.0), 1e-6).unwrap();
        assert_eq!(r.rank_sum, 6);
        assert!((r.rhs - 6.0).abs() < 1e-10 && r.margin.abs() < 1e-10);

        // unnormalized input gives the same report
        let r2 = verify_rank_support_state(&p, &ComplexMatrix::identity(6, 6).scale(3.0), 1e-6).unwrap();
        assert_eq!(r.rank_sum, r2.rank_sum);
        assert!((r.rhs - r2.rhs).abs() < 1e-10);

        assert!(verify_rank_support_state(&p, &ComplexMatrix::zeros(6, 6), 1e-6).is_err());
    }

    #[test]
    fn rank_support_function_examples() {
        let n = 7;
        let p = pair(GroupSpec::Cyclic(n));
        let mut delta = vec![c(0.0, 0.0); n];
        delta[3] = c(2.0, 0.0);
        let r = verify_rank_support_function(&p, &delta, 1e-6).unwrap();
        assert_eq!(r.product, 1.0);
        for cl in p.bundle().classes() {
            let r = verify_rank_support_function(&p, &cl.character, 1e-6).unwrap();
            assert_eq!((r.rank_sum, r.support_measure), (1, 1.0));
        }
        assert!(verify_rank_support_function(&p, &vec![c(0.0, 0.0); n], 1e-6).is_err());
    }

    #[test]
    fn function_form_matches_state_form_on_vectors() {
        let p = pair(GroupSpec::Cyclic(12));
        for i in 0..100 {
            let f = crate::ensemble::sparse_vector(12, 5, i);
            let a = verify_rank_support_function(&p, &f, 1e-6).unwrap();
            let b = verify_rank_support_state(&p, &outer(&f), 1e-6).unwrap();
            assert!(a.pass && b.pass);
            assert!(a.product >= 1.0 - 1e-12);
            assert_eq!(a.rank_sum, b.rank_sum);
            assert_eq!(a.support_measure, b.support_measure);
        }
    }

    #[test]
    fn mub_examples() {
        for spec in [GroupSpec::Cyclic(2), GroupSpec::Cyclic(5), GroupSpec::klein_four()] {
            let r = mub_check(&pair(spec)).unwrap();
            assert!(r.max_deviation <= 1e-12 && r.orthonormality <= 1e-12, "{r:?}");
        }
        assert!(mub_check(&pair(GroupSpec::Symmetric(3))).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = pair(GroupSpec::Cyclic(3));
        let rho = StateDensity::maximally_mixed(4);
        assert!(verify_entropic_uncertainty(&p, &rho, DEFAULT_TOLERANCE).is_err());
        assert!(verify_rank_support_function(&p, &[c(1.0, 0.0)], 1e-6).is_err());
    }
}
