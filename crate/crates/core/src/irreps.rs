//! Numerical decomposition of the left regular representation into
//! irreducibles.
//!
//! A random Hermitian matrix averaged over the group action commutes with
//! every `lambda(g)`, so its eigenspaces are invariant subspaces; for a
//! generic draw each eigenspace carries one irreducible copy. Subspaces whose
//! character norm exceeds one are split again with a fresh draw compressed to
//! the subspace. Copies are then grouped into classes by their characters.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{c, eigh, max_abs_diff, ComplexMatrix};
use crate::random::{random_hermitian, stream, Rng64};

/// Fresh random draws allowed per subspace before giving up.
pub const MAX_DRAWS: usize = 12;
/// Characters closer than this (max entrywise) are the same class.
pub const CHARACTER_MATCH_TOL: f64 = 1e-8;

/// One irreducible unitary representation, `alpha(g)` for every element.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepClass {
    pub dim: usize,
    pub matrices: Vec<ComplexMatrix>,
    pub character: Vec<Complex64>,
}

impl IrrepClass {
    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    /// Sort key: characters rounded to 1e-6, compared lexicographically.
    fn fingerprint(&self) -> Vec<(i64, i64)> {
        self.character
            .iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    }
}

/// A complete set of inequivalent irreducibles, one representative per
/// class, ordered by `(dimension, character fingerprint)` with the trivial
/// representation first.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepBundle {
    order: usize,
    classes: Vec<IrrepClass>,
}

impl IrrepBundle {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn classes(&self) -> &[IrrepClass] {
        &self.classes
    }

    pub fn dims(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.dim).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.classes.iter().map(|c| c.dim * c.dim).sum::<usize>() == self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.iter().all(|c| c.dim == 1)
    }

    /// Index of the trivial representation.
    pub fn trivial(&self) -> usize {
        self.classes
            .iter()
            .position(|cl| cl.dim == 1 && cl.character.iter().all(|z| (z - 1.0).norm() < 1e-9))
            .expect("a complete bundle contains the trivial representation")
    }

    pub fn validate(&self, group: &GroupTable) -> BundleReport {
        let n = group.order();
        let mut unitarity = 0.0f64;
        let mut homomorphism = 0.0f64;
        for cl in &self.classes {
            let id = ComplexMatrix::identity(cl.dim, cl.dim);
            for a in group.elements() {
                let m = cl.matrix(a);
                unitarity = unitarity.max(max_abs_diff(&(m.adjoint() * m), &id));
                for b in group.elements() {
                    let prod = m * cl.matrix(b);
                    homomorphism = homomorphism.max(max_abs_diff(&prod, cl.matrix(group.mul(a, b))));
                }
            }
        }
        let mut orthonormality = 0.0f64;
        for (i, a) in self.classes.iter().enumerate() {
            for (j, b) in self.classes.iter().enumerate() {
                let ip: Complex64 = a
                    .character
                    .iter()
                    .zip(&b.character)
                    .map(|(x, y)| x * y.conj())
                    .sum::<Complex64>()
                    / n as f64;
                let target = if i == j { 1.0 } else { 0.0 };
                orthonormality = orthonormality.max((ip - target).norm());
            }
        }
        BundleReport {
            dim_square_sum: self.classes.iter().map(|c| c.dim * c.dim).sum(),
            order: n,
            unitarity,
            homomorphism,
            orthonormality,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleReport {
    pub dim_square_sum: usize,
    pub order: usize,
    pub unitarity: f64,
    pub homomorphism: f64,
    pub orthonormality: f64,
}

impl BundleReport {
    pub fn passes(&self) -> bool {
        self.dim_square_sum == self.order
            && self.unitarity <= 1e-10
            && self.homomorphism <= 1e-9
            && self.orthonormality <= 1e-9
    }
}

/// `chi(g) = tr(Q^dagger lambda(g) Q)` for an isometry `Q` onto an invariant
/// subspace.
fn subspace_character(group: &GroupTable, q: &ComplexMatrix) -> Vec<Complex64> {
    let m = q.ncols();
    group
        .elements()
        .map(|g| {
            let mut acc = c(0.0, 0.0);
            for s in group.elements() {
                let gs = group.mul(g, s);
                for k in 0..m {
                    acc += q[(gs, k)].conj() * q[(s, k)];
                }
            }
            acc
        })
        .collect()
}

fn character_norm(chi: &[Complex64]) -> f64 {
    chi.iter().map(|z| z.norm_sqr()).sum::<f64>() / chi.len() as f64
}

/// `Q^dagger lambda(g) Q`.
fn compress(group: &GroupTable, q: &ComplexMatrix, g: usize) -> ComplexMatrix {
    let (n, m) = q.shape();
    let mut shifted = ComplexMatrix::zeros(n, m);
    for s in 0..n {
        shifted.row_mut(group.mul(g, s)).copy_from(&q.row(s));
    }
    q.adjoint() * shifted
}

/// `(1/n) sum_g lambda(g) R lambda(g)^dagger`, entrywise
/// `T[s,t] = (1/n) sum_g R[g^-1 s, g^-1 t]`.
fn twirl(group: &GroupTable, r: &ComplexMatrix) -> ComplexMatrix {
    let n = group.order();
    let mut t = ComplexMatrix::zeros(n, n);
    for g in group.elements() {
        let gi = group.inv(g);
        let perm = group.left_translation(gi);
        for s in 0..n {
            for u in 0..n {
                t[(s, u)] += r[(perm[s], perm[u])];
            }
        }
    }
    t.scale(1.0 / n as f64)
}

/// Groups ascending eigenvalues into runs whose consecutive gaps are below
/// `tol`; returns index ranges.
fn cluster(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn split_subspace(
    group: &GroupTable,
    q: ComplexMatrix,
    rng: &mut Rng64,
    out: &mut Vec<(ComplexMatrix, Vec<Complex64>)>,
) -> Result<()> {
    let chi = subspace_character(group, &q);
    let norm = character_norm(&chi);
    if (norm - 1.0).abs() < 1e-6 {
        out.push((q, chi));
        return Ok(());
    }
    if norm < 1.0 - 1e-6 || (norm - norm.round()).abs() > 1e-6 {
        return Err(Error::NumericalIrrep(format!(
            "subspace of dimension {} has non-integral character norm {norm}",
            q.ncols()
        )));
    }
    let n = group.order();
    for _ in 0..MAX_DRAWS {
        let t = twirl(group, &random_hermitian(rng, n));
        let compressed = q.adjoint() * &t * &q;
        let spec = eigh(&compressed)?;
        let scale = 1.0 + spec.max_abs_eigenvalue();
        let runs = cluster(&spec.eigenvalues, 1e-9 * scale);
        if runs.len() < 2 {
            continue;
        }
        for run in runs {
            let basis = &q * spec.eigenvectors.columns(run.start, run.len());
            split_subspace(group, basis, rng, out)?;
        }
        return Ok(());
    }
    Err(Error::RetryExhausted(MAX_DRAWS))
}

pub fn irrep_decomposition(group: &GroupTable, seed: u64) -> Result<IrrepBundle> {
    let n = group.order();
    let mut rng = stream(seed, 0);
    let mut copies = Vec::new();
    split_subspace(group, ComplexMatrix::identity(n, n), &mut rng, &mut copies)?;

    // Group copies by character; keep the first copy of each class.
    let mut classes: Vec<(IrrepClass, usize)> = Vec::new();
    for (q, chi) in copies {
        let found = classes.iter_mut().find(|(cl, _)| {
            cl.character
                .iter()
                .zip(&chi)
                .all(|(a, b)| (a - b).norm() < CHARACTER_MATCH_TOL)
        });
        match found {
            Some((_, count)) => *count += 1,
            None => {
                let matrices = group.elements().map(|g| compress(group, &q, g)).collect();
                classes.push((
                    IrrepClass {
                        dim: q.ncols(),
                        matrices,
                        character: chi,
                    },
                    1,
                ));
            }
        }
    }
    for (cl, count) in &classes {
        if *count != cl.dim {
            return Err(Error::NumericalIrrep(format!(
                "class of dimension {} occurs {count} times in the regular representation",
                cl.dim
            )));
        }
    }
    let mut classes: Vec<IrrepClass> = classes.into_iter().map(|(cl, _)| cl).collect();
    classes.sort_by(|a, b| match a.dim.cmp(&b.dim) {
        Ordering::Equal => b.fingerprint().cmp(&a.fingerprint()),
        other => other,
    });
    let bundle = IrrepBundle { order: n, classes };
    if !bundle.is_complete() {
        return Err(Error::NumericalIrrep(format!(
            "dimension squares sum to {}, group order is {n}",
            bundle.dims().iter().map(|d| d * d).sum::<usize>()
        )));
    }
    Ok(bundle)
}

/// `f^(alpha) = (1/n) sum_s f(s) alpha(s)^dagger`, one block per class.
pub fn fourier_coefficients(f: &[Complex64], bundle: &IrrepBundle) -> Result<Vec<ComplexMatrix>> {
    let n = bundle.order();
    if f.len() != n {
        return Err(crate::error::mismatch(n, f.len()));
    }
    Ok(bundle
        .classes()
        .iter()
        .map(|cl| {
            let mut acc = ComplexMatrix::zeros(cl.dim, cl.dim);
            for (s, &fs) in f.iter().enumerate() {
                acc += cl.matrix(s).adjoint() * fs;
            }
            acc / c(n as f64, 0.0)
        })
        .collect())
}

/// Both sides of Plancherel: `((1/n) sum |f|^2, sum_alpha d_alpha tr(f^ f^dagger))`.
pub fn plancherel_sides(f: &[Complex64], bundle: &IrrepBundle) -> Result<(f64, f64)> {
    let blocks = fourier_coefficients(f, bundle)?;
    let lhs = f.iter().map(|z| z.norm_sqr()).sum::<f64>() / bundle.order() as f64;
    let rhs = bundle
        .classes()
        .iter()
        .zip(&blocks)
        .map(|(cl, b)| cl.dim as f64 * b.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    Ok((lhs, rhs))
}

/// Largest residual of `alpha(st)_ij = sum_k alpha(s)_ik alpha(t)_kj`.
pub fn corep_identity_check(group: &GroupTable, bundle: &IrrepBundle) -> f64 {
    let mut worst = 0.0f64;
    for cl in bundle.classes() {
        for s in group.elements() {
            for t in group.elements() {
                let st = cl.matrix(group.mul(s, t));
                for i in 0..cl.dim {
                    for j in 0..cl.dim {
                        let sum: Complex64 = (0..cl.dim)
                            .map(|k| cl.matrix(s)[(i, k)] * cl.matrix(t)[(k, j)])
                            .sum();
                        worst = worst.max((st[(i, j)] - sum).norm());
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::random::gaussian_vector;

    fn bundle_of(spec: GroupSpec) -> (GroupTable, IrrepBundle) {
        let g = spec.build().unwrap();
        let b = irrep_decomposition(&g, 11).unwrap();
        (g, b)
    }

    #[test]
    fn cyclic_four_characters() {
        let (g, b) = bundle_of(GroupSpec::Cyclic(4));
        assert_eq!(b.dims(), vec![1, 1, 1, 1]);
        // every class is s -> i^{ks} for some k, and all four k occur
        let i = c(0.0, 1.0);
        let mut ks: Vec<usize> = b
            .classes()
            .iter()
            .map(|cl| {
                (0..4)
                    .find(|&k| g.elements().all(|s| (cl.character[s] - i.powu((k * s) as u32)).norm() < 1e-12))
                    .expect("discrete character")
            })
            .collect();
        assert_eq!(ks[0], 0, "trivial class first");
        ks.sort();
        assert_eq!(ks, vec![0, 1, 2, 3]);
    }

    #[test]
    fn classical_dimension_patterns() {
        assert_eq!(bundle_of(GroupSpec::Symmetric(3)).1.dims(), vec![1, 1, 2]);
        assert_eq!(bundle_of(GroupSpec::Quaternion8).1.dims(), vec![1, 1, 1, 1, 2]);
        assert_eq!(bundle_of(GroupSpec::Dihedral(5)).1.dims(), vec![1, 1, 2, 2]);
        assert_eq!(bundle_of(GroupSpec::Symmetric(4)).1.dims(), vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn symmetric_five_decomposes() {
        let (g, b) = bundle_of(GroupSpec::Symmetric(5));
        assert_eq!(b.dims(), vec![1, 1, 4, 4, 5, 5, 6]);
        assert!(b.validate(&g).passes());
    }

    #[test]
    fn s3_character_table() {
        let (g, b) = bundle_of(GroupSpec::Symmetric(3));
        // lexicographic S3: 0 = id, 1 = (12), 2 = (01), 3,4 = 3-cycles, 5 = (02)
        let sign: Vec<f64> = g
            .elements()
            .map(|s| {
                let order = (1..=6).find(|&k| (0..k).fold(g.identity(), |acc, _| g.mul(acc, s)) == g.identity()).unwrap();
                if order == 2 { -1.0 } else { 1.0 }
            })
            .collect();
        let two: Vec<f64> = g
            .elements()
            .map(|s| match (s == g.identity(), sign[s] < 0.0) {
                (true, _) => 2.0,
                (false, true) => 0.0,
                (false, false) => -1.0,
            })
            .collect();
        let close = |chi: &[Complex64], want: &[f64]| chi.iter().zip(want).all(|(z, w)| (z - w).norm() < 1e-10);
        assert!(close(&b.classes()[0].character, &[1.0; 6]));
        assert!(close(&b.classes()[1].character, &sign));
        assert!(close(&b.classes()[2].character, &two));
    }

    #[test]
    fn bundles_validate_on_builtin_groups() {
        for spec in GroupSpec::builtin_suite() {
            let (g, b) = bundle_of(spec.clone());
            let report = b.validate(&g);
            assert!(report.passes(), "{spec}: {report:?}");
            assert!(corep_identity_check(&g, &b) < 1e-10, "{spec}");
        }
    }

    #[test]
    fn decomposition_is_deterministic() {
        let g = GroupSpec::Dihedral(4).build().unwrap();
        let a = irrep_decomposition(&g, 5).unwrap();
        let b = irrep_decomposition(&g, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trivial_group_bundle() {
        let (g, b) = bundle_of(GroupSpec::Cyclic(1));
        assert_eq!(b.dims(), vec![1]);
        assert_eq!(corep_identity_check(&g, &b), 0.0);
    }

    #[test]
    fn fourier_coefficient_examples() {
        let (g, b) = bundle_of(GroupSpec::Symmetric(3));
        let n = g.order();
        let ones = vec![c(1.0, 0.0); n];
        let blocks = fourier_coefficients(&ones, &b).unwrap();
        let triv = b.trivial();
        for (k, blk) in blocks.iter().enumerate() {
            let want = if k == triv { 1.0 } else { 0.0 };
            assert!(max_abs_diff(blk, &ComplexMatrix::identity(blk.nrows(), blk.nrows()).scale(want)) < 1e-12);
        }
        let mut delta = vec![c(0.0, 0.0); n];
        delta[g.identity()] = c(1.0, 0.0);
        for (cl, blk) in b.classes().iter().zip(fourier_coefficients(&delta, &b).unwrap()) {
            assert!(max_abs_diff(&blk, &ComplexMatrix::identity(cl.dim, cl.dim).scale(1.0 / n as f64)) < 1e-15);
        }
        let (l, r) = plancherel_sides(&delta, &b).unwrap();
        assert!((l - 1.0 / 6.0).abs() < 1e-15 && (r - 1.0 / 6.0).abs() < 1e-14);

        let mut rng = stream(3, 0);
        for _ in 0..50 {
            let f = gaussian_vector(&mut rng, n);
            let (l, r) = plancherel_sides(&f, &b).unwrap();
            assert!((l - r).abs() < 1e-12);
        }
        assert!(fourier_coefficients(&ones[..3], &b).is_err());
    }
}
