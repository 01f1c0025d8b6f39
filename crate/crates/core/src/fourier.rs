//! The Fourier unitary `l2(G) -> (+)_alpha HS(H_alpha)`.
//!
//! Dual-side coordinates are slots `(alpha, i, j)`: classes in bundle order,
//! entries row-major within a class. Row `(alpha, i, j)` of `F` is
//! `sqrt(d_alpha / n) * conj(alpha(.)_ij)`.
//!
//! Under this layout every element of `VN(G)` conjugates to
//! `(+)_alpha X_alpha (x) I_{d_alpha}`; `lambda(g)` goes to
//! `conj(alpha(g)) (x) I`, i.e. `d_alpha` copies of the contragredient.

use num_complex::Complex64;

use crate::error::{input, mismatch, Result};
use crate::group::GroupTable;
use crate::irreps::IrrepBundle;
use crate::linalg::{c, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotClass {
    pub class: usize,
    pub dim: usize,
    /// First dual coordinate belonging to the class.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierBasis {
    matrix: ComplexMatrix,
    layout: Vec<SlotClass>,
}

impl FourierBasis {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &[SlotClass] {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Dual coordinate of slot `(class, i, j)`.
    pub fn slot(&self, class: usize, i: usize, j: usize) -> usize {
        let sc = self.layout[class];
        sc.offset + i * sc.dim + j
    }

    /// `F x F^dagger`.
    pub fn to_dual(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &self.matrix * x * self.matrix.adjoint()
    }

    /// `F^dagger y F`.
    pub fn from_dual(&self, y: &ComplexMatrix) -> ComplexMatrix {
        self.matrix.adjoint() * y * &self.matrix
    }

    pub fn transform_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        let col = nalgebra::DVector::from_column_slice(v);
        (&self.matrix * col).iter().cloned().collect()
    }

    /// Per-class blocks `X_alpha` of a dual-side matrix, averaging the
    /// `d_alpha` diagonal copies.
    pub fn class_blocks(&self, y: &ComplexMatrix) -> Vec<ComplexMatrix> {
        self.layout
            .iter()
            .map(|sc| {
                let d = sc.dim;
                ComplexMatrix::from_fn(d, d, |i, k| {
                    let sum: Complex64 = (0..d)
                        .map(|j| y[(sc.offset + i * d + j, sc.offset + k * d + j)])
                        .sum();
                    sum / d as f64
                })
            })
            .collect()
    }

    /// `(+)_alpha X_alpha (x) I_{d_alpha}` in dual coordinates.
    pub fn embed_blocks(&self, blocks: &[ComplexMatrix]) -> ComplexMatrix {
        let n = self.dim();
        let mut y = ComplexMatrix::zeros(n, n);
        for (sc, x) in self.layout.iter().zip(blocks) {
            let d = sc.dim;
            for i in 0..d {
                for k in 0..d {
                    for j in 0..d {
                        y[(sc.offset + i * d + j, sc.offset + k * d + j)] = x[(i, k)];
                    }
                }
            }
        }
        y
    }

    /// Distance of a dual-side matrix from the `(+) X_alpha (x) I` pattern.
    pub fn block_pattern_residual(&self, y: &ComplexMatrix) -> f64 {
        let fitted = self.embed_blocks(&self.class_blocks(y));
        crate::linalg::max_abs_diff(&fitted, y)
    }
}

pub fn fourier_unitary(group: &GroupTable, bundle: &IrrepBundle) -> Result<FourierBasis> {
    let n = group.order();
    if bundle.order() != n {
        return Err(mismatch(format!("bundle for order {n}"), bundle.order()));
    }
    if !bundle.is_complete() {
        return input("irrep bundle is incomplete: dimension squares do not sum to the group order");
    }
    let mut layout = Vec::with_capacity(bundle.classes().len());
    let mut f = ComplexMatrix::zeros(n, n);
    let mut offset = 0;
    for (k, cl) in bundle.classes().iter().enumerate() {
        let d = cl.dim;
        layout.push(SlotClass {
            class: k,
            dim: d,
            offset,
        });
        let scale = (d as f64 / n as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                let row = offset + i * d + j;
                for s in group.elements() {
                    f[(row, s)] = cl.matrix(s)[(i, j)].conj() * c(scale, 0.0);
                }
            }
        }
        offset += d * d;
    }
    Ok(FourierBasis { matrix: f, layout })
}
