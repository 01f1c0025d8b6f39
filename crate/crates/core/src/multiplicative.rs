//! The multiplicative unitary of `l_inf(G)` on `l2(G x G)`.
//!
//! `(W xi)(s, t) = xi(s, s^-1 t)`, equivalently `W delta_(s,u) = delta_(s,su)`.
//! `W` is a permutation, so the pentagon and co-multiplication identities are
//! checked as exact permutation arithmetic. Pair `(s, t)` is coordinate
//! `s * n + t`.

use crate::group::GroupTable;
use crate::linalg::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeUnitary {
    n: usize,
    /// `W delta_x = delta_{perm[x]}`.
    perm: Vec<usize>,
}

impl MultiplicativeUnitary {
    pub fn new(group: &GroupTable) -> Self {
        let n = group.order();
        let mut perm = vec![0; n * n];
        for s in 0..n {
            for u in 0..n {
                perm[s * n + u] = s * n + group.mul(s, u);
            }
        }
        Self { n, perm }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let m = self.n * self.n;
        let mut w = ComplexMatrix::zeros(m, m);
        for (x, &y) in self.perm.iter().enumerate() {
            w[(y, x)] = c(1.0, 0.0);
        }
        w
    }

    /// Matrix entry `W[(s,t), (s',t')]`, without materializing `W`.
    pub fn entry(&self, s: usize, t: usize, s2: usize, t2: usize) -> f64 {
        if self.perm[s2 * self.n + t2] == s * self.n + t {
            1.0
        } else {
            0.0
        }
    }

    /// `W12 W13 W23 = W23 W12` on every basis vector of `l2(G)^(x)3`.
    pub fn pentagon_holds(&self) -> bool {
        let n = self.n;
        // leg actions on triples (a, b, c)
        let w = |x: usize, y: usize| -> (usize, usize) {
            let p = self.perm[x * n + y];
            (p / n, p % n)
        };
        let w12 = |(a, b, c): (usize, usize, usize)| {
            let (a, b) = w(a, b);
            (a, b, c)
        };
        let w13 = |(a, b, c): (usize, usize, usize)| {
            let (a, c) = w(a, c);
            (a, b, c)
        };
        let w23 = |(a, b, c): (usize, usize, usize)| {
            let (b, c) = w(b, c);
            (a, b, c)
        };
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let v = (a, b, c);
                    w12(w13(w23(v))) == w23(w12(v))
                })
            })
        })
    }

    /// Diagonal of `W^dagger D W` for a diagonal `D` on `l2(G x G)`.
    pub fn conjugate_diagonal<T: Copy>(&self, diag: &[T]) -> Vec<T> {
        self.perm.iter().map(|&p| diag[p]).collect()
    }

    /// `W^dagger (1 (x) M_f) W = M_{f o mult}` for every point mass `f`.
    pub fn comultiplication_holds(&self, group: &GroupTable) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            let one_tensor_f: Vec<u8> = (0..n * n).map(|x| u8::from(x % n == a)).collect();
            let lhs = self.conjugate_diagonal(&one_tensor_f);
            (0..n).all(|s| (0..n).all(|t| lhs[s * n + t] == u8::from(group.mul(s, t) == a)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::linalg::max_abs_diff;

    #[test]
    fn trivial_group_identity() {
        let w = MultiplicativeUnitary::new(&GroupSpec::Cyclic(1).build().unwrap());
        assert_eq!(w.to_matrix(), ComplexMatrix::identity(1, 1));
    }

    #[test]
    fn cyclic_two_swaps_second_row_pair() {
        let w = MultiplicativeUnitary::new(&GroupSpec::Cyclic(2).build().unwrap());
        // coordinates (0,0)=0, (0,1)=1, (1,0)=2, (1,1)=3
        let mut want = ComplexMatrix::zeros(4, 4);
        want[(0, 0)] = c(1.0, 0.0);
        want[(1, 1)] = c(1.0, 0.0);
        want[(2, 3)] = c(1.0, 0.0);
        want[(3, 2)] = c(1.0, 0.0);
        assert_eq!(w.to_matrix(), want);
    }

    #[test]
    fn pentagon_and_comultiplication_on_builtin_groups() {
        for spec in GroupSpec::builtin_suite() {
            let g = spec.build().unwrap();
            let w = MultiplicativeUnitary::new(&g);
            assert!(w.pentagon_holds(), "{spec}");
            assert!(w.comultiplication_holds(&g), "{spec}");
        }
    }

    #[test]
    fn dense_comultiplication_matches_permutation_route() {
        let g = GroupSpec::Symmetric(3).build().unwrap();
        let n = g.order();
        let w = MultiplicativeUnitary::new(&g);
        let wm = w.to_matrix();
        for a in 0..n {
            let mut one_f = ComplexMatrix::zeros(n * n, n * n);
            for s in 0..n {
                one_f[(s * n + a, s * n + a)] = c(1.0, 0.0);
            }
            let lhs = wm.adjoint() * one_f * &wm;
            let mut rhs = ComplexMatrix::zeros(n * n, n * n);
            for s in 0..n {
                for t in 0..n {
                    if g.mul(s, t) == a {
                        rhs[(s * n + t, s * n + t)] = c(1.0, 0.0);
                    }
                }
            }
            assert_eq!(max_abs_diff(&lhs, &rhs), 0.0);
        }
    }

    #[test]
    fn dense_pentagon_on_small_group() {
        let g = GroupSpec::Cyclic(3).build().unwrap();
        let n = g.order();
        let w = MultiplicativeUnitary::new(&g).to_matrix();
        let id = ComplexMatrix::identity(n, n);
        let w12 = w.kronecker(&id);
        let w23 = id.kronecker(&w);
        // W13 = (1 (x) swap) W12 (1 (x) swap)
        let mut swap = ComplexMatrix::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                swap[(b * n + a, a * n + b)] = c(1.0, 0.0);
            }
        }
        let s23 = id.kronecker(&swap);
        let w13 = &s23 * &w12 * &s23;
        assert_eq!(max_abs_diff(&(&w12 * &w13 * &w23), &(&w23 * &w12)), 0.0);
    }
}
