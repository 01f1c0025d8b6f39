//! Finite quantum groups realized on `l2(G)`: the pair `(l_inf(G), VN(G))`,
//! its noncommutative Fourier transform, entropic and rank-support
//! uncertainty relations, complementarity, and q-trace random walks on
//! fusion rings.

pub mod ensemble;
pub mod error;
pub mod fourier;
pub mod fusion;
pub mod group;
pub mod irreps;
pub mod linalg;
pub mod multiplicative;
pub mod pair;
pub mod random;
pub mod uncertainty;

pub use error::{Error, Result};
pub use num_complex;
