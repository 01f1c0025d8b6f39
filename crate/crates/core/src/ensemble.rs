//! Random and deterministic state families for the verification sweeps.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::pair::{QuantumPair, StateDensity};
use crate::random::{complex_gaussian, gaussian_matrix, haar_vector, stream, Rng64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleKind {
    /// `|v><v|` with `v` uniform on the unit sphere.
    PureHaar,
    /// `G G^dagger / tr(G G^dagger)` with `G` an `n x rank` complex Gaussian;
    /// `rank = None` means full rank `n`.
    Wishart { rank: Option<usize> },
    /// `G G^dagger` normalized, with the rows of `G` outside a random support
    /// set to zero and a random rank up to the support size.
    Sparse,
}

impl EnsembleKind {
    /// State number `index` of this ensemble on `C^n`; independent of every
    /// other index.
    pub fn state(&self, n: usize, seed: u64, index: u64) -> Result<StateDensity> {
        let mut rng = stream(seed, index);
        match *self {
            EnsembleKind::PureHaar => StateDensity::from_vector(&haar_vector(&mut rng, n)),
            EnsembleKind::Wishart { rank } => {
                let r = rank.unwrap_or(n);
                if r == 0 || r > n {
                    return input(format!("Wishart rank {r} must lie in 1..={n}"));
                }
                let g = gaussian_matrix(&mut rng, n, r);
                StateDensity::normalized(&(&g * g.adjoint()))
            }
            EnsembleKind::Sparse => {
                let support = random_support(&mut rng, n);
                let r = rng.random_range(1..=support.len());
                let g = gaussian_matrix(&mut rng, n, r);
                let mut masked = ComplexMatrix::zeros(n, r);
                for &s in &support {
                    masked.row_mut(s).copy_from(&g.row(s));
                }
                StateDensity::normalized(&(&masked * masked.adjoint()))
            }
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::PureHaar => write!(f, "pure"),
            EnsembleKind::Wishart { rank: None } => write!(f, "wishart"),
            EnsembleKind::Wishart { rank: Some(r) } => write!(f, "wishart-{r}"),
            EnsembleKind::Sparse => write!(f, "sparse"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateEnsemble {
    pub kind: EnsembleKind,
    pub seed: u64,
    pub count: usize,
}

impl StateEnsemble {
    pub fn generate(&self, n: usize) -> Result<Vec<StateDensity>> {
        (0..self.count as u64)
            .map(|i| self.kind.state(n, self.seed, i))
            .collect()
    }
}

/// Shorthand kept for callers that think in terms of the ensemble operation.
pub fn generate_states(ensemble: &StateEnsemble, n: usize) -> Result<Vec<StateDensity>> {
    ensemble.generate(n)
}

fn random_support(rng: &mut Rng64, n: usize) -> Vec<usize> {
    let k = rng.random_range(1..=n);
    let mut support: Vec<usize> = (0..n).collect();
    support.partial_shuffle(rng, k);
    support.truncate(k);
    support
}

/// Random vector with a random nonempty support, Gaussian on the support.
pub fn sparse_vector(n: usize, seed: u64, index: u64) -> Vec<Complex64> {
    let mut rng = stream(seed, index);
    let support = random_support(&mut rng, n);
    let mut v = vec![c(0.0, 0.0); n];
    for &s in &support {
        let mut z = complex_gaussian(&mut rng);
        while z.norm() < 1e-3 {
            z = complex_gaussian(&mut rng);
        }
        v[s] = z;
    }
    v
}

/// A labelled deterministic state.
#[derive(Debug, Clone)]
pub struct CensusState {
    pub label: String,
    pub state: StateDensity,
}

/// States at which the uncertainty bound is attained: point masses,
/// character states of the one-dimensional classes, and `I/n`.
pub fn equality_census(pair: &QuantumPair) -> Vec<CensusState> {
    let n = pair.dim();
    let mut out: Vec<CensusState> = (0..n)
        .map(|s| CensusState {
            label: format!("point:{s}"),
            state: StateDensity::point(n, s),
        })
        .collect();
    for (k, cl) in pair.bundle().classes().iter().enumerate() {
        if cl.dim == 1 {
            out.push(CensusState {
                label: format!("character:{k}"),
                state: StateDensity::from_vector(&cl.character).expect("characters are nonzero"),
            });
        }
    }
    out.push(CensusState {
        label: "mixed".into(),
        state: StateDensity::maximally_mixed(n),
    });
    out
}

/// Vectors at which the rank-support bound is attained: point masses, the
/// constant function, and one-dimensional characters.
pub fn rank_support_census(pair: &QuantumPair) -> Vec<(String, Vec<Complex64>)> {
    let n = pair.dim();
    let mut out: Vec<(String, Vec<Complex64>)> = (0..n)
        .map(|s| {
            let mut v = vec![c(0.0, 0.0); n];
            v[s] = c(1.0, 0.0);
            (format!("point:{s}"), v)
        })
        .collect();
    out.push(("constant".into(), vec![c(1.0, 0.0); n]));
    for (k, cl) in pair.bundle().classes().iter().enumerate() {
        if cl.dim == 1 && k != pair.bundle().trivial() {
            out.push((format!("character:{k}"), cl.character.clone()));
        }
    }
    out
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pure" | "haar" | "pure-haar" => Ok(EnsembleKind::PureHaar),
            "wishart" => Ok(EnsembleKind::Wishart { rank: None }),
            "sparse" => Ok(EnsembleKind::Sparse),
            other => {
                if let Some(r) = other.strip_prefix("wishart") {
                    let r = r.trim_start_matches(['-', '_']);
                    let rank = r
                        .parse()
                        .map_err(|_| Error::Input(format!("bad Wishart rank in {s:?}")))?;
                    return Ok(EnsembleKind::Wishart { rank: Some(rank) });
                }
                input(format!("unknown ensemble {s:?}"))
            }
        }
    }
}
