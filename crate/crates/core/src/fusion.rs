//! Fusion rings, q-traces, and the entropy of q-trace random walks.
//!
//! A q-trace is a probability vector over irreducible classes. Its density
//! with respect to the Haar weight is central, with value
//! `mu_alpha / qdim(alpha)^2` on class `alpha`, so its entropy reduces to
//! `H(mu) = -sum mu_alpha log(mu_alpha / qdim(alpha)^2)`.
//! [`kac_entropy_oracle`] evaluates the same number through the weighted
//! matrix trace for group duals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::irreps::IrrepBundle;
use crate::linalg::{diag_real, weighted_entropy, DensityOperator, TraceBlock, WeightedTrace};

pub type Label = usize;

/// Tolerance on q-trace normalization.
pub const QTRACE_TOL: f64 = 1e-12;
/// Largest allowed distance of a character-computed multiplicity from an integer.
pub const MULTIPLICITY_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
enum RingData {
    Finite(FiniteRing),
    /// Labels are spins `0, 1, 2, ...` (twice the physical spin); fusion is
    /// computed on demand, so the ring never needs mutation.
    SuQ2 { q: f64 },
}

#[derive(Debug, Clone, PartialEq)]
struct FiniteRing {
    names: Vec<String>,
    qdim: Vec<f64>,
    classical_dim: Vec<usize>,
    unit: Label,
    /// `fusion[a][b]` lists `(c, N_ab^c)` with `N > 0`, ascending in `c`.
    fusion: Vec<Vec<Vec<(Label, u32)>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionRing {
    name: String,
    data: RingData,
}

/// `[m]_q = (q^m - q^-m) / (q - q^-1)`, summed as `q^{m-1} + q^{m-3} + ... + q^{1-m}`
/// which is exact at `q = 1`.
pub fn q_integer(m: usize, q: f64) -> f64 {
    (0..m).map(|k| q.powi(m as i32 - 1 - 2 * k as i32)).sum()
}

impl FusionRing {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of labels, `None` for infinite rings.
    pub fn label_count(&self) -> Option<usize> {
        match &self.data {
            RingData::Finite(r) => Some(r.names.len()),
            RingData::SuQ2 { .. } => None,
        }
    }

    pub fn unit(&self) -> Label {
        match &self.data {
            RingData::Finite(r) => r.unit,
            RingData::SuQ2 { .. } => 0,
        }
    }

    fn check_label(&self, a: Label) -> Result<()> {
        match self.label_count() {
            Some(k) if a >= k => Err(Error::Fusion(format!("label {a} not in ring of {k} labels"))),
            _ => Ok(()),
        }
    }

    pub fn label_name(&self, a: Label) -> String {
        match &self.data {
            RingData::Finite(r) => r.names.get(a).cloned().unwrap_or_else(|| a.to_string()),
            RingData::SuQ2 { .. } => a.to_string(),
        }
    }

    pub fn label_by_name(&self, name: &str) -> Result<Label> {
        match &self.data {
            RingData::Finite(r) => r
                .names
                .iter()
                .position(|x| x == name)
                .or_else(|| name.parse().ok().filter(|&i: &usize| i < r.names.len()))
                .ok_or_else(|| Error::Fusion(format!("unknown label {name:?}"))),
            RingData::SuQ2 { .. } => name
                .parse()
                .map_err(|_| Error::Fusion(format!("SU_q(2) labels are non-negative integers, got {name:?}"))),
        }
    }

    pub fn qdim(&self, a: Label) -> Result<f64> {
        self.check_label(a)?;
        Ok(match &self.data {
            RingData::Finite(r) => r.qdim[a],
            RingData::SuQ2 { q } => q_integer(a + 1, *q),
        })
    }

    pub fn classical_dim(&self, a: Label) -> Result<usize> {
        self.check_label(a)?;
        Ok(match &self.data {
            RingData::Finite(r) => r.classical_dim[a],
            RingData::SuQ2 { .. } => a + 1,
        })
    }

    /// `a (x) b = sum_c N_ab^c c`, as `(c, N)` pairs with `N > 0`.
    pub fn fuse(&self, a: Label, b: Label) -> Result<Vec<(Label, u32)>> {
        self.check_label(a)?;
        self.check_label(b)?;
        Ok(match &self.data {
            RingData::Finite(r) => r.fusion[a][b].clone(),
            RingData::SuQ2 { .. } => {
                let lo = a.abs_diff(b);
                (lo..=a + b).step_by(2).map(|c| (c, 1)).collect()
            }
        })
    }

    pub fn multiplicity(&self, a: Label, b: Label, c: Label) -> Result<u32> {
        Ok(self
            .fuse(a, b)?
            .into_iter()
            .find(|&(x, _)| x == c)
            .map_or(0, |(_, n)| n))
    }

    /// Labels to validate: all of them for finite rings, `0..=max_label`
    /// otherwise.
    fn sample_labels(&self, max_label: usize) -> Vec<Label> {
        match self.label_count() {
            Some(k) => (0..k).collect(),
            None => (0..=max_label).collect(),
        }
    }

    /// Unit law, dimension multiplicativity and associativity over the
    /// sampled labels.
    pub fn validate(&self, max_label: usize) -> Result<RingReport> {
        let labels = self.sample_labels(max_label);
        let u = self.unit();
        for &a in &labels {
            for &b in &labels {
                let want = u32::from(a == b);
                if self.multiplicity(a, u, b)? != want || self.multiplicity(u, a, b)? != want {
                    return Err(Error::Fusion(format!(
                        "unit law fails for {} and {}",
                        self.label_name(a),
                        self.label_name(b)
                    )));
                }
            }
        }
        let mut dimension_residual = 0.0f64;
        for &a in &labels {
            for &b in &labels {
                let lhs: f64 = self
                    .fuse(a, b)?
                    .iter()
                    .map(|&(c, n)| Ok(f64::from(n) * self.qdim(c)?))
                    .sum::<Result<f64>>()?;
                let rhs = self.qdim(a)? * self.qdim(b)?;
                dimension_residual = dimension_residual.max((lhs - rhs).abs() / rhs.max(1.0));
            }
        }
        if dimension_residual > 1e-10 {
            return Err(Error::Fusion(format!(
                "quantum dimensions are not multiplicative (relative residual {dimension_residual:.3e})"
            )));
        }
        for &a in &labels {
            for &b in &labels {
                for &c in &labels {
                    // (a b) c and a (b c) as multisets of labels
                    let mut left: BTreeMap<Label, u64> = BTreeMap::new();
                    for (d, n1) in self.fuse(a, b)? {
                        for (e, n2) in self.fuse(d, c)? {
                            *left.entry(e).or_default() += u64::from(n1) * u64::from(n2);
                        }
                    }
                    let mut right: BTreeMap<Label, u64> = BTreeMap::new();
                    for (d, n1) in self.fuse(b, c)? {
                        for (e, n2) in self.fuse(a, d)? {
                            *right.entry(e).or_default() += u64::from(n1) * u64::from(n2);
                        }
                    }
                    if left != right {
                        return Err(Error::Fusion(format!(
                            "associativity fails for ({}, {}, {})",
                            self.label_name(a),
                            self.label_name(b),
                            self.label_name(c)
                        )));
                    }
                }
            }
        }
        Ok(RingReport {
            labels_checked: labels.len(),
            dimension_residual,
        })
    }

    pub fn to_text(&self) -> Result<String> {
        let RingData::Finite(r) = &self.data else {
            return Err(Error::Fusion("only finite rings can be written as text".into()));
        };
        let mut out = format!("labels {}\n", r.names.len());
        for i in 0..r.names.len() {
            let _ = writeln!(out, "{} {:?} {}", r.names[i], r.qdim[i], r.classical_dim[i]);
        }
        for a in 0..r.names.len() {
            for b in 0..r.names.len() {
                for &(c, n) in &r.fusion[a][b] {
                    let _ = writeln!(out, "{} {} {} {n}", r.names[a], r.names[b], r.names[c]);
                }
            }
        }
        Ok(out)
    }

    /// Parses the plain-text ring format and validates every ring axiom.
    /// The first label is the unit; `#` starts a comment.
    pub fn parse_text(name: impl Into<String>, text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty fusion ring file".into()))?;
        let k: usize = header
            .strip_prefix("labels")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| perr(ln, format!("expected \"labels <k>\", found {header:?}")))?;
        if k == 0 {
            return Err(perr(ln, "a fusion ring needs at least the unit label".into()));
        }
        let mut names = Vec::with_capacity(k);
        let mut qdim = Vec::with_capacity(k);
        let mut classical_dim = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, line) = lines.next().ok_or_else(|| perr(ln, format!("expected {k} label lines")))?;
            let tok: Vec<&str> = line.split_whitespace().collect();
            let [nm, qd, cd] = tok[..] else {
                return Err(perr(ln, format!("label line needs \"name qdim classical_dim\", found {line:?}")));
            };
            let qd: f64 = qd.parse().map_err(|_| perr(ln, format!("bad qdim {qd:?}")))?;
            if !(qd > 0.0) || !qd.is_finite() {
                return Err(perr(ln, format!("qdim must be positive, got {qd}")));
            }
            let cd: usize = cd.parse().map_err(|_| perr(ln, format!("bad classical dimension {cd:?}")))?;
            if names.iter().any(|x| x == nm) {
                return Err(perr(ln, format!("duplicate label {nm:?}")));
            }
            names.push(nm.to_string());
            qdim.push(qd);
            classical_dim.push(cd);
        }
        let mut fusion = vec![vec![Vec::<(Label, u32)>::new(); k]; k];
        let index = |ln: usize, s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| perr(ln, format!("unknown label {s:?}")))
        };
        for (ln, line) in lines {
            let tok: Vec<&str> = line.split_whitespace().collect();
            let [a, b, c, n] = tok[..] else {
                return Err(perr(ln, format!("fusion line needs \"a b c N\", found {line:?}")));
            };
            let (a, b, c) = (index(ln, a)?, index(ln, b)?, index(ln, c)?);
            let n: u32 = n.parse().map_err(|_| perr(ln, format!("bad multiplicity {n:?}")))?;
            if fusion[a][b].iter().any(|&(x, _)| x == c) {
                return Err(perr(ln, "duplicate fusion entry".into()));
            }
            if n > 0 {
                fusion[a][b].push((c, n));
            }
        }
        for row in &mut fusion {
            for list in row {
                list.sort();
            }
        }
        let ring = FusionRing {
            name: name.into(),
            data: RingData::Finite(FiniteRing {
                names,
                qdim,
                classical_dim,
                unit: 0,
                fusion,
            }),
        };
        ring.validate(0)?;
        Ok(ring)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingReport {
    pub labels_checked: usize,
    pub dimension_residual: f64,
}

pub fn su_q2_ring(q: f64) -> Result<FusionRing> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Input(format!("SU_q(2) needs 0 < q <= 1, got {q}")));
    }
    Ok(FusionRing {
        name: format!("suq2:{q}"),
        data: RingData::SuQ2 { q },
    })
}

/// Representation ring of `G`: labels are the bundle's classes,
/// `N_ab^c = (1/n) sum_s chi_a(s) chi_b(s) conj(chi_c(s))`.
pub fn group_dual_ring(bundle: &IrrepBundle, group: &GroupTable) -> Result<FusionRing> {
    let n = group.order() as f64;
    let classes = bundle.classes();
    let k = classes.len();
    let mut fusion = vec![vec![Vec::new(); k]; k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let m: f64 = group
                    .elements()
                    .map(|s| classes[a].character[s] * classes[b].character[s] * classes[c].character[s].conj())
                    .sum::<num_complex::Complex64>()
                    .re
                    / n;
                let rounded = m.round();
                if (m - rounded).abs() > MULTIPLICITY_RESIDUAL || rounded < 0.0 {
                    return Err(Error::NumericalIrrep(format!(
                        "multiplicity N_({a},{b})^{c} = {m} is not a non-negative integer"
                    )));
                }
                if rounded > 0.0 {
                    fusion[a][b].push((c, rounded as u32));
                }
            }
        }
    }
    let dims: Vec<usize> = bundle.dims();
    let ring = FusionRing {
        name: format!("dual:{}", group.name()),
        data: RingData::Finite(FiniteRing {
            names: (0..k).map(|i| format!("a{i}")).collect(),
            qdim: dims.iter().map(|&d| d as f64).collect(),
            classical_dim: dims,
            unit: bundle.trivial(),
            fusion,
        }),
    };
    ring.validate(0)?;
    Ok(ring)
}

/// Probability vector over labels, finitely supported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QTrace {
    weights: BTreeMap<Label, f64>,
}

impl QTrace {
    pub fn new(weights: BTreeMap<Label, f64>) -> Result<Self> {
        if let Some((l, w)) = weights.iter().find(|(_, &w)| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::Input(format!("q-trace weight {w} at label {l} is not a probability")));
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > QTRACE_TOL {
            return Err(Error::Input(format!("q-trace weights sum to {total:.15}, not 1")));
        }
        Ok(Self {
            weights: weights.into_iter().filter(|&(_, w)| w > 0.0).collect(),
        })
    }

    pub fn delta(label: Label) -> Self {
        Self {
            weights: BTreeMap::from([(label, 1.0)]),
        }
    }

    pub fn uniform(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let labels: Vec<Label> = labels.into_iter().collect();
        if labels.is_empty() {
            return Err(Error::Input("uniform q-trace over no labels".into()));
        }
        let w = 1.0 / labels.len() as f64;
        Ok(Self {
            weights: labels.into_iter().map(|l| (l, w)).collect(),
        })
    }

    pub fn weights(&self) -> &BTreeMap<Label, f64> {
        &self.weights
    }

    pub fn weight(&self, l: Label) -> f64 {
        self.weights.get(&l).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = Label> + '_ {
        self.weights.keys().copied()
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }
}

/// `H_sigma(mu) = -sum_{mu_a > 0} mu_a log(mu_a / qdim(a)^2)`.
pub fn hiai_izumi_entropy(mu: &QTrace, ring: &FusionRing) -> Result<f64> {
    mu.weights()
        .iter()
        .map(|(&a, &w)| {
            let d = ring.qdim(a)?;
            Ok(-w * (w / (d * d)).ln())
        })
        .try_fold(0.0, |acc, x: Result<f64>| Ok(acc + x?))
}

/// Matrix-level entropy of the q-trace density in the Kac case: block `a`
/// of `D_mu` is `(mu_a / d_a^2) I_{d_a}` and the Haar weight is
/// `phi(x) = sum_a d_a tr(x_a)`.
pub fn kac_entropy_oracle(mu: &QTrace, bundle: &IrrepBundle) -> Result<f64> {
    let k = bundle.classes().len();
    if let Some(bad) = mu.support().find(|&a| a >= k) {
        return Err(Error::Input(format!("label {bad} has no irreducible class (bundle has {k})")));
    }
    let mut diag = Vec::new();
    let mut blocks = Vec::with_capacity(k);
    for (a, cl) in bundle.classes().iter().enumerate() {
        let d = cl.dim as f64;
        diag.extend(std::iter::repeat_n(mu.weight(a) / (d * d), cl.dim));
        blocks.push(TraceBlock { dim: cl.dim, weight: d });
    }
    let density = DensityOperator::new(diag_real(&diag), WeightedTrace::new(blocks)?)?;
    Ok(weighted_entropy(&density))
}

/// `(mu * nu)_c = sum_ab mu_a nu_b N_ab^c qdim(c) / (qdim(a) qdim(b))`.
pub fn convolve(mu: &QTrace, nu: &QTrace, ring: &FusionRing) -> Result<QTrace> {
    let mut out: BTreeMap<Label, f64> = BTreeMap::new();
    for (&a, &wa) in mu.weights() {
        let da = ring.qdim(a)?;
        for (&b, &wb) in nu.weights() {
            let db = ring.qdim(b)?;
            let products = ring.fuse(a, b)?;
            if products.is_empty() {
                return Err(Error::Fusion(format!(
                    "no fusion data for ({}, {})",
                    ring.label_name(a),
                    ring.label_name(b)
                )));
            }
            for (c, n) in products {
                *out.entry(c).or_default() += wa * wb * f64::from(n) * ring.qdim(c)? / (da * db);
            }
        }
    }
    QTrace::new(out)
}

/// `[H_sigma(mu^{*k}) for k = 1..=steps]`.
pub fn walk_entropy_series(mu: &QTrace, ring: &FusionRing, steps: usize) -> Result<Vec<f64>> {
    Ok(walk(mu, ring, steps)?
        .iter()
        .map(|m| hiai_izumi_entropy(m, ring))
        .collect::<Result<_>>()?)
}

/// The convolution powers `mu, mu*mu, ...` up to `steps`.
pub fn walk(mu: &QTrace, ring: &FusionRing, steps: usize) -> Result<Vec<QTrace>> {
    if steps == 0 {
        return Err(Error::Input("a walk needs at least one step".into()));
    }
    let mut out = Vec::with_capacity(steps);
    let mut cur = mu.clone();
    out.push(cur.clone());
    for _ in 1..steps {
        cur = convolve(&cur, mu, ring)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::irreps::irrep_decomposition;

    fn dual(spec: GroupSpec) -> (FusionRing, IrrepBundle) {
        let g = spec.build().unwrap();
        let b = irrep_decomposition(&g, 2).unwrap();
        (group_dual_ring(&b, &g).unwrap(), b)
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_integer(1, 0.3), 1.0);
        assert_eq!(q_integer(4, 1.0), 4.0);
        assert!((q_integer(2, 0.5) - 2.5).abs() < 1e-15);
        let q: f64 = 0.7;
        let closed = (q.powi(5) - q.powi(-5)) / (q - 1.0 / q);
        assert!((q_integer(5, q) - closed).abs() < 1e-12);
    }

    #[test]
    fn su_q2_data() {
        let r = su_q2_ring(1.0).unwrap();
        for n in 0..8 {
            assert_eq!(r.qdim(n).unwrap(), (n + 1) as f64);
            assert_eq!(r.classical_dim(n).unwrap(), n + 1);
        }
        assert_eq!(r.fuse(2, 3).unwrap(), vec![(1, 1), (3, 1), (5, 1)]);
        assert!((su_q2_ring(0.5).unwrap().qdim(1).unwrap() - 2.5).abs() < 1e-15);
        for q in [1.0, 0.5, 0.9] {
            let rep = su_q2_ring(q).unwrap().validate(6).unwrap();
            assert!(rep.dimension_residual < 1e-12);
        }
        assert!(su_q2_ring(0.0).is_err());
        assert!(su_q2_ring(1.5).is_err());
    }

    #[test]
    fn entropy_examples() {
        let r = su_q2_ring(0.5).unwrap();
        assert_eq!(hiai_izumi_entropy(&QTrace::delta(0), &r).unwrap(), 0.0);
        let q = r.qdim(3).unwrap();
        assert!((hiai_izumi_entropy(&QTrace::delta(3), &r).unwrap() - 2.0 * q.ln()).abs() < 1e-14);

        let (ring, b) = dual(GroupSpec::Symmetric(3));
        let mu = QTrace::uniform(0..3).unwrap();
        let want = 3f64.ln() + 2.0 / 3.0 * 2f64.ln();
        assert!((hiai_izumi_entropy(&mu, &ring).unwrap() - want).abs() < 1e-14);
        assert!((kac_entropy_oracle(&mu, &b).unwrap() - want).abs() < 1e-12);
        assert_eq!(kac_entropy_oracle(&QTrace::delta(0), &b).unwrap(), 0.0);
        let two = QTrace::delta(2);
        assert!((kac_entropy_oracle(&two, &b).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((hiai_izumi_entropy(&two, &ring).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(kac_entropy_oracle(&QTrace::delta(3), &b).is_err());
    }

    #[test]
    fn s3_fusion_rules() {
        let (ring, b) = dual(GroupSpec::Symmetric(3));
        assert_eq!(b.dims(), vec![1, 1, 2]);
        assert_eq!(ring.fuse(2, 2).unwrap(), vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(ring.fuse(1, 1).unwrap(), vec![(0, 1)]);
        assert_eq!(ring.fuse(1, 2).unwrap(), vec![(2, 1)]);
    }

    #[test]
    fn pointed_rings_and_quaternion_dims() {
        let (ring, _) = dual(GroupSpec::Cyclic(5));
        for a in 0..5 {
            assert_eq!(ring.qdim(a).unwrap(), 1.0);
            for b in 0..5 {
                let f = ring.fuse(a, b).unwrap();
                assert_eq!(f.len(), 1);
                assert_eq!(f[0].1, 1);
            }
        }
        let (ring, _) = dual(GroupSpec::Quaternion8);
        assert_eq!(ring.validate(0).unwrap().dimension_residual, 0.0);
    }

    #[test]
    fn convolution_examples() {
        let r = su_q2_ring(1.0).unwrap();
        let out = convolve(&QTrace::delta(1), &QTrace::delta(1), &r).unwrap();
        assert!((out.weight(0) - 0.25).abs() < 1e-15);
        assert!((out.weight(2) - 0.75).abs() < 1e-15);
        assert_eq!(out.weights().len(), 2);

        let mu = QTrace::new(BTreeMap::from([(0, 0.2), (3, 0.5), (4, 0.3)])).unwrap();
        assert_eq!(convolve(&QTrace::delta(0), &mu, &r).unwrap(), mu);
        assert_eq!(convolve(&mu, &QTrace::delta(0), &r).unwrap(), mu);

        let (ring, _) = dual(GroupSpec::Symmetric(3));
        for a in 0..3 {
            for b in 0..3 {
                let out = convolve(&QTrace::delta(a), &QTrace::delta(b), &ring).unwrap();
                assert!((out.total() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn walk_series_examples() {
        let r = su_q2_ring(0.5).unwrap();
        assert_eq!(walk_entropy_series(&QTrace::delta(0), &r, 5).unwrap(), vec![0.0; 5]);
        let r1 = su_q2_ring(1.0).unwrap();
        let s = walk_entropy_series(&QTrace::delta(1), &r1, 1).unwrap();
        assert!((s[0] - 2.0 * 2f64.ln()).abs() < 1e-15);

        let (ring, _) = dual(GroupSpec::Cyclic(6));
        let mu = QTrace::uniform(0..6).unwrap();
        for h in walk_entropy_series(&mu, &ring, 4).unwrap() {
            assert!((h - 6f64.ln()).abs() < 1e-12);
        }
        assert!(walk_entropy_series(&mu, &ring, 0).is_err());
    }

    #[test]
    fn walk_support_is_fusion_reachable() {
        let r = su_q2_ring(0.8).unwrap();
        let powers = walk(&QTrace::delta(1), &r, 6).unwrap();
        for (k, p) in powers.iter().enumerate() {
            // spin-1/2 walk after k+1 steps lives on labels of matching parity up to k+1
            assert!(p.support().all(|l| l <= k + 1 && (l + k + 1) % 2 == 0));
        }
    }

    #[test]
    fn text_format_round_trip_and_validation() {
        let (ring, _) = dual(GroupSpec::Symmetric(3));
        let text = ring.to_text().unwrap();
        let back = FusionRing::parse_text("s3", &text).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(back.fuse(a, b).unwrap(), ring.fuse(a, b).unwrap());
            }
        }
        // Fibonacci ring: tau x tau = 1 + tau
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let fib = format!("labels 2\n1 1 1\ntau {phi} 1\n1 1 1 1\n1 tau tau 1\ntau 1 tau 1\ntau tau 1 1\ntau tau tau 1\n");
        let fib = FusionRing::parse_text("fib", &fib).unwrap();
        let out = convolve(&QTrace::delta(1), &QTrace::delta(1), &fib).unwrap();
        assert!((out.weight(0) - 1.0 / (phi * phi)).abs() < 1e-12);

        let bad_dim = "labels 2\n1 1 1\nx 2 1\n1 1 1 1\n1 x x 1\nx 1 x 1\nx x 1 1\n";
        assert!(matches!(FusionRing::parse_text("bad", bad_dim), Err(Error::Fusion(_))));
        let bad_unit = "labels 2\n1 1 1\nx 1 1\n1 1 1 1\nx x 1 1\n";
        assert!(matches!(FusionRing::parse_text("bad", bad_unit), Err(Error::Fusion(_))));
        assert!(matches!(FusionRing::parse_text("bad", "labels two"), Err(Error::Parse { .. })));
        assert!(matches!(FusionRing::parse_text("bad", "labels 1\n1 1 1\n1 1 y 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn qtrace_validation() {
        assert!(QTrace::new(BTreeMap::from([(0, 0.5), (1, 0.4)])).is_err());
        assert!(QTrace::new(BTreeMap::from([(0, 1.5), (1, -0.5)])).is_err());
        assert!(QTrace::uniform(std::iter::empty()).is_err());
    }
}
