use std::collections::BTreeMap;

use fqg_core::ensemble::{equality_census, rank_support_census, sparse_vector, EnsembleKind};
use fqg_core::fusion::{
    group_dual_ring, hiai_izumi_entropy, kac_entropy_oracle, su_q2_ring, walk, FusionRing, QTrace,
};
use fqg_core::group::GroupSpec;
use fqg_core::irreps::{corep_identity_check, irrep_decomposition, plancherel_sides, IrrepBundle};
use fqg_core::linalg::{singular_number_entropy, weighted_entropy, DensityOperator};
use fqg_core::num_complex::Complex64;
use fqg_core::pair::{QuantumPair, StateDensity, DEFAULT_IRREP_SEED};
use fqg_core::random::{gaussian_vector, random_hermitian, stream};
use fqg_core::uncertainty::{
    dual_density, mub_check, verify_rank_support_function, verify_entropic_uncertainty, verify_correlation_route, verify_dual_density_route, verify_rank_support_state,
    RankSupportReport,
};
use rayon::prelude::*;

use crate::config::{Command, EnsembleSpec, RingSpec, RunConfig, StateSpec};
use crate::error::CliError;
use crate::report::{
    RankSupportRecord, Records, ReportDocument, StructureRecord, UncertaintyRecord, WalkRecord,
};

pub fn run(config: &RunConfig) -> Result<ReportDocument, CliError> {
    config.validate()?;
    let records = match config.command {
        Command::Uncertainty => Records::Uncertainty(run_uncertainty(config)?),
        Command::Ranksupport => Records::RankSupport(run_ranksupport(config)?),
        Command::Structure => Records::Structure(run_structure(config)?),
        Command::Walk => Records::Walk(run_walk(config)?),
    };
    Ok(ReportDocument::new(config.clone(), records))
}

/// Seed of the `i`-th ensemble component; component 0 uses the run seed as is.
pub fn component_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Where a trial's input comes from; random inputs are drawn inside the
/// worker from `(seed, index)`, so the result does not depend on scheduling.
enum Input {
    State(StateDensity),
    Vector(Vec<Complex64>),
    Random { kind: EnsembleKind, seed: u64 },
    SparseVector { seed: u64 },
}

struct Job {
    source: String,
    index: usize,
    label: String,
    input: Input,
}

fn census_or_random_jobs(
    config: &RunConfig,
    census: impl Fn() -> Vec<Job>,
    with_sparse_vectors: bool,
) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (ci, spec) in config.ensemble.iter().enumerate() {
        match *spec {
            EnsembleSpec::Census => jobs.extend(census()),
            EnsembleSpec::Random { kind, count } => {
                let seed = component_seed(config.seed, ci);
                for i in 0..count {
                    jobs.push(Job {
                        source: kind.to_string(),
                        index: i,
                        label: format!("{kind}#{i}"),
                        input: Input::Random { kind, seed },
                    });
                    if with_sparse_vectors && kind == EnsembleKind::Sparse {
                        jobs.push(Job {
                            source: kind.to_string(),
                            index: i,
                            label: format!("sparse-vector#{i}"),
                            input: Input::SparseVector { seed },
                        });
                    }
                }
            }
        }
    }
    jobs
}

fn pair_for(spec: &GroupSpec) -> Result<QuantumPair, CliError> {
    Ok(QuantumPair::from_spec(spec)?)
}

/// Largest `|H_s - H|` between singular-number and spectral entropy.
pub fn singular_number_gap(densities: &[&DensityOperator]) -> f64 {
    densities
        .iter()
        .map(|d| (singular_number_entropy(d) - weighted_entropy(d)).abs())
        .fold(0.0, f64::max)
}

/// All three entropic routes plus the singular-number cross-check for one
/// state. With `equality` set, the slack must also vanish.
pub fn uncertainty_record(
    pair: &QuantumPair,
    rho: &StateDensity,
    tolerance: f64,
    equality: bool,
) -> Result<UncertaintyRecord, CliError> {
    let r24 = verify_dual_density_route(pair, rho, tolerance)?;
    let r33 = verify_entropic_uncertainty(pair, rho, tolerance)?;
    let r34 = verify_correlation_route(pair, rho, tolerance)?;
    let slacks = [r24.slack, r33.slack, r34.slack];
    let route_spread = slacks
        .iter()
        .flat_map(|a| slacks.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    let diag = pair.expect_diagonal(rho);
    let dual = pair.expect_dual(rho);
    let dhat = dual_density(pair, rho)?;
    let gap = singular_number_gap(&[rho.density(), &diag, &dual, &dhat]);
    let pass = r24.pass
        && r33.pass
        && r34.pass
        && route_spread <= tolerance
        && gap <= tolerance
        && (!equality || r33.slack.abs() <= tolerance);
    Ok(UncertaintyRecord {
        group: pair.group().name().to_string(),
        source: String::new(),
        index: 0,
        label: String::new(),
        h_d: r33.h_d,
        h_dhat: r33.h_dhat,
        h_rho: r33.h_rho,
        bound: r33.bound,
        slack: r33.slack,
        dual_density_slack: r24.slack,
        correlation_slack: r34.slack,
        route_spread,
        singular_number_gap: gap,
        pass,
    })
}

fn run_uncertainty(config: &RunConfig) -> Result<Vec<UncertaintyRecord>, CliError> {
    let mut out = Vec::new();
    for spec in &config.groups {
        let pair = pair_for(spec)?;
        let n = pair.dim();
        let census = || {
            equality_census(&pair)
                .into_iter()
                .enumerate()
                .map(|(i, c)| Job {
                    source: "census".into(),
                    index: i,
                    label: c.label,
                    input: Input::State(c.state),
                })
                .collect()
        };
        let jobs = census_or_random_jobs(config, census, false);
        let rows: Vec<UncertaintyRecord> = jobs
            .par_iter()
            .map(|job| {
                let (rho, equality) = match &job.input {
                    Input::State(s) => (s.clone(), true),
                    Input::Random { kind, seed } => (kind.state(n, *seed, job.index as u64)?, false),
                    Input::Vector(_) | Input::SparseVector { .. } => unreachable!("no vector jobs here"),
                };
                let mut r = uncertainty_record(&pair, &rho, config.tolerance, equality)?;
                r.source = job.source.clone();
                r.index = job.index;
                r.label = job.label.clone();
                Ok(r)
            })
            .collect::<Result<_, CliError>>()?;
        out.extend(rows);
    }
    Ok(out)
}

fn rank_row(pair: &QuantumPair, job: &Job, check: &str, r: RankSupportReport, equality: bool, tol: f64) -> RankSupportRecord {
    RankSupportRecord {
        group: pair.group().name().to_string(),
        source: job.source.clone(),
        index: job.index,
        label: job.label.clone(),
        check: check.into(),
        support_measure: r.support_measure,
        rank_sum: r.rank_sum,
        product: r.product,
        rhs: r.rhs,
        margin: r.margin,
        pass: r.pass && (!equality || r.margin.abs() <= tol),
    }
}

fn run_ranksupport(config: &RunConfig) -> Result<Vec<RankSupportRecord>, CliError> {
    let tol = config.tolerance;
    let mut out = Vec::new();
    for spec in &config.groups {
        let pair = pair_for(spec)?;
        let n = pair.dim();
        let census = || {
            let mut jobs: Vec<Job> = rank_support_census(&pair)
                .into_iter()
                .enumerate()
                .map(|(i, (label, f))| Job {
                    source: "census".into(),
                    index: i,
                    label,
                    input: Input::Vector(f),
                })
                .collect();
            let offset = jobs.len();
            jobs.extend(equality_census(&pair).into_iter().enumerate().map(|(i, c)| Job {
                source: "census".into(),
                index: offset + i,
                label: c.label,
                input: Input::State(c.state),
            }));
            jobs
        };
        let jobs = census_or_random_jobs(config, census, true);
        let rows: Vec<RankSupportRecord> = jobs
            .par_iter()
            .map(|job| {
                Ok(match &job.input {
                    Input::State(s) => rank_row(&pair, job, "state", verify_rank_support_state(&pair, s.matrix(), tol)?, true, tol),
                    Input::Vector(f) => rank_row(&pair, job, "function", verify_rank_support_function(&pair, f, tol)?, true, tol),
                    Input::Random { kind, seed } => {
                        let rho = kind.state(n, *seed, job.index as u64)?;
                        rank_row(&pair, job, "state", verify_rank_support_state(&pair, rho.matrix(), tol)?, false, tol)
                    }
                    Input::SparseVector { seed } => {
                        let f = sparse_vector(n, *seed, job.index as u64);
                        rank_row(&pair, job, "function", verify_rank_support_function(&pair, &f, tol)?, false, tol)
                    }
                })
            })
            .collect::<Result<_, CliError>>()?;
        out.extend(rows);
    }
    Ok(out)
}

/// Thresholds of the structural suite: integer identities are exact,
/// `tight` is the run tolerance, `loose` never drops below `1e-9`.
struct Thresholds {
    exact: f64,
    tight: f64,
    loose: f64,
}

const MUB_THRESHOLD: f64 = 1e-12;

fn structure_rows(pair: &QuantumPair, config: &RunConfig) -> Result<Vec<StructureRecord>, CliError> {
    let group = pair.group();
    let n = group.order();
    let th = Thresholds {
        exact: 0.0,
        tight: config.tolerance,
        loose: config.tolerance.max(1e-9),
    };
    let mut rows = Vec::new();
    let mut push = |check: &str, value: f64, threshold: f64| {
        rows.push(StructureRecord {
            group: group.name().to_string(),
            check: check.to_string(),
            value,
            threshold,
            pass: value <= threshold,
        })
    };

    let bundle = pair.bundle().validate(group);
    push("dim_square_sum", bundle.dim_square_sum.abs_diff(bundle.order) as f64, th.exact);
    push("irrep_unitarity", bundle.unitarity, th.tight);
    push("irrep_homomorphism", bundle.homomorphism, th.loose);
    push("irrep_orthonormality", bundle.orthonormality, th.loose);

    let w = pair.multiplicative_unitary();
    push("pentagon", f64::from(u8::from(!w.pentagon_holds())), th.exact);
    push("comultiplication", f64::from(u8::from(!w.comultiplication_holds(group))), th.exact);
    push("corep_identity", corep_identity_check(group, pair.bundle()), th.loose);

    let comp = pair.complementarity_check();
    push("complementarity_minimal_projections", comp.minimal_projections, th.tight);
    push("complementarity_orthogonality", comp.orthogonality, th.tight);
    push("complementarity_trace_factorization", comp.trace_factorization, th.tight);
    push("complementarity_scalar_expectation", comp.scalar_expectation, th.tight);
    push("span_rank_deficiency", (n * n - pair.span_check()) as f64, th.exact);

    let mut kraus = 0.0f64;
    let mut plancherel = 0.0f64;
    for i in 0..config.kraus_trials {
        let mut rng = stream(config.seed, i as u64);
        let xi = gaussian_vector(&mut rng, n);
        let tests = [random_hermitian(&mut rng, n), random_hermitian(&mut rng, n)];
        kraus = kraus.max(pair.kraus_report(&xi, &tests)?.max_residual());
        let (lhs, rhs) = plancherel_sides(&xi, pair.bundle())?;
        plancherel = plancherel.max((lhs - rhs).abs() / lhs.max(1.0));
    }
    push("kraus_max_residual", kraus, th.loose);
    push("plancherel", plancherel, th.tight);

    if config.mub {
        let m = mub_check(pair)?;
        push("mub_deviation", m.max_deviation, MUB_THRESHOLD);
        push("mub_orthonormality", m.orthonormality, MUB_THRESHOLD);
    }
    Ok(rows)
}

fn run_structure(config: &RunConfig) -> Result<Vec<StructureRecord>, CliError> {
    let pairs = config
        .groups
        .iter()
        .map(pair_for)
        .collect::<Result<Vec<_>, _>>()?;
    if config.mub {
        if let Some(p) = pairs.iter().find(|p| !p.group().is_abelian()) {
            mub_check(p)?;
        }
    }
    let rows = pairs
        .par_iter()
        .map(|p| structure_rows(p, config))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// The ring of a walk, with the irreducible bundle when the ring is a
/// group dual (the matrix oracle needs it).
pub fn build_ring(spec: &RingSpec) -> Result<(FusionRing, Option<IrrepBundle>), CliError> {
    Ok(match spec {
        RingSpec::SuQ2(q) => (su_q2_ring(*q)?, None),
        RingSpec::Dual(g) => {
            let group = g.build()?;
            let bundle = irrep_decomposition(&group, DEFAULT_IRREP_SEED)?;
            (group_dual_ring(&bundle, &group)?, Some(bundle))
        }
        RingSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            (FusionRing::parse_text(path.display().to_string(), &text)?, None)
        }
    })
}

pub fn initial_trace(spec: &StateSpec, ring: &FusionRing) -> Result<QTrace, CliError> {
    let label = |name: &str| -> Result<usize, CliError> {
        let l = ring.label_by_name(name)?;
        ring.qdim(l)?;
        Ok(l)
    };
    Ok(match spec {
        StateSpec::Uniform => {
            let k = ring
                .label_count()
                .ok_or_else(|| CliError::Usage(format!("uniform state needs a finite ring, {} is infinite", ring.name())))?;
            QTrace::uniform(0..k)?
        }
        StateSpec::Delta(name) => QTrace::delta(label(name)?),
        StateSpec::Weights(pairs) => {
            let mut w = BTreeMap::new();
            for (name, x) in pairs {
                *w.entry(label(name)?).or_insert(0.0) += x;
            }
            QTrace::new(w)?
        }
    })
}

fn run_walk(config: &RunConfig) -> Result<Vec<WalkRecord>, CliError> {
    let spec = config.ring.as_ref().expect("validated");
    let (ring, bundle) = build_ring(spec)?;
    let state = config.state.clone().unwrap_or(StateSpec::Uniform);
    let mu = initial_trace(&state, &ring)?;
    let tol = config.tolerance;
    walk(&mu, &ring, config.steps)?
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let entropy = hiai_izumi_entropy(m, &ring)?;
            let oracle = bundle.as_ref().map(|b| kac_entropy_oracle(m, b)).transpose()?;
            let oracle_deviation = oracle.map(|o| (o - entropy).abs());
            let mass_error = (m.total() - 1.0).abs();
            Ok(WalkRecord {
                ring: spec.to_string(),
                step: k + 1,
                entropy,
                oracle,
                oracle_deviation,
                mass_error,
                support_size: m.weights().len(),
                pass: entropy.is_finite() && mass_error <= tol && oracle_deviation.is_none_or(|d| d <= tol),
            })
        })
        .collect()
}
