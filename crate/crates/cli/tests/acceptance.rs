//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use fqg_cli::config::EnsembleSpec;
use fqg_cli::report::{RankSupportRecord, Records, StructureRecord, UncertaintyRecord};
use fqg_cli::{run, Command, RunConfig};
use fqg_core::ensemble::EnsembleKind;
use fqg_core::fusion::{
    group_dual_ring, hiai_izumi_entropy, kac_entropy_oracle, su_q2_ring, walk, FusionRing, QTrace,
};
use fqg_core::group::GroupSpec;
use fqg_core::irreps::{irrep_decomposition, IrrepBundle};
use fqg_core::linalg::{gibbs_check, gibbs_state, golden_thompson_check};
use fqg_core::random::{gaussian_vector, random_hermitian, stream};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, o: &Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name} ({})", o.detail);
}

fn config(command: Command, groups: Vec<GroupSpec>) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.groups = groups;
    c.seed = SEED;
    c
}

fn uncertainty_sweep() -> (Vec<UncertaintyRecord>, f64) {
    let mut c = config(Command::Uncertainty, GroupSpec::builtin_suite());
    c.ensemble = vec![
        EnsembleSpec::Census,
        EnsembleSpec::Random {
            kind: EnsembleKind::Wishart { rank: None },
            count: 500,
        },
        EnsembleSpec::Random {
            kind: EnsembleKind::PureHaar,
            count: 500,
        },
    ];
    let t = Instant::now();
    let doc = run(&c).expect("uncertainty sweep runs");
    let Records::Uncertainty(rows) = doc.records else { unreachable!() };
    (rows, t.elapsed().as_secs_f64())
}

fn criterion_1(rows: &[UncertaintyRecord], secs: f64) -> Outcome {
    let random: Vec<_> = rows.iter().filter(|r| r.source != "census").collect();
    let census: Vec<_> = rows.iter().filter(|r| r.source == "census").collect();
    let min_slack = random.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let census_max = census.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
    let groups: std::collections::BTreeSet<_> = rows.iter().map(|r| r.group.as_str()).collect();
    Outcome {
        pass: groups.len() == 17
            && random.len() == 17 * 1000
            && min_slack >= -1e-9
            && census_max <= 1e-9
            && secs < 300.0,
        detail: format!(
            "{} groups, {} random states, min slack {min_slack:.3e}, {} census states, max |census slack| {census_max:.3e}, {secs:.1} s",
            groups.len(),
            random.len(),
            census.len()
        ),
    }
}

fn criterion_2(rows: &[UncertaintyRecord]) -> Outcome {
    let spread = rows.iter().map(|r| r.route_spread).fold(0.0, f64::max);
    Outcome {
        pass: spread <= 1e-9,
        detail: format!("max pairwise slack difference {spread:.3e} over {} states", rows.len()),
    }
}

fn criterion_3() -> Outcome {
    let mut c = config(Command::Ranksupport, GroupSpec::builtin_suite());
    c.ensemble = vec![
        EnsembleSpec::Census,
        EnsembleSpec::Random {
            kind: EnsembleKind::Sparse,
            count: 100,
        },
        EnsembleSpec::Random {
            kind: EnsembleKind::PureHaar,
            count: 50,
        },
        EnsembleSpec::Random {
            kind: EnsembleKind::Wishart { rank: Some(2) },
            count: 50,
        },
    ];
    let doc = run(&c).expect("rank-support sweep runs");
    let Records::RankSupport(rows) = doc.records else { unreachable!() };
    let random_states: Vec<&RankSupportRecord> =
        rows.iter().filter(|r| r.source != "census" && r.check == "state").collect();
    let min_margin = rows
        .iter()
        .filter(|r| r.source != "census")
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    let census_functions: Vec<_> = rows.iter().filter(|r| r.source == "census" && r.check == "function").collect();
    let exact = census_functions.iter().all(|r| r.product == 1.0);
    Outcome {
        pass: random_states.len() == 17 * 200 && min_margin >= -1e-6 && exact,
        detail: format!(
            "{} random states + {} random functions, min(product - rhs) {min_margin:.3e}; {} delta/constant/character census products all exactly 1: {exact}",
            random_states.len(),
            rows.iter().filter(|r| r.source != "census" && r.check == "function").count(),
            census_functions.len()
        ),
    }
}

fn structure_sweep() -> Vec<StructureRecord> {
    let mut c = config(Command::Structure, GroupSpec::builtin_suite());
    c.kraus_trials = 50;
    let doc = run(&c).expect("structure sweep runs");
    let Records::Structure(rows) = doc.records else { unreachable!() };
    rows
}

fn check_all(rows: &[StructureRecord], checks: &[&str], limit: f64) -> (bool, f64, usize) {
    let picked: Vec<_> = rows.iter().filter(|r| checks.contains(&r.check.as_str())).collect();
    let worst = picked.iter().map(|r| r.value).fold(0.0, f64::max);
    (picked.iter().all(|r| r.pass) && worst <= limit, worst, picked.len())
}

fn criterion_4(rows: &[StructureRecord]) -> Outcome {
    let (comp, worst, k) = check_all(
        rows,
        &[
            "complementarity_minimal_projections",
            "complementarity_orthogonality",
            "complementarity_trace_factorization",
            "complementarity_scalar_expectation",
        ],
        1e-10,
    );
    let (span, deficiency, _) = check_all(rows, &["span_rank_deficiency"], 0.0);
    Outcome {
        pass: comp && span && k == 17 * 4,
        detail: format!("{k} complementarity residuals, worst {worst:.3e}; max span rank deficiency {deficiency}"),
    }
}

fn criterion_5(rows: &[StructureRecord]) -> Outcome {
    let (ok, worst, k) = check_all(rows, &["kraus_max_residual"], 1e-9);
    Outcome {
        pass: ok && k == 17,
        detail: format!("50 random xi on each of {k} groups, worst completeness/channel residual {worst:.3e}"),
    }
}

fn criterion_6() -> Outcome {
    let mut worst_eq = 0.0f64;
    let mut worst_ineq = f64::INFINITY;
    for i in 0..200 {
        let mut rng = stream(SEED ^ 0x61bb5, i);
        let a = random_hermitian(&mut rng, 8);
        let (lhs, rhs) = gibbs_check(&a, &gibbs_state(&a).unwrap()).unwrap();
        worst_eq = worst_eq.max((lhs - rhs).abs());
        let rho = EnsembleKind::Wishart { rank: None }.state(8, SEED, i).unwrap();
        let (lhs, rhs) = gibbs_check(&a, rho.density()).unwrap();
        worst_ineq = worst_ineq.min(lhs - rhs);
    }
    let mut worst_gt = f64::NEG_INFINITY;
    for i in 0..1000 {
        let mut rng = stream(SEED ^ 0x60_1d, i);
        let a = random_hermitian(&mut rng, 6);
        let b = random_hermitian(&mut rng, 6);
        let (lhs, rhs) = golden_thompson_check(&a, &b).unwrap();
        worst_gt = worst_gt.max((lhs - rhs) / rhs);
    }
    Outcome {
        pass: worst_eq <= 1e-9 && worst_ineq >= -1e-9 && worst_gt <= 1e-10,
        detail: format!(
            "Gibbs equality gap {worst_eq:.3e}, min Gibbs slack {worst_ineq:.3e}; Golden-Thompson over 1000 pairs, max (lhs - rhs)/rhs {worst_gt:.3e}"
        ),
    }
}

fn criterion_7(rows: &[UncertaintyRecord]) -> Outcome {
    let gap = rows.iter().map(|r| r.singular_number_gap).fold(0.0, f64::max);
    Outcome {
        pass: gap <= 1e-9,
        detail: format!("max |H_s - H| {gap:.3e} over rho, E(rho), E^(rho) and the dual density of {} states", rows.len()),
    }
}

/// Random probability vector on `0..k`, with some labels switched off.
fn random_qtrace(k: usize, seed: u64, i: u64) -> QTrace {
    let mut rng = stream(seed, i);
    let g = gaussian_vector(&mut rng, k);
    let mask = gaussian_vector(&mut rng, k);
    let mut w: BTreeMap<usize, f64> = g
        .iter()
        .zip(&mask)
        .enumerate()
        .filter(|(_, (_, m))| i % 2 == 0 || m.re > -0.5)
        .map(|(a, (z, _))| (a, z.norm_sqr()))
        .collect();
    if w.is_empty() {
        w.insert(0, 1.0);
    }
    let total: f64 = w.values().sum();
    w.values_mut().for_each(|x| *x /= total);
    QTrace::new(w).unwrap()
}

fn criterion_8() -> Outcome {
    let mut oracle_gap = 0.0f64;
    let mut mass_gap = 0.0f64;
    let mut rings: Vec<(FusionRing, IrrepBundle)> = Vec::new();
    for spec in GroupSpec::builtin_suite() {
        let g = spec.build().unwrap();
        let bundle = irrep_decomposition(&g, SEED).unwrap();
        rings.push((group_dual_ring(&bundle, &g).unwrap(), bundle));
    }
    for (r, (ring, bundle)) in rings.iter().enumerate() {
        let k = ring.label_count().unwrap();
        for i in 0..100 {
            let mu = random_qtrace(k, SEED + r as u64, i);
            let h = hiai_izumi_entropy(&mu, ring).unwrap();
            oracle_gap = oracle_gap.max((h - kac_entropy_oracle(&mu, bundle).unwrap()).abs());
        }
        for i in 0..5 {
            for m in walk(&random_qtrace(k, SEED ^ 0xa11, i), ring, 10).unwrap() {
                mass_gap = mass_gap.max((m.total() - 1.0).abs());
                oracle_gap = oracle_gap.max((hiai_izumi_entropy(&m, ring).unwrap() - kac_entropy_oracle(&m, bundle).unwrap()).abs());
            }
        }
    }
    for q in [0.2, 0.5, 0.9, 1.0] {
        let ring = su_q2_ring(q).unwrap();
        for i in 0..5 {
            for m in walk(&random_qtrace(5, SEED ^ 0x5a2, i), &ring, 10).unwrap() {
                mass_gap = mass_gap.max((m.total() - 1.0).abs());
            }
        }
    }
    // q = 1: dimensions n + 1 and Clebsch-Gordan fusion, exactly
    let su2 = su_q2_ring(1.0).unwrap();
    let mut classical = true;
    for a in 0..=20usize {
        classical &= su2.qdim(a).unwrap() == (a + 1) as f64 && su2.classical_dim(a).unwrap() == a + 1;
        for b in 0..=20usize {
            let fused = su2.fuse(a, b).unwrap();
            let want: Vec<(usize, u32)> = (a.abs_diff(b)..=a + b).step_by(2).map(|c| (c, 1)).collect();
            let dim_sum: usize = fused.iter().map(|&(c, n)| n as usize * (c + 1)).sum();
            classical &= fused == want && dim_sum == (a + 1) * (b + 1);
        }
    }
    Outcome {
        pass: oracle_gap <= 1e-12 && mass_gap <= 1e-12 && classical,
        detail: format!(
            "{} dual rings x 100 q-traces + walks, max |H - oracle| {oracle_gap:.3e}; max normalization error over 10-step walks {mass_gap:.3e}; SU(2) data exact: {classical}",
            rings.len()
        ),
    }
}

fn criterion_9(rows: &[StructureRecord]) -> Outcome {
    let (exact, _, k_exact) = check_all(rows, &["dim_square_sum", "pentagon", "comultiplication"], 0.0);
    let (corep, worst_corep, _) = check_all(rows, &["corep_identity"], 1e-9);
    let mut c = config(Command::Structure, (2..=12).map(GroupSpec::Cyclic).collect());
    c.mub = true;
    c.kraus_trials = 0;
    let doc = run(&c).expect("MUB sweep runs");
    let Records::Structure(mub_rows) = doc.records else { unreachable!() };
    let (mub, worst_mub, k_mub) = check_all(&mub_rows, &["mub_deviation"], 1e-12);
    Outcome {
        pass: exact && corep && mub && k_exact == 17 * 3 && k_mub == 11,
        detail: format!(
            "sum d^2 = n, pentagon and co-multiplication exact on 17 groups; corep residual {worst_corep:.3e}; MUB deviation {worst_mub:.3e} on Z2..Z12"
        ),
    }
}

fn main() -> ExitCode {
    let t = Instant::now();
    let (urows, usecs) = uncertainty_sweep();
    let srows = structure_sweep();
    let outcomes = [
        ("entropic uncertainty sweep", criterion_1(&urows, usecs)),
        ("three entropic routes agree", criterion_2(&urows)),
        ("rank-support inequality", criterion_3()),
        ("complementarity and span", criterion_4(&srows)),
        ("Kraus decomposition", criterion_5(&srows)),
        ("Gibbs and Golden-Thompson", criterion_6()),
        ("singular-number entropy", criterion_7(&urows)),
        ("q-trace entropy and walks", criterion_8()),
        ("structural exactness", criterion_9(&srows)),
    ];
    for (i, (name, o)) in outcomes.iter().enumerate() {
        report(i + 1, name, o);
    }
    let failed = outcomes.iter().filter(|(_, o)| !o.pass).count();
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        outcomes.len() - failed,
        outcomes.len(),
        t.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
