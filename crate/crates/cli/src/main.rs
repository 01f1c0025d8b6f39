use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fqg_cli::config::{parse_ensembles, parse_groups};
use fqg_cli::{run, CliError, Command, OutputFormat, RingSpec, RunConfig, StateSpec};

/// Verification sweeps for entropic uncertainty, complementarity and
/// q-trace walks on finite quantum groups.
///
/// Exit status: 0 every check passed, 1 some check failed, 2 invalid input,
/// 3 numerical failure. Set FQG_THREADS to bound the worker pool.
#[derive(Parser)]
#[command(name = "fqg", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Entropic uncertainty over the equality census and random states.
    Uncertainty(SweepArgs),
    /// Support-times-rank uncertainty over the census and random inputs.
    Ranksupport(SweepArgs),
    /// Structural identities of the quantum pair.
    Structure(StructureArgs),
    /// Entropy of a q-trace random walk on a fusion ring.
    Walk(WalkArgs),
}

#[derive(Args)]
struct Common {
    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Absolute tolerance (per-command default when omitted).
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Group spec (Z5, D4, Q8, S3, K4, Z2xZ3, file:path) or a comma list; `builtin` for the standard suite.
    #[arg(long)]
    group: String,
    /// Comma list of census, pure:N, wishart:N, wishart-R:N, sparse:N.
    #[arg(long, default_value = "census")]
    ensemble: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long)]
    group: String,
    /// Also check the character basis is mutually unbiased (abelian groups).
    #[arg(long)]
    mub: bool,
    /// Random vectors for the Kraus and Plancherel checks.
    #[arg(long, default_value_t = 10)]
    kraus: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct WalkArgs {
    /// suq2:<q>, dual:<group> or file:<path>.
    #[arg(long)]
    ring: String,
    /// uniform, delta:<label> or weights:<label>=<w>,...
    #[arg(long, default_value = "uniform")]
    state: String,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[command(flatten)]
    common: Common,
}

fn apply_common(config: &mut RunConfig, common: Common) -> Result<(), CliError> {
    config.format = common.format.parse()?;
    config.output = common.output;
    config.seed = common.seed;
    if let Some(t) = common.tolerance {
        config.tolerance = t;
    }
    Ok(())
}

fn build_config(cli: Cli) -> Result<RunConfig, CliError> {
    let config = match cli.command {
        Sub::Uncertainty(a) => sweep_config(Command::Uncertainty, a)?,
        Sub::Ranksupport(a) => sweep_config(Command::Ranksupport, a)?,
        Sub::Structure(a) => {
            let mut c = RunConfig::new(Command::Structure);
            c.groups = parse_groups(&a.group)?;
            c.mub = a.mub;
            c.kraus_trials = a.kraus;
            c.ensemble = Vec::new();
            apply_common(&mut c, a.common)?;
            c
        }
        Sub::Walk(a) => {
            let mut c = RunConfig::new(Command::Walk);
            c.ring = Some(a.ring.parse::<RingSpec>()?);
            c.state = Some(a.state.parse::<StateSpec>()?);
            c.steps = a.steps;
            c.ensemble = Vec::new();
            apply_common(&mut c, a.common)?;
            c
        }
    };
    Ok(config)
}

fn sweep_config(command: Command, a: SweepArgs) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::new(command);
    c.groups = parse_groups(&a.group)?;
    c.ensemble = parse_ensembles(&a.ensemble)?;
    apply_common(&mut c, a.common)?;
    Ok(c)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FQG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| CliError::Usage(format!("FQG_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(CliError::Usage("FQG_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(config: &RunConfig) -> Result<i32, CliError> {
    let doc = run(config)?;
    let text = doc.render(config.format)?;
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    if config.format == OutputFormat::Csv || config.output.is_some() {
        let s = &doc.summary;
        eprintln!(
            "{}: {} trials, {} failed, verdict {:?}",
            config.command, s.trials, s.failed, doc.verdict
        );
    }
    Ok(doc.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = configure_threads()
        .and_then(|()| build_config(cli))
        .and_then(|c| emit(&c))
        .unwrap_or_else(|e| {
            eprintln!("fqg: {e}");
            e.exit_code()
        });
    ExitCode::from(code as u8)
}
