use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use fqg_core::ensemble::EnsembleKind;
use fqg_core::group::GroupSpec;
use serde::{Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Uncertainty,
    Ranksupport,
    Structure,
    Walk,
}

impl Command {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Command::Uncertainty => 1e-9,
            Command::Ranksupport => 1e-6,
            Command::Structure => 1e-10,
            Command::Walk => 1e-12,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Uncertainty => "uncertainty",
            Command::Ranksupport => "ranksupport",
            Command::Structure => "structure",
            Command::Walk => "walk",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(CliError::Usage(format!("unknown format {s:?}, expected json or csv"))),
        }
    }
}

/// One component of `--ensemble`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleSpec {
    Census,
    Random { kind: EnsembleKind, count: usize },
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleSpec::Census => f.write_str("census"),
            EnsembleSpec::Random { kind, count } => write!(f, "{kind}:{count}"),
        }
    }
}

impl FromStr for EnsembleSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("census") {
            return Ok(EnsembleSpec::Census);
        }
        let (kind, count) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("ensemble {s:?} must be census or <kind>:<count>")))?;
        let count: usize = count
            .parse()
            .map_err(|_| CliError::Usage(format!("bad trial count in {s:?}")))?;
        Ok(EnsembleSpec::Random {
            kind: kind.parse()?,
            count,
        })
    }
}

/// Comma-separated ensemble list.
pub fn parse_ensembles(s: &str) -> Result<Vec<EnsembleSpec>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Comma-separated group list; `builtin` expands to the standard suite.
pub fn parse_groups(s: &str) -> Result<Vec<GroupSpec>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("builtin") {
            out.extend(GroupSpec::builtin_suite());
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no group given".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RingSpec {
    SuQ2(f64),
    Dual(GroupSpec),
    File(PathBuf),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::SuQ2(q) => write!(f, "suq2:{q}"),
            RingSpec::Dual(g) => write!(f, "dual:{g}"),
            RingSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for RingSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("ring {s:?} must be suq2:<q>, dual:<group> or file:<path>")))?;
        match kind.to_ascii_lowercase().as_str() {
            "suq2" => rest
                .parse()
                .map(RingSpec::SuQ2)
                .map_err(|_| CliError::Usage(format!("bad q in {s:?}"))),
            "dual" => Ok(RingSpec::Dual(rest.parse()?)),
            "file" => Ok(RingSpec::File(PathBuf::from(rest))),
            _ => Err(CliError::Usage(format!("unknown ring family {kind:?}"))),
        }
    }
}

/// Initial q-trace of a walk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Uniform,
    Delta(String),
    /// `label=weight` pairs.
    Weights(Vec<(String, f64)>),
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Uniform => f.write_str("uniform"),
            StateSpec::Delta(l) => write!(f, "delta:{l}"),
            StateSpec::Weights(w) => {
                f.write_str("weights:")?;
                for (i, (l, x)) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}={x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for StateSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(StateSpec::Uniform);
        }
        if let Some(l) = s.strip_prefix("delta:") {
            return Ok(StateSpec::Delta(l.to_string()));
        }
        if let Some(list) = s.strip_prefix("weights:") {
            let pairs = list
                .split(',')
                .map(|p| {
                    let (l, w) = p
                        .split_once('=')
                        .ok_or_else(|| CliError::Usage(format!("weight entry {p:?} must be label=weight")))?;
                    let w: f64 = w.parse().map_err(|_| CliError::Usage(format!("bad weight in {p:?}")))?;
                    Ok((l.to_string(), w))
                })
                .collect::<Result<_, CliError>>()?;
            return Ok(StateSpec::Weights(pairs));
        }
        Err(CliError::Usage(format!(
            "state {s:?} must be uniform, delta:<label> or weights:<label>=<w>,..."
        )))
    }
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

fn display_list<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "display")]
    pub command: Command,
    #[serde(serialize_with = "display_list")]
    pub groups: Vec<GroupSpec>,
    #[serde(serialize_with = "display_opt")]
    pub ring: Option<RingSpec>,
    #[serde(serialize_with = "display_list")]
    pub ensemble: Vec<EnsembleSpec>,
    pub seed: u64,
    pub tolerance: f64,
    pub mub: bool,
    pub kraus_trials: usize,
    #[serde(serialize_with = "display_opt")]
    pub state: Option<StateSpec>,
    pub steps: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// A config with defaults for everything but the command.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            groups: Vec::new(),
            ring: None,
            ensemble: vec![EnsembleSpec::Census],
            seed: 0,
            tolerance: command.default_tolerance(),
            mub: false,
            kraus_trials: 10,
            state: None,
            steps: 10,
            format: OutputFormat::Json,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        match self.command {
            Command::Walk => {
                if self.ring.is_none() {
                    return Err(CliError::Usage("walk needs --ring".into()));
                }
                if self.steps == 0 {
                    return Err(CliError::Usage("walk needs --steps >= 1".into()));
                }
            }
            _ => {
                if self.groups.is_empty() {
                    return Err(CliError::Usage(format!("{} needs --group", self.command)));
                }
            }
        }
        Ok(())
    }
}
