use std::io::Write;

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;

/// Bumped whenever a field is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

pub trait TrialRecord: Serialize {
    fn passed(&self) -> bool;
    /// Inequality slack, if the record carries one.
    fn slack(&self) -> Option<f64> {
        None
    }
    /// Residual of an identity that should hold exactly, if any.
    fn deviation(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyRecord {
    pub group: String,
    pub source: String,
    pub index: usize,
    pub label: String,
    pub h_d: f64,
    pub h_dhat: f64,
    pub h_rho: f64,
    pub bound: f64,
    pub slack: f64,
    pub dual_density_slack: f64,
    pub correlation_slack: f64,
    /// Largest pairwise difference of the three slacks.
    pub route_spread: f64,
    /// Largest gap between singular-number and spectral entropy over the
    /// densities involved.
    pub singular_number_gap: f64,
    pub pass: bool,
}

impl TrialRecord for UncertaintyRecord {
    fn passed(&self) -> bool {
        self.pass
    }
    fn slack(&self) -> Option<f64> {
        Some(self.slack)
    }
    fn deviation(&self) -> Option<f64> {
        Some(self.route_spread.max(self.singular_number_gap))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSupportRecord {
    pub group: String,
    pub source: String,
    pub index: usize,
    pub label: String,
    /// `state` for the density form, `function` for the vector form.
    pub check: String,
    pub support_measure: f64,
    pub rank_sum: usize,
    pub product: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl TrialRecord for RankSupportRecord {
    fn passed(&self) -> bool {
        self.pass
    }
    fn slack(&self) -> Option<f64> {
        Some(self.margin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureRecord {
    pub group: String,
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl TrialRecord for StructureRecord {
    fn passed(&self) -> bool {
        self.pass
    }
    fn deviation(&self) -> Option<f64> {
        Some(self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkRecord {
    pub ring: String,
    pub step: usize,
    pub entropy: f64,
    pub oracle: Option<f64>,
    pub oracle_deviation: Option<f64>,
    pub mass_error: f64,
    pub support_size: usize,
    pub pass: bool,
}

impl TrialRecord for WalkRecord {
    fn passed(&self) -> bool {
        self.pass
    }
    fn deviation(&self) -> Option<f64> {
        Some(self.oracle_deviation.unwrap_or(0.0).max(self.mass_error))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Records {
    Uncertainty(Vec<UncertaintyRecord>),
    RankSupport(Vec<RankSupportRecord>),
    Structure(Vec<StructureRecord>),
    Walk(Vec<WalkRecord>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub min_slack: Option<f64>,
    pub max_deviation: Option<f64>,
}

impl Summary {
    pub fn of<R: TrialRecord>(records: &[R]) -> Self {
        let passed = records.iter().filter(|r| r.passed()).count();
        let fold = |f: fn(&R) -> Option<f64>, pick: fn(f64, f64) -> f64| {
            records.iter().filter_map(f).reduce(pick)
        };
        Self {
            trials: records.len(),
            passed,
            failed: records.len() - passed,
            min_slack: fold(R::slack, f64::min),
            max_deviation: fold(R::deviation, f64::max),
        }
    }
}

impl Records {
    pub fn summary(&self) -> Summary {
        match self {
            Records::Uncertainty(r) => Summary::of(r),
            Records::RankSupport(r) => Summary::of(r),
            Records::Structure(r) => Summary::of(r),
            Records::Walk(r) => Summary::of(r),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Records::Uncertainty(r) => r.len(),
            Records::RankSupport(r) => r.len(),
            Records::Structure(r) => r.len(),
            Records::Walk(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub records: Records,
    pub summary: Summary,
    pub verdict: Verdict,
}

impl ReportDocument {
    pub fn new(config: RunConfig, records: Records) -> Self {
        let summary = records.summary();
        let verdict = if summary.failed == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "fqg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            records,
            summary,
            verdict,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Per-trial rows only; the column set is fixed per command.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.records {
            Records::Uncertainty(r) => write_rows(&mut w, r)?,
            Records::RankSupport(r) => write_rows(&mut w, r)?,
            Records::Structure(r) => write_rows(&mut w, r)?,
            Records::Walk(r) => write_rows(&mut w, r)?,
        }
        let bytes = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    pub fn write_to(&self, format: OutputFormat, out: &mut dyn Write) -> Result<(), CliError> {
        out.write_all(self.render(format)?.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
    }
}

fn write_rows<R: Serialize>(w: &mut csv::Writer<Vec<u8>>, rows: &[R]) -> Result<(), CliError> {
    for r in rows {
        w.serialize(r)?;
    }
    Ok(())
}
