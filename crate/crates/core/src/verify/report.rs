use std::fmt::Write;
use std::time::Duration;

use serde::Serialize;

use super::{SampleCount, VerifyConfig};
use crate::dsl::{Mode, Suite};
use crate::fock::{Margin, ModeConfig, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub state: Vec<u32>,
    pub target: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
    /// Sample point, or `1` for a limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationRecord {
    pub name: String,
    pub outcome: Outcome,
    pub mode: Mode,
    pub margin: Vec<u32>,
    pub columns_compared: usize,
    pub samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_required: Option<usize>,
    pub witness: Option<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Shown in the text table only, so that JSON is reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RelationRecord {
    pub fn new(name: &str, mode: Mode, outcome: Outcome, margin: Vec<u32>, columns: usize) -> Self {
        RelationRecord {
            name: name.to_string(),
            outcome,
            mode,
            margin,
            columns_compared: columns,
            samples_used: 0,
            samples_required: None,
            witness: None,
            note: None,
            wall_time: Duration::ZERO,
        }
    }

    pub fn with_witness(mut self, w: Option<WitnessRecord>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_samples(mut self, used: usize, required: usize) -> Self {
        self.samples_used = used;
        self.samples_required = Some(required);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub modes: usize,
    pub suite_modes: usize,
    pub cutoff: u32,
    pub margin: String,
    pub mode: Mode,
    pub samples: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge_seed: Option<u64>,
}

impl ConfigEcho {
    pub fn new(suite: &Suite, cfg: &VerifyConfig, config: ModeConfig) -> Self {
        ConfigEcho {
            modes: config.modes(),
            suite_modes: suite.modes,
            cutoff: config.cutoff(),
            margin: match cfg.margin {
                Margin::Auto => "auto".into(),
                Margin::Fixed(n) => n.to_string(),
            },
            mode: cfg.mode,
            samples: match cfg.samples {
                SampleCount::Auto => "auto".into(),
                SampleCount::Fixed(n) => n.to_string(),
            },
            seed: cfg.seed,
            points: cfg
                .points
                .as_ref()
                .map(|ps| ps.iter().map(|p| p.to_string()).collect()),
            gauge_seed: cfg.gauge_seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: ConfigEcho,
    /// In suite order.
    pub relations: Vec<RelationRecord>,
    pub engine_version: String,
}

fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Inconclusive => "inconclusive",
    }
}

fn state_str(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(|n| n.to_string()).collect();
    format!("|{}>", parts.join(","))
}

impl Report {
    /// Fail if any relation fails, else inconclusive if any is, else pass.
    pub fn outcome(&self) -> Outcome {
        let has = |o| self.relations.iter().any(|r| r.outcome == o);
        if has(Outcome::Fail) {
            Outcome::Fail
        } else if has(Outcome::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "suite {}  modes {}  cutoff {}  mode {}  margin {}  samples {}  seed {}",
            self.suite, c.modes, c.cutoff, c.mode, c.margin, c.samples, c.seed
        );
        let width = self.relations.iter().map(|r| r.name.len()).max().unwrap_or(8).max(8);
        let _ = writeln!(
            out,
            "{:<width$}  {:<12}  {:<6}  {:<12}  {:>7}  {:>9}  {:>9}",
            "relation", "outcome", "mode", "margin", "columns", "samples", "time"
        );
        for r in &self.relations {
            let margin: Vec<String> = r.margin.iter().map(|m| m.to_string()).collect();
            let samples = match r.samples_required {
                Some(k) => format!("{}/{k}", r.samples_used),
                None => "-".into(),
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:<12}  {:<6}  {:<12}  {:>7}  {:>9}  {:>8.3}s",
                r.name,
                outcome_str(r.outcome),
                r.mode,
                margin.join(","),
                r.columns_compared,
                samples,
                r.wall_time.as_secs_f64()
            );
            if let Some(w) = &r.witness {
                let at = w.point.as_ref().map(|p| format!(" at t = {p}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "    witness {} -> {}{at}: lhs {} vs rhs {}",
                    state_str(&w.state),
                    state_str(&w.target),
                    w.lhs,
                    w.rhs
                );
            }
            if let Some(n) = &r.note {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let _ = writeln!(out, "result: {}", outcome_str(self.outcome()));
        out
    }
}
