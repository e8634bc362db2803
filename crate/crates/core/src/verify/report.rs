use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spectral::SpectralEstimate;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parameter keys describing a shard rather than the scan itself.
pub const SHARD_KEYS: [&str; 2] = ["shards", "shard"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Inconclusive,
    Violated,
}

/// Which witnesses a scan keeps in `extremal_witnesses`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MaxRho,
    MinBooksize,
    MaxEdges,
    Equality,
    None,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxRho => "max-rho",
            Objective::MinBooksize => "min-booksize",
            Objective::MaxEdges => "max-edges",
            Objective::Equality => "equality",
            Objective::None => "none",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Objective::MaxRho,
            Objective::MinBooksize,
            Objective::MaxEdges,
            Objective::Equality,
            Objective::None,
        ]
        .into_iter()
        .find(|o| o.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoBracket {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl From<&SpectralEstimate> for RhoBracket {
    fn from(e: &SpectralEstimate) -> Self {
        RhoBracket {
            value: e.value,
            lower: e.lower,
            upper: e.upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub g6: Option<String>,
    pub values: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub g6: String,
    pub rho: RhoBracket,
    pub e: usize,
    pub booksize: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub target: String,
    pub params: BTreeMap<String, Value>,
    pub scanned: u64,
    pub filtered: u64,
    pub violations: Vec<Violation>,
    pub extremal_witnesses: Vec<Witness>,
    /// graph6 of graphs whose ρ bracket could not be separated from the threshold.
    pub inconclusive: Vec<String>,
    /// Derived results: optima, notes, formula values.
    pub summary: BTreeMap<String, Value>,
    pub elapsed: f64,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(target: &str, params: BTreeMap<String, Value>) -> Self {
        VerificationReport {
            tool_version: TOOL_VERSION.to_string(),
            target: target.to_string(),
            params,
            scanned: 0,
            filtered: 0,
            violations: Vec::new(),
            extremal_witnesses: Vec::new(),
            inconclusive: Vec::new(),
            summary: BTreeMap::new(),
            elapsed: 0.0,
            verdict: Verdict::Holds,
        }
    }

    pub fn objective(&self) -> Objective {
        self.params
            .get("objective")
            .and_then(Value::as_str)
            .and_then(Objective::from_name)
            .unwrap_or(Objective::None)
    }

    /// True when the scan ran outside the proven range and asserts nothing.
    pub fn report_only(&self) -> bool {
        self.params.get("mode").and_then(Value::as_str) == Some("report-only")
    }

    /// Sorts and deduplicates lists, applies the objective to the witnesses,
    /// recomputes derived summary entries and the verdict.
    pub fn finalize(&mut self) {
        let mut seen = BTreeSet::new();
        self.violations.sort_by(|a, b| a.g6.cmp(&b.g6));
        self.violations.retain(|v| seen.insert(v.g6.clone()));
        self.inconclusive.sort();
        self.inconclusive.dedup();
        self.extremal_witnesses.sort_by(|a, b| a.g6.cmp(&b.g6));
        self.extremal_witnesses.dedup_by(|a, b| a.g6 == b.g6);
        let objective = self.objective();
        let ws = &mut self.extremal_witnesses;
        match objective {
            Objective::MaxRho => {
                let best = ws
                    .iter()
                    .map(|w| w.rho.lower)
                    .fold(f64::NEG_INFINITY, f64::max);
                ws.retain(|w| w.rho.upper >= best);
            }
            Objective::MinBooksize => {
                if let Some(min) = ws.iter().map(|w| w.booksize).min() {
                    ws.retain(|w| w.booksize == min);
                    self.summary.insert("min_booksize".into(), min.into());
                }
            }
            Objective::MaxEdges => {
                if let Some(max) = ws.iter().map(|w| w.e).max() {
                    ws.retain(|w| w.e == max);
                    self.summary.insert("max_edges".into(), max.into());
                }
            }
            Objective::Equality | Objective::None => {}
        }
        if objective != Objective::None {
            self.summary
                .insert("witness_count".into(), self.extremal_witnesses.len().into());
        }
        self.verdict = if !self.violations.is_empty() {
            Verdict::Violated
        } else if !self.inconclusive.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        };
    }

    /// Combines two shards of one scan. Counts and elapsed add up, lists are
    /// unioned, and the shard parameters are dropped.
    pub fn merge(&self, other: &VerificationReport) -> Result<VerificationReport> {
        if self.target != other.target {
            return Err(Error::Merge(format!(
                "targets differ: {} vs {}",
                self.target, other.target
            )));
        }
        let (pa, pb) = (scan_params(&self.params), scan_params(&other.params));
        if pa != pb {
            return Err(Error::Merge("scan parameters differ".into()));
        }
        let mut summary = self.summary.clone();
        for (k, v) in &other.summary {
            if derived_key(k) {
                continue;
            }
            match summary.get(k) {
                Some(mine) if mine != v => {
                    return Err(Error::Merge(format!("summary entry {k} differs")));
                }
                _ => {
                    summary.insert(k.clone(), v.clone());
                }
            }
        }
        summary.retain(|k, _| !derived_key(k));
        let mut out = VerificationReport {
            tool_version: self.tool_version.clone(),
            target: self.target.clone(),
            params: pa,
            scanned: self.scanned + other.scanned,
            filtered: self.filtered + other.filtered,
            violations: [self.violations.clone(), other.violations.clone()].concat(),
            extremal_witnesses: [
                self.extremal_witnesses.clone(),
                other.extremal_witnesses.clone(),
            ]
            .concat(),
            inconclusive: [self.inconclusive.clone(), other.inconclusive.clone()].concat(),
            summary,
            elapsed: self.elapsed + other.elapsed,
            verdict: Verdict::Holds,
        };
        out.finalize();
        Ok(out)
    }

    /// Copy with timing and shard information removed, for comparisons.
    pub fn normalized(&self) -> VerificationReport {
        let mut r = self.clone();
        r.elapsed = 0.0;
        r.params = scan_params(&r.params);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<VerificationReport> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad report JSON: {e}")))
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "target",
        "verdict",
        "mode",
        "scanned",
        "filtered",
        "violations",
        "inconclusive",
        "extremal_witnesses",
        "elapsed",
        "params",
    ];

    /// One-row CSV summary with a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io {
            path: "csv".into(),
            message: e.to_string(),
        };
        out.write_record(Self::CSV_HEADER).map_err(io)?;
        let verdict = serde_json::to_value(self.verdict).expect("verdict serializes");
        let mode = self
            .params
            .get("mode")
            .and_then(Value::as_str)
            .unwrap_or("asserted");
        out.write_record([
            self.target.clone(),
            verdict.as_str().unwrap_or_default().to_string(),
            mode.to_string(),
            self.scanned.to_string(),
            self.filtered.to_string(),
            self.violations.len().to_string(),
            self.inconclusive.len().to_string(),
            self.extremal_witnesses.len().to_string(),
            format!("{:.3}", self.elapsed),
            serde_json::to_string(&self.params).expect("params serialize"),
        ])
        .map_err(io)?;
        out.flush().map_err(|e| Error::Io {
            path: "csv".into(),
            message: e.to_string(),
        })
    }
}

fn scan_params(p: &BTreeMap<String, Value>) -> BTreeMap<String, Value> {
    p.iter()
        .filter(|(k, _)| !SHARD_KEYS.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn derived_key(k: &str) -> bool {
    matches!(k, "min_booksize" | "max_edges" | "witness_count")
}
