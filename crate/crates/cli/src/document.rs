//! The one on-disk format: a JSON object `{"kind": …, "payload": …}` with
//! fields in declaration order and rationals as `"p/q"` strings.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use coarse_core::covers::{DimensionCertificate, PropertyCCertificate, SubsetFamily};
use coarse_core::decomposition::{Challenge, GameTranscript, WeakDecomposition};
use coarse_core::maps::CoarseMap;
use coarse_core::metric::FiniteMetric;
use coarse_core::property_a::{PropertyAConfig, PropertyAWitness};
use coarse_core::rational::{self, Rational};
use coarse_core::relations::Filtration;
use coarse_core::verdict::Verdict;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Document {
    Space(MetricSpace),
    Filtration(Filtration),
    Family(SubsetFamily),
    Certificate(Certificate),
    Transcript(GameTranscript),
    Report(Report),
}

/// A finite metric presented at the given radii.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSpace {
    pub metric: FiniteMetric,
    #[serde(default, serialize_with = "radii_out", deserialize_with = "radii_in")]
    pub scales: Vec<Rational>,
}

fn radii_out<S: Serializer>(r: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(rational::format))
}

fn radii_in<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    raw.iter().map(|s| rational::parse(s)).collect::<Result<_, _>>().map_err(serde::de::Error::custom)
}

impl MetricSpace {
    /// The presentation at `scales`, or the discrete one when none are given.
    pub fn filtration(&self) -> CliResult<Filtration> {
        let radii = if self.scales.is_empty() { vec![rational::zero()] } else { self.scales.clone() };
        Ok(self.metric.filtration(&radii)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    PropertyC(PropertyCCertificate),
    Dimension(DimensionCertificate),
    PropertyAConfig(PropertyAConfig),
    PropertyAWitness(PropertyAWitness),
    Decomposition(WeakDecomposition),
    Challenge(Challenge),
    Map(CoarseMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Constructed,
    Won,
    Refuted,
    Unknown,
    Lost,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Holds | Status::Constructed | Status::Won => 0,
            Status::Refuted | Status::Unknown | Status::Lost | Status::Invalid => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Box<Document>>,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        Report { command: command.into(), status, verdict: None, facts: BTreeMap::new(), output: None }
    }

    pub fn from_verdict(command: &str, verdict: Verdict) -> Self {
        let status = if verdict.is_ok() { Status::Holds } else { Status::Refuted };
        Report { verdict: Some(verdict), ..Report::new(command, status) }
    }

    pub fn with_output(mut self, doc: Document) -> Self {
        self.output = Some(Box::new(doc));
        self
    }

    pub fn fact(mut self, key: &str, value: impl ToString) -> Self {
        self.facts.insert(key.into(), value.to_string());
        self
    }
}

pub fn parse(text: &str, origin: &Path) -> CliResult<Document> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: strip_location(e.to_string()),
    })
}

/// serde_json appends " at line L column C"; the error carries those already.
fn strip_location(message: String) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    }
}

pub fn load(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse(&text, path)
}

/// Pretty JSON with a trailing newline.
pub fn render(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
