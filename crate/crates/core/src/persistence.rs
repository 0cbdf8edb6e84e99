//! Canonical JSON documents for instances, reports and transcripts, plus CSV
//! batch summaries.
//!
//! Every document is UTF-8, pretty-printed with sorted keys and a trailing
//! newline, so identical records always produce identical bytes.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::analysis::{
    AnalysisReport, Bound, BoundSet, CoherenceCertificate, EdgeKnobs, EdgeMode, EdgeReport, EdgeStatus,
};
use crate::engine::{CostStats, Step, Transcript};
use crate::instance::{validate_instance, Instance, InstanceError, Meta, RawHypothesis, RawInstance, TestRecord};
use crate::rational::{self, Rational};

pub const SCHEMA_VERSION: u64 = 1;

pub const INSTANCE_EXT: &str = ".instance.json";
pub const REPORT_EXT: &str = ".report.json";
pub const TRANSCRIPT_EXT: &str = ".transcript.json";
pub const CSV_EXT: &str = ".csv";

#[derive(Debug, thiserror::Error)]
pub enum PersistenceError {
    #[error("write failed: {0}")]
    SinkFailure(#[source] io::Error),
    #[error("read failed: {0}")]
    SourceFailure(#[source] io::Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {0}")]
    UnsupportedSchemaVersion(Value),
    #[error("expected a {expected} document, found {found:?}")]
    WrongKind { expected: &'static str, found: String },
    #[error("hypothesis {hypothesis:?} has outcome character {found:?} at test {position}")]
    InvalidOutcome { hypothesis: String, position: usize, found: char },
    #[error("invalid field {field}: {message}")]
    InvalidField { field: String, message: String },
    #[error("summary has no rows")]
    EmptySummary,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl PersistenceError {
    pub fn code(&self) -> &'static str {
        match self {
            PersistenceError::SinkFailure(_) => "SinkFailure",
            PersistenceError::SourceFailure(_) => "SourceFailure",
            PersistenceError::ParseError { .. } => "ParseError",
            PersistenceError::UnsupportedSchemaVersion(_) => "UnsupportedSchemaVersion",
            PersistenceError::WrongKind { .. } => "WrongKind",
            PersistenceError::InvalidOutcome { .. } => "InvalidOutcome",
            PersistenceError::InvalidField { .. } => "InvalidField",
            PersistenceError::EmptySummary => "EmptySummary",
            PersistenceError::Instance(e) => e.code(),
        }
    }
}

fn invalid(field: &str, message: impl ToString) -> PersistenceError {
    PersistenceError::InvalidField { field: field.to_string(), message: message.to_string() }
}

fn parse_error(e: serde_json::Error) -> PersistenceError {
    PersistenceError::ParseError { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Rounds to 12 significant digits so float fields render stably.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Pretty JSON with sorted keys and a final newline.
pub fn canonical_bytes(value: &Value) -> Vec<u8> {
    // serde_json's map type is a BTreeMap, so keys come out sorted
    let mut out = serde_json::to_vec_pretty(value).expect("JSON values serialize");
    out.push(b'\n');
    out
}

fn write_value<W: Write>(value: &Value, sink: &mut W) -> Result<usize, PersistenceError> {
    let bytes = canonical_bytes(value);
    sink.write_all(&bytes).map_err(PersistenceError::SinkFailure)?;
    Ok(bytes.len())
}

fn read_text<R: Read>(source: &mut R) -> Result<String, PersistenceError> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(PersistenceError::SourceFailure)?;
    Ok(text)
}

/// Parses, checks `schema_version` and (optionally) `kind`, then decodes.
fn decode<T: DeserializeOwned>(text: &str, kind: Option<&'static str>) -> Result<T, PersistenceError> {
    let value: Value = serde_json::from_str(text).map_err(parse_error)?;
    match value.get("schema_version") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(other) => return Err(PersistenceError::UnsupportedSchemaVersion(other.clone())),
        None => return Err(invalid("schema_version", "missing")),
    }
    if let Some(expected) = kind {
        let found = value.get("kind").and_then(Value::as_str).unwrap_or("").to_string();
        if found != expected {
            return Err(PersistenceError::WrongKind { expected, found });
        }
    }
    // decode from the text so positions in error messages are real
    serde_json::from_str(text).map_err(parse_error)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    schema_version: u64,
    name: String,
    family: String,
    params: Meta,
    tests: Vec<TestDocument>,
    hypotheses: Vec<HypothesisDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TestDocument {
    id: String,
    meta: Meta,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypothesisDocument {
    id: String,
    outcomes: String,
    meta: Meta,
}

fn instance_value(instance: &Instance) -> Value {
    let doc = InstanceDocument {
        schema_version: SCHEMA_VERSION,
        name: instance.name().to_string(),
        family: instance.family().to_string(),
        params: instance.params().clone(),
        tests: instance
            .tests()
            .iter()
            .map(|t| TestDocument { id: t.id.clone(), meta: t.meta.clone() })
            .collect(),
        hypotheses: instance
            .hypotheses()
            .iter()
            .map(|h| HypothesisDocument {
                id: h.id.clone(),
                outcomes: (0..instance.m_tests()).map(|x| if h.outcomes.contains(x) { '1' } else { '0' }).collect(),
                meta: h.meta.clone(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("instance documents serialize")
}

pub fn instance_bytes(instance: &Instance) -> Vec<u8> {
    canonical_bytes(&instance_value(instance))
}

/// Hex SHA-256 of the canonical instance bytes.
pub fn digest(instance: &Instance) -> String {
    hex::encode(Sha256::digest(instance_bytes(instance)))
}

pub fn write_instance<W: Write>(instance: &Instance, sink: &mut W) -> Result<usize, PersistenceError> {
    write_value(&instance_value(instance), sink)
}

pub fn parse_instance(text: &str) -> Result<Instance, PersistenceError> {
    let doc: InstanceDocument = decode(text, None)?;
    let mut hypotheses = Vec::with_capacity(doc.hypotheses.len());
    for h in doc.hypotheses {
        let mut outcomes = Vec::with_capacity(h.outcomes.len());
        for (position, ch) in h.outcomes.chars().enumerate() {
            match ch {
                '0' => outcomes.push(false),
                '1' => outcomes.push(true),
                found => return Err(PersistenceError::InvalidOutcome { hypothesis: h.id, position, found }),
            }
        }
        hypotheses.push(RawHypothesis { id: h.id, outcomes, meta: h.meta });
    }
    let raw = RawInstance {
        name: doc.name,
        family: doc.family,
        params: doc.params,
        tests: doc.tests.into_iter().map(|t| TestRecord { id: t.id, meta: t.meta }).collect(),
        hypotheses,
    };
    Ok(validate_instance(raw)?)
}

pub fn read_instance<R: Read>(source: &mut R) -> Result<Instance, PersistenceError> {
    parse_instance(&read_text(source)?)
}

fn bound_value(b: Bound) -> Value {
    match b {
        Bound::Finite(v) => serde_json::json!(round12(v)),
        Bound::Unbounded => Value::from("unbounded"),
    }
}

fn bound_from(field: &str, v: &Value) -> Result<Bound, PersistenceError> {
    match v {
        Value::String(s) if s == "unbounded" => Ok(Bound::Unbounded),
        Value::Number(n) => n.as_f64().map(Bound::Finite).ok_or_else(|| invalid(field, "not finite")),
        _ => Err(invalid(field, "expected a number or \"unbounded\"")),
    }
}

fn rat(field: &str, text: &str) -> Result<Rational, PersistenceError> {
    rational::parse(text).map_err(|e| invalid(field, e))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDocument {
    test: usize,
    weight: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoherenceDocument {
    distribution: Vec<WeightDocument>,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDocument {
    from_test: usize,
    to_test: usize,
    delta_size: usize,
    status: String,
    edge_value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples_tried: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisDocument {
    schema_version: u64,
    kind: String,
    instance_digest: String,
    instance: String,
    n: usize,
    m_tests: usize,
    k_min: usize,
    coherence: CoherenceDocument,
    edge_mode: String,
    edges: Vec<EdgeDocument>,
    alpha_star: String,
    diagnostic: Option<String>,
    beta: String,
    lambda: String,
    bound_nowak_worst: Value,
    bound_split_worst: Value,
    bound_split_average: Value,
    exhaustive_limit: usize,
    sample_count: usize,
    seed: u64,
    candidate_alpha: Option<String>,
    conditional: bool,
}

fn analysis_value(report: &AnalysisReport, instance_digest: &str) -> Value {
    let edges = report
        .edges
        .iter()
        .map(|e| {
            let (witness, samples_tried) = match &e.status {
                EdgeStatus::VerifiedExhaustive => (None, None),
                EdgeStatus::FalsifiedWitness(w) => (Some(w.clone()), None),
                EdgeStatus::UnknownSampled(s) => (None, Some(*s)),
            };
            EdgeDocument {
                from_test: e.from_test,
                to_test: e.to_test,
                delta_size: e.delta_size,
                status: e.status.name().to_string(),
                edge_value: rational::format(&e.edge_value),
                witness,
                samples_tried,
            }
        })
        .collect();
    let doc = AnalysisDocument {
        schema_version: SCHEMA_VERSION,
        kind: "analysis".to_string(),
        instance_digest: instance_digest.to_string(),
        instance: report.instance.clone(),
        n: report.n,
        m_tests: report.m_tests,
        k_min: report.k_min,
        coherence: CoherenceDocument {
            distribution: report
                .coherence
                .distribution
                .iter()
                .map(|(&test, w)| WeightDocument { test, weight: rational::format(w) })
                .collect(),
            value: rational::format(&report.coherence.value),
        },
        edge_mode: report.edge_mode.name().to_string(),
        edges,
        alpha_star: rational::format(&report.alpha_star),
        diagnostic: report.diagnostic.clone(),
        beta: rational::format(&report.beta),
        lambda: rational::format(&report.lambda),
        bound_nowak_worst: bound_value(report.bounds.nowak_worst),
        bound_split_worst: bound_value(report.bounds.split_worst),
        bound_split_average: bound_value(report.bounds.split_average),
        exhaustive_limit: report.knobs.exhaustive_limit,
        sample_count: report.knobs.samples,
        seed: report.knobs.seed,
        candidate_alpha: report.knobs.candidate_alpha.as_ref().map(rational::format),
        conditional: report.conditional,
    };
    serde_json::to_value(doc).expect("report documents serialize")
}

fn analysis_from(doc: AnalysisDocument) -> Result<(AnalysisReport, String), PersistenceError> {
    let mut distribution = BTreeMap::new();
    for w in &doc.coherence.distribution {
        distribution.insert(w.test, rat("coherence.distribution", &w.weight)?);
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in doc.edges {
        let status = match (e.status.as_str(), e.witness, e.samples_tried) {
            ("VerifiedExhaustive", None, None) => EdgeStatus::VerifiedExhaustive,
            ("FalsifiedWitness", Some(w), None) => EdgeStatus::FalsifiedWitness(w),
            ("UnknownSampled", None, Some(s)) => EdgeStatus::UnknownSampled(s),
            (other, _, _) => return Err(invalid("edges.status", format!("bad status {other:?}"))),
        };
        edges.push(EdgeReport {
            from_test: e.from_test,
            to_test: e.to_test,
            delta_size: e.delta_size,
            status,
            edge_value: rat("edges.edge_value", &e.edge_value)?,
        });
    }
    let lambda = rat("lambda", &doc.lambda)?;
    let report = AnalysisReport {
        instance: doc.instance,
        n: doc.n,
        m_tests: doc.m_tests,
        k_min: doc.k_min,
        coherence: CoherenceCertificate { distribution, value: rat("coherence.value", &doc.coherence.value)? },
        edge_mode: EdgeMode::parse(&doc.edge_mode).ok_or_else(|| invalid("edge_mode", &doc.edge_mode))?,
        edges,
        alpha_star: rat("alpha_star", &doc.alpha_star)?,
        diagnostic: doc.diagnostic,
        beta: rat("beta", &doc.beta)?,
        bounds: BoundSet {
            lambda: lambda.clone(),
            nowak_worst: bound_from("bound_nowak_worst", &doc.bound_nowak_worst)?,
            split_worst: bound_from("bound_split_worst", &doc.bound_split_worst)?,
            split_average: bound_from("bound_split_average", &doc.bound_split_average)?,
        },
        lambda,
        knobs: EdgeKnobs {
            exhaustive_limit: doc.exhaustive_limit,
            samples: doc.sample_count,
            seed: doc.seed,
            candidate_alpha: doc.candidate_alpha.as_deref().map(|t| rat("candidate_alpha", t)).transpose()?,
        },
        conditional: doc.conditional,
    };
    Ok((report, doc.instance_digest))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDocument {
    test: String,
    outcome: u8,
    size_after: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranscriptBody {
    oracle_id: String,
    steps: Vec<StepDocument>,
    identified: String,
    query_count: usize,
}

#[derive(Serialize, Deserialize)]
struct TranscriptDocument {
    schema_version: u64,
    kind: String,
    instance_digest: String,
    #[serde(flatten)]
    body: TranscriptBody,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatsBody {
    worst_case: usize,
    average: String,
    per_oracle: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunDocument {
    schema_version: u64,
    kind: String,
    instance_digest: String,
    stats: StatsBody,
    transcripts: Vec<TranscriptBody>,
}

fn transcript_body(t: &Transcript) -> TranscriptBody {
    TranscriptBody {
        oracle_id: t.oracle_id.clone(),
        steps: t
            .steps
            .iter()
            .map(|s| StepDocument { test: s.test.clone(), outcome: u8::from(s.outcome), size_after: s.size_after })
            .collect(),
        identified: t.identified.clone(),
        query_count: t.query_count,
    }
}

fn transcript_from(body: TranscriptBody) -> Result<Transcript, PersistenceError> {
    let mut steps = Vec::with_capacity(body.steps.len());
    for s in body.steps {
        let outcome = match s.outcome {
            0 => false,
            1 => true,
            other => return Err(invalid("steps.outcome", format!("expected 0 or 1, got {other}"))),
        };
        steps.push(Step { test: s.test, outcome, size_after: s.size_after });
    }
    Ok(Transcript { oracle_id: body.oracle_id, steps, identified: body.identified, query_count: body.query_count })
}

fn stats_body(s: &CostStats) -> StatsBody {
    StatsBody { worst_case: s.worst_case, average: rational::format(&s.average), per_oracle: s.per_oracle.clone() }
}

/// Records that serialize to a report-style document.
pub trait Document {
    fn to_document(&self, instance_digest: &str) -> Value;
}

impl Document for AnalysisReport {
    fn to_document(&self, instance_digest: &str) -> Value {
        analysis_value(self, instance_digest)
    }
}

impl Document for Transcript {
    fn to_document(&self, instance_digest: &str) -> Value {
        let doc = TranscriptDocument {
            schema_version: SCHEMA_VERSION,
            kind: "transcript".to_string(),
            instance_digest: instance_digest.to_string(),
            body: transcript_body(self),
        };
        serde_json::to_value(doc).expect("transcripts serialize")
    }
}

impl Document for CostStats {
    fn to_document(&self, instance_digest: &str) -> Value {
        run_value(self, &[], instance_digest)
    }
}

fn run_value(stats: &CostStats, transcripts: &[Transcript], instance_digest: &str) -> Value {
    let doc = RunDocument {
        schema_version: SCHEMA_VERSION,
        kind: "run".to_string(),
        instance_digest: instance_digest.to_string(),
        stats: stats_body(stats),
        transcripts: transcripts.iter().map(transcript_body).collect(),
    };
    serde_json::to_value(doc).expect("run documents serialize")
}

pub fn write_report<D: Document + ?Sized, W: Write>(
    record: &D,
    instance_digest: &str,
    sink: &mut W,
) -> Result<usize, PersistenceError> {
    write_value(&record.to_document(instance_digest), sink)
}

/// Cost statistics together with the transcripts they summarize.
pub fn write_run<W: Write>(
    stats: &CostStats,
    transcripts: &[Transcript],
    instance_digest: &str,
    sink: &mut W,
) -> Result<usize, PersistenceError> {
    write_value(&run_value(stats, transcripts, instance_digest), sink)
}

/// Returns the report and the digest of the instance it was computed on.
pub fn read_report<R: Read>(source: &mut R) -> Result<(AnalysisReport, String), PersistenceError> {
    analysis_from(decode(&read_text(source)?, Some("analysis"))?)
}

pub fn read_transcript<R: Read>(source: &mut R) -> Result<(Transcript, String), PersistenceError> {
    let doc: TranscriptDocument = decode(&read_text(source)?, Some("transcript"))?;
    Ok((transcript_from(doc.body)?, doc.instance_digest))
}

pub fn read_run<R: Read>(source: &mut R) -> Result<(CostStats, Vec<Transcript>, String), PersistenceError> {
    let doc: RunDocument = decode(&read_text(source)?, Some("run"))?;
    let stats = CostStats {
        worst_case: doc.stats.worst_case,
        average: rat("stats.average", &doc.stats.average)?,
        per_oracle: doc.stats.per_oracle,
    };
    let transcripts = doc.transcripts.into_iter().map(transcript_from).collect::<Result<_, _>>()?;
    Ok((stats, transcripts, doc.instance_digest))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub instance: String,
    pub n: usize,
    pub k_min: usize,
    pub coherence: Rational,
    pub alpha_star: Rational,
    pub beta: Rational,
    pub bounds: BoundSet,
    pub worst_case: usize,
    pub average: Rational,
}

impl SummaryRow {
    pub fn new(report: &AnalysisReport, stats: &CostStats) -> Self {
        SummaryRow {
            instance: report.instance.clone(),
            n: report.n,
            k_min: report.k_min,
            coherence: report.coherence.value.clone(),
            alpha_star: report.alpha_star.clone(),
            beta: report.beta.clone(),
            bounds: report.bounds.clone(),
            worst_case: stats.worst_case,
            average: stats.average.clone(),
        }
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "instance",
    "n",
    "k_min",
    "c",
    "alpha_star",
    "beta",
    "lambda",
    "bound_nowak_worst",
    "bound_split_worst",
    "bound_split_average",
    "worst_case",
    "average",
];

fn decimal(r: &Rational) -> String {
    round12(rational::to_f64(r)).to_string()
}

fn bound_text(b: Bound) -> String {
    match b {
        Bound::Finite(v) => round12(v).to_string(),
        Bound::Unbounded => "unbounded".to_string(),
    }
}

pub fn write_csv_summary<W: Write>(rows: &[SummaryRow], sink: &mut W) -> Result<usize, PersistenceError> {
    if rows.is_empty() {
        return Err(PersistenceError::EmptySummary);
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| PersistenceError::SinkFailure(io::Error::other(e));
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        writer
            .write_record([
                r.instance.clone(),
                r.n.to_string(),
                r.k_min.to_string(),
                decimal(&r.coherence),
                decimal(&r.alpha_star),
                decimal(&r.beta),
                decimal(&r.bounds.lambda),
                bound_text(r.bounds.nowak_worst),
                bound_text(r.bounds.split_worst),
                bound_text(r.bounds.split_average),
                r.worst_case.to_string(),
                decimal(&r.average),
            ])
            .map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| PersistenceError::SinkFailure(e.into_error()))?;
    sink.write_all(&bytes).map_err(PersistenceError::SinkFailure)?;
    Ok(bytes.len())
}
