//! Structural quantities of an instance and the query-cost bounds they imply.

mod audit;
mod bounds;
mod coherence;
mod neighborly;
mod optimal;
mod simplex;
mod split;

pub use audit::{
    lemma1_audit, proposition_check, verify_bounds, BoundCheck, BoundsVerdict, Lemma1Verdict, Lemma1Violation,
    PropositionVerdict, DEFAULT_LEMMA_CAP,
};
pub use bounds::{beta_of, binary_entropy, compute_bounds, lambda_of, Bound, BoundSet};
pub use coherence::{coherence, verify_certificate, CoherenceCertificate, CoherenceError};
pub use neighborly::{is_k_connected, min_k, MinK};
pub use optimal::{optimal_worst_case, DEFAULT_OPTIMAL_CAP};
pub use split::{
    alpha_star, candidate_edges, edge_alpha, edge_reports, AlphaStar, EdgeKnobs, EdgeMode, EdgeReport, EdgeStatus,
    MAX_EXHAUSTIVE,
};

use crate::instance::Instance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("test {0} has no coordinates for L1 adjacency")]
    NoCoordinates(String),
    #[error("strong connectivity needs {unknown} edge(s) that were only sampled")]
    UnverifiedEdgesDominate { unknown: usize },
    #[error("n={n} exceeds the enumeration cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("exhaustive limit {0} exceeds the supported maximum {MAX_EXHAUSTIVE}")]
    LimitTooLarge(usize),
    #[error("split_alpha param {0:?} is not a rational")]
    BadCandidateAlpha(String),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::NoCoordinates(_) => "NoCoordinates",
            AnalysisError::UnverifiedEdgesDominate { .. } => "UnverifiedEdgesDominate",
            AnalysisError::InstanceTooLarge { .. } => "InstanceTooLarge",
            AnalysisError::LimitTooLarge(_) => "LimitTooLarge",
            AnalysisError::BadCandidateAlpha(_) => "BadCandidateAlpha",
            AnalysisError::Coherence(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub edge_mode: EdgeMode,
    /// `candidate_alpha: None` falls back to the instance's `split_alpha` param.
    pub knobs: EdgeKnobs,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { edge_mode: EdgeMode::Preset, knobs: EdgeKnobs::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub instance: String,
    pub n: usize,
    pub m_tests: usize,
    pub k_min: usize,
    pub coherence: CoherenceCertificate,
    pub edge_mode: EdgeMode,
    pub edges: Vec<EdgeReport>,
    pub alpha_star: Rational,
    pub diagnostic: Option<String>,
    pub beta: Rational,
    pub lambda: Rational,
    pub bounds: BoundSet,
    pub knobs: EdgeKnobs,
    /// Some candidate edge is not `VerifiedExhaustive`.
    pub conditional: bool,
}

pub fn analyze(instance: &Instance, options: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    let mut knobs = options.knobs.clone();
    if knobs.exhaustive_limit > MAX_EXHAUSTIVE {
        return Err(AnalysisError::LimitTooLarge(knobs.exhaustive_limit));
    }
    if knobs.candidate_alpha.is_none() {
        if let Some(text) = instance.param_str("split_alpha") {
            knobs.candidate_alpha =
                Some(rational::parse(text).map_err(|_| AnalysisError::BadCandidateAlpha(text.to_string()))?);
        }
    }
    let k_min = min_k(instance).k_min;
    let cert = coherence(instance);
    let edge_mode = options.edge_mode.resolve(instance);
    let pairs = candidate_edges(instance, edge_mode, knobs.exhaustive_limit)?;
    let edges = edge_reports(instance, &pairs, &knobs);
    let (alpha_star, diagnostic) = match split::alpha_star(instance, &edges) {
        Ok(a) => (a.value, a.diagnostic),
        Err(e @ AnalysisError::UnverifiedEdgesDominate { .. }) => (Rational::from_integer(0.into()), Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let beta = beta_of(&cert.value, &alpha_star);
    let bounds = compute_bounds(instance.n(), &cert.value, k_min, &beta);
    Ok(AnalysisReport {
        instance: instance.name().to_string(),
        n: instance.n(),
        m_tests: instance.m_tests(),
        k_min,
        conditional: edges.iter().any(|e| !e.status.is_verified()),
        lambda: bounds.lambda.clone(),
        coherence: cert,
        edge_mode,
        edges,
        alpha_star,
        diagnostic,
        beta,
        bounds,
        knobs,
    })
}
