//! Brute-force checks of the bound inequalities and their hypotheses.

use num_traits::Zero;

use crate::engine::CostStats;
use crate::instance::Instance;
use crate::rational::{from_count, to_f64, Rational};
use crate::version_space::disagreement;

use super::bounds::Bound;
use super::optimal::optimal_worst_case;
use super::split::{edge_alpha, projected_masks, EdgeKnobs, EdgeReport};
use super::{min_k, AnalysisError, AnalysisReport};

pub const DEFAULT_LEMMA_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub observed: f64,
    pub bound: Bound,
    pub passed: bool,
    /// `bound - observed`; absent for unbounded.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsVerdict {
    pub checks: Vec<BoundCheck>,
    /// Set when some candidate edge was not verified exhaustively.
    pub conditional: bool,
}

impl BoundsVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, observed: f64, bound: Bound) -> BoundCheck {
    BoundCheck {
        name,
        observed,
        bound,
        passed: bound.admits(observed),
        margin: bound.value().map(|b| b - observed),
    }
}

pub fn verify_bounds(
    instance: &Instance,
    report: &AnalysisReport,
    stats: &CostStats,
    optimal_cap: usize,
) -> BoundsVerdict {
    let worst = stats.worst_case as f64;
    let mut checks = vec![
        check("worst_case <= split_worst", worst, report.bounds.split_worst),
        check("worst_case <= nowak_worst", worst, report.bounds.nowak_worst),
        check("average <= split_average", to_f64(&stats.average), report.bounds.split_average),
    ];
    if let Ok(opt) = optimal_worst_case(instance, optimal_cap) {
        checks.push(check("optimal <= worst_case", opt as f64, Bound::Finite(worst)));
    }
    BoundsVerdict { checks, conditional: report.conditional }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Violation {
    pub subset: Vec<usize>,
    pub best_split: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Verdict {
    pub beta: Rational,
    pub subsets_checked: u64,
    /// First violating subset in increasing bitmask order.
    pub violation: Option<Lemma1Violation>,
}

impl Lemma1Verdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Every `V ⊆ H` with `|V| >= 2` has some test with split constant `>= beta`.
pub fn lemma1_audit(instance: &Instance, beta: &Rational, n_cap: usize) -> Result<Lemma1Verdict, AnalysisError> {
    let n = instance.n();
    if n > n_cap || n > 40 {
        return Err(AnalysisError::InstanceTooLarge { n, cap: n_cap.min(40) });
    }
    let mut verdict = Lemma1Verdict { beta: beta.clone(), subsets_checked: 0, violation: None };
    if beta.is_zero() {
        return Ok(verdict);
    }
    let all: Vec<usize> = (0..n).collect();
    let masks = projected_masks(instance, &all);
    for v in 0u64..(1 << n) {
        let size = v.count_ones();
        if size < 2 {
            continue;
        }
        verdict.subsets_checked += 1;
        let best = masks
            .iter()
            .map(|&m| {
                let ones = (m & v).count_ones();
                ones.min(size - ones)
            })
            .max()
            .unwrap_or(0);
        let split = from_count(best as usize, size as usize);
        if split < *beta {
            verdict.violation = Some(Lemma1Violation {
                subset: (0..n).filter(|&h| v >> h & 1 == 1).collect(),
                best_split: split,
            });
            break;
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionVerdict {
    pub k_min: usize,
    /// Directed edges whose Δ-set was enumerated.
    pub edges_checked: usize,
    /// Directed edges skipped because the Δ-set exceeded the limit.
    pub edges_skipped: usize,
    pub failures: Vec<EdgeReport>,
}

impl PropositionVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// On every k_min-neighborly pair, both directed Δ-sets split at `1/k_min`.
pub fn proposition_check(instance: &Instance, exhaustive_limit: usize) -> PropositionVerdict {
    let k = min_k(instance).k_min;
    let knobs = EdgeKnobs { exhaustive_limit, ..EdgeKnobs::default() };
    let mut verdict = PropositionVerdict { k_min: k, edges_checked: 0, edges_skipped: 0, failures: Vec::new() };
    let m = instance.m_tests();
    for a in 0..m {
        for b in (a + 1)..m {
            if disagreement(instance, a, b) > k {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                let report = edge_alpha(instance, x, y, 0, &knobs);
                if !report.status.is_verified() {
                    verdict.edges_skipped += 1;
                    continue;
                }
                verdict.edges_checked += 1;
                if report.delta_size > 1 && report.edge_value < from_count(1, k) {
                    verdict.failures.push(report);
                }
            }
        }
    }
    verdict
}
