//! Split-neighborly edge certificates and the α* search.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::instance::Instance;
use crate::rational::{from_count, half, Rational};
use crate::version_space::delta_set;

use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeStatus {
    VerifiedExhaustive,
    /// Hypothesis indices of a subset whose best split is below the candidate α.
    FalsifiedWitness(Vec<usize>),
    /// Number of subsets sampled without finding a witness.
    UnknownSampled(usize),
}

impl EdgeStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, EdgeStatus::VerifiedExhaustive)
    }

    pub fn name(&self) -> &'static str {
        match self {
            EdgeStatus::VerifiedExhaustive => "VerifiedExhaustive",
            EdgeStatus::FalsifiedWitness(_) => "FalsifiedWitness",
            EdgeStatus::UnknownSampled(_) => "UnknownSampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeReport {
    pub from_test: usize,
    pub to_test: usize,
    pub delta_size: usize,
    pub status: EdgeStatus,
    /// Exact minimum for verified edges; the smallest value seen otherwise.
    pub edge_value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeKnobs {
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
    /// Threshold a sampled subset must beat; falsification is off when absent.
    pub candidate_alpha: Option<Rational>,
}

impl Default for EdgeKnobs {
    fn default() -> Self {
        EdgeKnobs { exhaustive_limit: 18, samples: 10_000, seed: 0, candidate_alpha: None }
    }
}

/// Largest supported exhaustive limit; subsets are enumerated as `u64` masks.
pub const MAX_EXHAUSTIVE: usize = 30;

/// Best minority count over `masks` for subset `v` of size `size`. Stops early
/// once `minority/size >= stop.0/stop.1`, since callers only track a minimum.
fn best_minority(masks: &[u64], v: u64, size: u32, stop: (u32, u32)) -> u32 {
    let cap = size / 2;
    let mut best = 0;
    for &m in masks {
        let ones = (m & v).count_ones();
        let minority = ones.min(size - ones);
        if minority > best {
            best = minority;
            if best == cap || !less(best, size, stop.0, stop.1) {
                break;
            }
        }
    }
    best
}

/// Test columns projected onto `members`, deduplicated, constants dropped.
pub(crate) fn projected_masks(instance: &Instance, members: &[usize]) -> Vec<u64> {
    let full = if members.len() == 64 { u64::MAX } else { (1u64 << members.len()) - 1 };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for col in instance.columns() {
        let mut mask = 0u64;
        for (bit, &h) in members.iter().enumerate() {
            if col.contains(h) {
                mask |= 1 << bit;
            }
        }
        if mask != 0 && mask != full && seen.insert(mask) {
            out.push(mask);
        }
    }
    out
}

/// `(a/b) < (c/d)` for positive counts.
fn less(a: u32, b: u32, c: u32, d: u32) -> bool {
    u64::from(a) * u64::from(d) < u64::from(c) * u64::from(b)
}

/// Minimum over subsets `V ⊆ members`, `|V| >= 2`, of the best split constant.
/// Returns `(minority, size, witness mask)`.
pub(crate) fn min_best_split(masks: &[u64], width: usize) -> (u32, u32, u64) {
    let top: u64 = 1 << width;
    // split the subset range into chunks so workers own disjoint ranges
    let chunk = (top / 64).max(1 << 12);
    let starts: Vec<u64> = (0..top).step_by(chunk as usize).collect();
    starts
        .into_par_iter()
        .map(|start| {
            let mut best = (1u32, 2u32, 0u64);
            for v in start..(start + chunk).min(top) {
                let size = v.count_ones();
                if size < 2 {
                    continue;
                }
                let stop = if best.2 == 0 { (1, 2) } else { (best.0, best.1) };
                let minority = best_minority(masks, v, size, stop);
                if best.2 == 0 || less(minority, size, best.0, best.1) {
                    best = (minority, size, v);
                }
            }
            best
        })
        .reduce(
            || (1, 2, 0),
            |a, b| {
                if a.2 == 0 {
                    b
                } else if b.2 == 0 || !less(b.0, b.1, a.0, a.1) {
                    a
                } else {
                    b
                }
            },
        )
}

pub fn edge_alpha(instance: &Instance, from: usize, to: usize, edge_index: usize, knobs: &EdgeKnobs) -> EdgeReport {
    let delta = delta_set(instance, from, to);
    let members: Vec<usize> = delta.members.ones().collect();
    let delta_size = members.len();
    let report = |status, edge_value| EdgeReport { from_test: from, to_test: to, delta_size, status, edge_value };
    if delta_size <= 1 {
        return report(EdgeStatus::VerifiedExhaustive, half());
    }
    if delta_size <= knobs.exhaustive_limit.min(MAX_EXHAUSTIVE) {
        let masks = projected_masks(instance, &members);
        let (minority, size, _) = min_best_split(&masks, delta_size);
        return report(EdgeStatus::VerifiedExhaustive, from_count(minority as usize, size as usize));
    }
    sample_edge(instance, &members, edge_index, knobs, report)
}

fn sample_edge(
    instance: &Instance,
    members: &[usize],
    edge_index: usize,
    knobs: &EdgeKnobs,
    report: impl Fn(EdgeStatus, Rational) -> EdgeReport,
) -> EdgeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(knobs.seed ^ edge_index as u64);
    let mut lowest: Option<(usize, usize)> = None;
    let mut subset = FixedBitSet::with_capacity(instance.n());
    for _ in 0..knobs.samples {
        subset.clear();
        for &h in members {
            if rng.random_bool(0.5) {
                subset.insert(h);
            }
        }
        let size = subset.count_ones(..);
        if size < 2 {
            continue;
        }
        let cap = size / 2;
        let mut best = 0;
        for col in instance.columns() {
            let ones = col.intersection_count(&subset);
            best = best.max(ones.min(size - ones));
            // only a new minimum matters for the report
            if best == cap || lowest.is_some_and(|(a, b)| best * b >= a * size) {
                break;
            }
        }
        if lowest.is_none_or(|(a, b)| best * b < a * size) {
            lowest = Some((best, size));
        }
        let value = from_count(best, size);
        if knobs.candidate_alpha.as_ref().is_some_and(|alpha| value < *alpha) {
            return report(EdgeStatus::FalsifiedWitness(subset.ones().collect()), value);
        }
    }
    let value = lowest.map_or_else(half, |(a, b)| from_count(a, b));
    report(EdgeStatus::UnknownSampled(knobs.samples), value)
}

/// Computes every edge report in parallel; output order follows `edges`.
pub fn edge_reports(instance: &Instance, edges: &[(usize, usize)], knobs: &EdgeKnobs) -> Vec<EdgeReport> {
    edges
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b))| edge_alpha(instance, a, b, i, knobs))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMode {
    /// Whatever the instance's `edges` param names, falling back to `All`.
    Preset,
    /// Consecutive tests in index order, both directions, wrapping around.
    Cycle,
    /// Tests whose coordinates differ by 1 in L1 distance, both directions.
    L1,
    /// Every ordered pair whose Δ-set fits the exhaustive limit (at least 1).
    All,
}

impl EdgeMode {
    pub fn name(self) -> &'static str {
        match self {
            EdgeMode::Preset => "preset",
            EdgeMode::Cycle => "cycle",
            EdgeMode::L1 => "l1",
            EdgeMode::All => "all",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "preset" => Some(EdgeMode::Preset),
            "cycle" => Some(EdgeMode::Cycle),
            "l1" => Some(EdgeMode::L1),
            "all" => Some(EdgeMode::All),
            _ => None,
        }
    }

    /// Resolves `Preset` against the instance.
    pub fn resolve(self, instance: &Instance) -> EdgeMode {
        if self != EdgeMode::Preset {
            return self;
        }
        instance
            .param_str("edges")
            .and_then(EdgeMode::parse)
            .filter(|m| *m != EdgeMode::Preset)
            .unwrap_or(EdgeMode::All)
    }
}

pub fn candidate_edges(
    instance: &Instance,
    mode: EdgeMode,
    exhaustive_limit: usize,
) -> Result<Vec<(usize, usize)>, AnalysisError> {
    let m = instance.m_tests();
    let mut edges = Vec::new();
    match mode.resolve(instance) {
        EdgeMode::Cycle => {
            if m >= 2 {
                for x in 0..m {
                    let next = (x + 1) % m;
                    edges.push((x, next));
                    edges.push((next, x));
                }
                edges.sort_unstable();
                edges.dedup();
            }
        }
        EdgeMode::L1 => {
            let mut coords = Vec::with_capacity(m);
            for x in 0..m {
                coords.push(
                    instance
                        .test_coords(x)
                        .ok_or_else(|| AnalysisError::NoCoordinates(instance.tests()[x].id.clone()))?,
                );
            }
            let index: HashMap<&[i64], usize> = coords.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
            for (x, c) in coords.iter().enumerate() {
                let mut probe = c.clone();
                for i in 0..probe.len() {
                    for step in [-1, 1] {
                        probe[i] += step;
                        if let Some(&y) = index.get(probe.as_slice()) {
                            edges.push((x, y));
                        }
                        probe[i] -= step;
                    }
                }
            }
            edges.sort_unstable();
        }
        EdgeMode::All | EdgeMode::Preset => {
            let limit = exhaustive_limit.max(1);
            let found: Vec<Vec<(usize, usize)>> = (0..m)
                .into_par_iter()
                .map(|a| {
                    (0..m)
                        .filter(|&b| b != a && delta_set(instance, a, b).len() <= limit)
                        .map(|b| (a, b))
                        .collect()
                })
                .collect();
            edges = found.into_iter().flatten().collect();
        }
    }
    Ok(edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaStar {
    pub value: Rational,
    pub diagnostic: Option<String>,
}

fn strongly_connected(m: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut g = DiGraph::<(), ()>::with_capacity(m, 0);
    let nodes: Vec<_> = (0..m).map(|_| g.add_node(())).collect();
    for (a, b) in edges {
        g.add_edge(nodes[a], nodes[b], ());
    }
    kosaraju_scc(&g).len() <= 1
}

/// Largest verified edge value whose threshold digraph is strongly connected.
pub fn alpha_star(instance: &Instance, reports: &[EdgeReport]) -> Result<AlphaStar, AnalysisError> {
    let m = instance.m_tests();
    if m <= 1 {
        return Ok(AlphaStar { value: half(), diagnostic: None });
    }
    let mut values: Vec<&Rational> = reports
        .iter()
        .filter(|r| r.status.is_verified())
        .map(|r| &r.edge_value)
        .collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    // connectivity only drops as the threshold rises, so bisect
    let connects = |alpha: &Rational| {
        strongly_connected(
            m,
            reports
                .iter()
                .filter(|r| r.status.is_verified() && r.edge_value >= *alpha)
                .map(|r| (r.from_test, r.to_test)),
        )
    };
    let first_ok = values.partition_point(|v| !connects(v));
    if let Some(v) = values.get(first_ok) {
        return Ok(AlphaStar { value: (*v).clone(), diagnostic: None });
    }
    let unknown = reports.iter().filter(|r| !r.status.is_verified()).count();
    if unknown > 0 && strongly_connected(m, reports.iter().map(|r| (r.from_test, r.to_test))) {
        return Err(AnalysisError::UnverifiedEdgesDominate { unknown });
    }
    Ok(AlphaStar {
        value: Rational::from_integer(0.into()),
        diagnostic: Some(format!(
            "candidate edge digraph over {m} tests is not strongly connected"
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_box_localization, gen_convex_polygon, gen_cx_disjunction, gen_disjunction};
    use crate::instance::from_matrix;
    use crate::rational::ratio;
    use crate::version_space::{best_split_test, VersionSpace};

    /// Independent oracle: enumerate subsets as bitsets, run the engine's split search.
    fn brute_edge_value(instance: &Instance, members: &[usize]) -> Rational {
        let mut best: Option<Rational> = None;
        for v in 0u64..(1 << members.len()) {
            if v.count_ones() < 2 {
                continue;
            }
            let chosen = members.iter().enumerate().filter(|(i, _)| v >> i & 1 == 1).map(|(_, &h)| h);
            let space = VersionSpace::from_members(instance, chosen);
            let (_, split) = best_split_test(&space).unwrap();
            if best.as_ref().is_none_or(|b| split.split < *b) {
                best = Some(split.split);
            }
        }
        best.unwrap()
    }

    #[test]
    fn small_delta_is_half() {
        let inst = gen_disjunction(3, 1).unwrap();
        let r = edge_alpha(&inst, 0, 1, 0, &EdgeKnobs::default());
        assert_eq!(r.delta_size, 1);
        assert_eq!(r.edge_value, half());
        assert!(r.status.is_verified());
    }

    #[test]
    fn matches_brute_force_on_polygon_edges() {
        let inst = gen_convex_polygon(7, true).unwrap();
        let edges = candidate_edges(&inst, EdgeMode::Preset, 18).unwrap();
        assert_eq!(edges.len(), 14);
        for (i, r) in edge_reports(&inst, &edges, &EdgeKnobs::default()).iter().enumerate() {
            let members: Vec<usize> = delta_set(&inst, edges[i].0, edges[i].1).members.ones().collect();
            assert_eq!(r.edge_value, brute_edge_value(&inst, &members));
            assert!(r.edge_value >= ratio(1, 3), "edge {:?}", edges[i]);
        }
    }

    #[test]
    fn full_hypothesis_set_of_the_disjunction_counterexample() {
        let inst = gen_cx_disjunction(3).unwrap();
        let all: Vec<usize> = (0..inst.n()).collect();
        let masks = projected_masks(&inst, &all);
        let full = (1u64 << all.len()) - 1;
        let best = best_minority(&masks, full, all.len() as u32, (1, 2));
        assert_eq!(from_count(best as usize, all.len()), ratio(1, 4));
    }

    #[test]
    fn sampling_finds_a_witness_when_limit_is_zero() {
        let inst = gen_cx_disjunction(3).unwrap();
        // an edge whose Δ-set is all four hypotheses: 1111 -> 0000 reversed
        let zeros = inst.test_index("0000").unwrap();
        let ones = inst.test_index("1111").unwrap();
        let knobs = EdgeKnobs { exhaustive_limit: 0, samples: 1000, seed: 7, candidate_alpha: Some(ratio(1, 3)) };
        let r = edge_alpha(&inst, zeros, ones, 0, &knobs);
        assert_eq!(r.delta_size, 4);
        match &r.status {
            EdgeStatus::FalsifiedWitness(v) => assert!(v.len() >= 2),
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(r.edge_value < ratio(1, 3));

        let unknown = EdgeKnobs { candidate_alpha: None, ..knobs };
        let r = edge_alpha(&inst, zeros, ones, 0, &unknown);
        assert_eq!(r.status, EdgeStatus::UnknownSampled(1000));
    }

    #[test]
    fn sampling_is_seeded() {
        let inst = gen_box_localization(&[2, 2], &[0, 0]).unwrap();
        let knobs = EdgeKnobs { exhaustive_limit: 0, samples: 50, seed: 3, candidate_alpha: None };
        let edges = candidate_edges(&inst, EdgeMode::Preset, 0).unwrap();
        let a = edge_reports(&inst, &edges[..20], &knobs);
        let b = edge_reports(&inst, &edges[..20], &knobs);
        assert_eq!(a, b);
    }

    #[test]
    fn single_value_alpha() {
        let inst = gen_convex_polygon(5, true).unwrap();
        let mk = |a, b| EdgeReport {
            from_test: a,
            to_test: b,
            delta_size: 3,
            status: EdgeStatus::VerifiedExhaustive,
            edge_value: ratio(1, 3),
        };
        let reports: Vec<_> = (0..5).map(|x| mk(x, (x + 1) % 5)).collect();
        assert_eq!(alpha_star(&inst, &reports).unwrap().value, ratio(1, 3));
    }

    #[test]
    fn disconnected_clusters_give_zero() {
        let inst = from_matrix("two", &[&[1, 1, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 1]]).unwrap();
        let mk = |a, b| EdgeReport {
            from_test: a,
            to_test: b,
            delta_size: 1,
            status: EdgeStatus::VerifiedExhaustive,
            edge_value: half(),
        };
        let reports = vec![mk(0, 1), mk(1, 0), mk(2, 3), mk(3, 2)];
        let a = alpha_star(&inst, &reports).unwrap();
        assert_eq!(a.value, Rational::from_integer(0.into()));
        assert!(a.diagnostic.is_some());
    }

    #[test]
    fn unknown_edges_are_reported() {
        let inst = gen_box_localization(&[1, 1], &[0, 0]).unwrap();
        let knobs = EdgeKnobs { exhaustive_limit: 0, samples: 20, seed: 0, candidate_alpha: None };
        let edges = candidate_edges(&inst, EdgeMode::Preset, 0).unwrap();
        let reports = edge_reports(&inst, &edges, &knobs);
        assert!(matches!(
            alpha_star(&inst, &reports),
            Err(AnalysisError::UnverifiedEdgesDominate { .. })
        ));
    }

    #[test]
    fn box_alpha_is_at_least_a_quarter() {
        let inst = gen_box_localization(&[1, 1], &[0, 0]).unwrap();
        let edges = candidate_edges(&inst, EdgeMode::Preset, 18).unwrap();
        let reports = edge_reports(&inst, &edges, &EdgeKnobs::default());
        assert!(reports.iter().all(|r| r.status.is_verified() && r.edge_value >= ratio(1, 4)));
        assert!(alpha_star(&inst, &reports).unwrap().value >= ratio(1, 4));
    }

    #[test]
    fn l1_needs_coordinates() {
        let inst = gen_convex_polygon(5, true).unwrap();
        assert!(matches!(
            candidate_edges(&inst, EdgeMode::L1, 18),
            Err(AnalysisError::NoCoordinates(_))
        ));
    }
}
