//! Instance strategies and property checks shared by the proptest suite and
//! the acceptance runner. Each check returns `Err(reason)` on a violation.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use splitfinder::analysis::{analyze, coherence, edge_alpha, verify_certificate, AnalysisOptions, EdgeKnobs};
use splitfinder::engine::{replay, run_all_transcripts};
use splitfinder::families::{self, FamilySpec};
use splitfinder::instance::from_matrix;
use splitfinder::persistence::{self, digest};
use splitfinder::rational::{from_count, Rational};
use splitfinder::{restrict, split_probability, Instance, VersionSpace};

/// Random identifiable matrices: up to 10 hypotheses over up to 7 tests.
pub fn matrix_instance() -> impl Strategy<Value = Instance> {
    (1usize..=7).prop_flat_map(|m| {
        let cap = 1usize << m;
        proptest::collection::btree_set(0..cap, 1..=cap.min(10)).prop_map(move |rows: BTreeSet<usize>| {
            let bits: Vec<Vec<u8>> =
                rows.iter().map(|r| (0..m).map(|x| ((r >> x) & 1) as u8).collect()).collect();
            let refs: Vec<&[u8]> = bits.iter().map(Vec::as_slice).collect();
            from_matrix("random", &refs).expect("distinct rows")
        })
    })
}

/// Small members of the generated families.
pub fn family_instance() -> impl Strategy<Value = Instance> {
    prop_oneof![
        (3usize..=7, any::<bool>()).prop_map(|(m, b)| families::gen_convex_polygon(m, b).unwrap()),
        (2usize..=5).prop_flat_map(|d| (Just(d), 1..=d)).prop_map(|(d, m)| families::gen_disjunction(d, m).unwrap()),
        (1i64..=2).prop_map(|r| families::gen_box_localization(&[r], &[0]).unwrap()),
        Just(families::gen_box_localization(&[1, 1], &[0, 0]).unwrap()),
        (2usize..=4).prop_map(|m| families::gen_cx_disjunction(m).unwrap()),
    ]
}

pub fn any_instance() -> impl Strategy<Value = Instance> {
    prop_oneof![matrix_instance(), family_instance()]
}

/// The fixed catalogue used by the acceptance runner.
pub fn catalogue() -> Vec<Instance> {
    let specs: [(&str, &[(&str, &str)]); 12] = [
        ("convex_polygon", &[("m", "5"), ("balanced", "false")]),
        ("convex_polygon", &[("m", "5"), ("balanced", "true")]),
        ("convex_polygon", &[("m", "6"), ("balanced", "true")]),
        ("disjunction", &[("d", "3"), ("m", "1")]),
        ("disjunction", &[("d", "4"), ("m", "2")]),
        ("disjunction", &[("d", "6"), ("m", "2")]),
        ("monotone_cnf", &[("d", "4"), ("m", "2"), ("l", "1")]),
        ("box_localization", &[("r", "2")]),
        ("box_localization", &[("r", "1,1")]),
        ("cx_disjunction", &[("m", "3")]),
        ("cx_plus", &[("d", "2"), ("l", "2")]),
        ("linear_kcase", &[("d", "4")]),
    ];
    specs
        .iter()
        .map(|(family, params)| {
            let mut spec = FamilySpec::new(family.parse().unwrap());
            for (k, v) in params.iter() {
                spec = spec.with(k, v);
            }
            families::generate(&spec).unwrap()
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quick_options() -> AnalysisOptions {
    AnalysisOptions {
        knobs: EdgeKnobs { exhaustive_limit: 12, samples: 64, ..EdgeKnobs::default() },
        ..AnalysisOptions::default()
    }
}

pub fn check_determinism(instance: &Instance) -> Result<(), String> {
    let a = run_all_transcripts(instance).map_err(|e| e.to_string())?;
    let b = run_all_transcripts(instance).map_err(|e| e.to_string())?;
    ensure(a == b, || "transcripts differ between runs".into())?;
    let opts = quick_options();
    let bytes = |i: &Instance| {
        let report = analyze(i, &opts).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        persistence::write_report(&report, &digest(i), &mut out).map_err(|e| e.to_string())?;
        Ok::<_, String>(out)
    };
    ensure(bytes(instance)? == bytes(instance)?, || "report bytes differ between runs".into())?;
    ensure(persistence::instance_bytes(instance) == persistence::instance_bytes(instance), || {
        "instance bytes differ".into()
    })
}

pub fn check_replay(instance: &Instance) -> Result<(), String> {
    for t in run_all_transcripts(instance).map_err(|e| e.to_string())? {
        let sizes = replay(instance, &t.steps).map_err(|e| e.to_string())?;
        let recorded: Vec<usize> = t.steps.iter().map(|s| s.size_after).collect();
        ensure(sizes == recorded, || format!("{}: replayed sizes {sizes:?} vs {recorded:?}", t.oracle_id))?;
        ensure(sizes.last().copied().unwrap_or(instance.n()) == 1, || format!("{}: not identified", t.oracle_id))?;
        ensure(t.identified == t.oracle_id, || format!("{} identified as {}", t.oracle_id, t.identified))?;
        let h = instance.hypothesis_index(&t.identified).unwrap();
        for s in &t.steps {
            let x = instance.test_index(&s.test).unwrap();
            ensure(instance.outcome(h, x) == s.outcome, || format!("{}: step on {} disagrees", t.oracle_id, s.test))?;
        }
    }
    Ok(())
}

/// `restrict(V, x, 0)` and `restrict(V, x, 1)` partition `V` for every `V`
/// given by a mask over the first hypotheses.
pub fn check_restrict_partition(instance: &Instance, mask: u64) -> Result<(), String> {
    let members = (0..instance.n().min(64)).filter(|h| mask >> h & 1 == 1);
    let space = VersionSpace::from_members(instance, members);
    for x in 0..instance.m_tests() {
        let zero = restrict(&space, x, false);
        let one = restrict(&space, x, true);
        ensure(zero.len() + one.len() == space.len(), || format!("sizes do not add up on test {x}"))?;
        for h in space.iter() {
            ensure(zero.contains(h) != one.contains(h), || format!("h{h} not in exactly one side of test {x}"))?;
        }
        if !space.is_empty() {
            let s = split_probability(&space, x).map_err(|e| e.to_string())?;
            ensure(s.p_one == from_count(one.len(), space.len()), || "p_one disagrees with restrict".into())?;
        }
    }
    Ok(())
}

/// The reported coherence value is exactly what its distribution achieves,
/// and no sampled distribution does better. Verified edge values never exceed
/// the best split of the whole Δ-set.
pub fn check_certificates(instance: &Instance, weights: &[u32]) -> Result<(), String> {
    let cert = coherence(instance);
    let value = verify_certificate(instance, &cert).map_err(|e| e.to_string())?;
    ensure(value == cert.value, || format!("certificate claims {} but achieves {value}", cert.value))?;
    let m = instance.m_tests();
    let total: u32 = weights.iter().take(m).sum();
    if total > 0 {
        let mut other = cert.clone();
        other.distribution = weights
            .iter()
            .take(m)
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(x, &w)| (x, Rational::new(w.into(), total.into())))
            .collect();
        let v = verify_certificate(instance, &other).map_err(|e| e.to_string())?;
        ensure(v <= cert.value, || format!("a sampled distribution reaches {v} > {}", cert.value))?;
    }
    let knobs = EdgeKnobs { exhaustive_limit: 10, ..EdgeKnobs::default() };
    for a in 0..m.min(6) {
        for b in 0..m.min(6) {
            if a == b {
                continue;
            }
            let r = edge_alpha(instance, a, b, 0, &knobs);
            if !r.status.is_verified() || r.delta_size < 2 {
                continue;
            }
            let delta = splitfinder::delta_set(instance, a, b);
            let space = VersionSpace::from_bits(instance, delta.members);
            let (_, best) = splitfinder::best_split_test(&space).map_err(|e| e.to_string())?;
            ensure(r.edge_value <= best.split, || format!("edge {a}->{b} claims {} > {}", r.edge_value, best.split))?;
        }
    }
    Ok(())
}

pub fn check_round_trips(instance: &Instance) -> Result<(), String> {
    let text = String::from_utf8(persistence::instance_bytes(instance)).unwrap();
    let back = persistence::parse_instance(&text).map_err(|e| e.to_string())?;
    ensure(&back == instance, || "instance round trip changed the instance".into())?;
    ensure(persistence::instance_bytes(&back).as_slice() == text.as_bytes(), || "instance bytes changed".into())?;

    let d = digest(instance);
    let report = analyze(instance, &quick_options()).map_err(|e| e.to_string())?;
    let mut first = Vec::new();
    persistence::write_report(&report, &d, &mut first).map_err(|e| e.to_string())?;
    let (read, read_digest) = persistence::read_report(&mut first.as_slice()).map_err(|e| e.to_string())?;
    ensure(read_digest == d, || "report digest changed".into())?;
    let mut second = Vec::new();
    persistence::write_report(&read, &d, &mut second).map_err(|e| e.to_string())?;
    ensure(first == second, || "report bytes changed on re-write".into())?;

    let transcripts = run_all_transcripts(instance).map_err(|e| e.to_string())?;
    let t = &transcripts[0];
    let mut buf = Vec::new();
    persistence::write_report(t, &d, &mut buf).map_err(|e| e.to_string())?;
    let (t2, _) = persistence::read_transcript(&mut buf.as_slice()).map_err(|e| e.to_string())?;
    ensure(&t2 == t, || "transcript round trip changed it".into())?;

    let stats = splitfinder::engine::cost_stats(&transcripts);
    let mut buf = Vec::new();
    persistence::write_run(&stats, &transcripts, &d, &mut buf).map_err(|e| e.to_string())?;
    let (s2, ts2, _) = persistence::read_run(&mut buf.as_slice()).map_err(|e| e.to_string())?;
    ensure(s2 == stats && ts2 == transcripts, || "run round trip changed it".into())
}
