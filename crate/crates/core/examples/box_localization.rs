//! Locate a point in a 3x3 box with axis-aligned unit-box tests.

use splitfinder::analysis::{analyze, AnalysisOptions};
use splitfinder::families::gen_box_localization;
use splitfinder::rational::format;
use splitfinder::run_all_oracles;

fn main() {
    let inst = gen_box_localization(&[1, 1], &[0, 0]).unwrap();
    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    let verified = report.edges.iter().filter(|e| e.status.is_verified()).count();
    println!("n={} tests={} edges={} verified={}", inst.n(), inst.m_tests(), report.edges.len(), verified);
    println!(
        "k_min={} c={} alpha*={} beta={}",
        report.k_min,
        format(&report.coherence.value),
        format(&report.alpha_star),
        format(&report.beta)
    );
    let stats = run_all_oracles(&inst);
    println!("worst_case={} <= {}", stats.worst_case, report.bounds.split_worst);
}
