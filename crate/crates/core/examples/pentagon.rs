//! Five points in convex position, every convex subset as a hypothesis.
//! GBS needs at most five queries against any of the 20.

use splitfinder::analysis::{analyze, AnalysisOptions};
use splitfinder::engine::run_for_hypothesis;
use splitfinder::families::gen_convex_polygon;
use splitfinder::rational::format;
use splitfinder::run_all_oracles;

fn main() {
    let inst = gen_convex_polygon(5, false).expect("valid parameters");
    println!("{}: n={} tests={}", inst.name(), inst.n(), inst.m_tests());

    let t = run_for_hypothesis(&inst, 7).unwrap();
    for s in &t.steps {
        println!("  ask {:>3} -> {}  |V|={}", s.test, u8::from(s.outcome), s.size_after);
    }
    println!("  identified {}", t.identified);

    let stats = run_all_oracles(&inst);
    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    println!(
        "worst_case={} average={} k_min={} c={} alpha*={} nowak_bound={}",
        stats.worst_case,
        format(&stats.average),
        report.k_min,
        format(&report.coherence.value),
        format(&report.alpha_star),
        report.bounds.nowak_worst,
    );
}
