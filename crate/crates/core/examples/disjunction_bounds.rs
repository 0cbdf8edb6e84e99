//! Disjunctions of at most m of d variables: coherence 1/2, every L1 edge
//! splits at 1/(m+1), and the two cost bounds hold against exhaustive runs.

use splitfinder::analysis::{analyze, verify_bounds, AnalysisOptions, EdgeMode};
use splitfinder::families::gen_disjunction;
use splitfinder::rational::format;
use splitfinder::run_all_oracles;

fn main() {
    let (d, m) = (6, 2);
    let inst = gen_disjunction(d, m).unwrap();
    let opts = AnalysisOptions { edge_mode: EdgeMode::L1, ..AnalysisOptions::default() };
    let report = analyze(&inst, &opts).unwrap();
    let weakest = report.edges.iter().map(|e| e.edge_value.clone()).min().unwrap();
    println!("n={} c={} edges={} weakest edge={}", inst.n(), format(&report.coherence.value), report.edges.len(), format(&weakest));
    println!("alpha*={} beta={}", format(&report.alpha_star), format(&report.beta));

    let stats = run_all_oracles(&inst);
    for check in verify_bounds(&inst, &report, &stats, 12).checks {
        println!("{} {}: {} vs {}", if check.passed { "ok  " } else { "FAIL" }, check.name, check.observed, check.bound);
    }
}
