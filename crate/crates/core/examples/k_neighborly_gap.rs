//! The smallest k making the test graph connected grows like sqrt(n), so the
//! k-based bound is weak where the split-based one is not.

use splitfinder::analysis::{analyze, min_k, AnalysisOptions};
use splitfinder::families::{gen_disjunction, gen_linear_kcase, gen_monotone_cnf};
use splitfinder::Instance;

fn row(label: &str, inst: &Instance) {
    let k = min_k(inst).k_min;
    let report = analyze(inst, &AnalysisOptions::default()).unwrap();
    println!(
        "{label:<22} n={:<4} k_min={:<3} sqrt(n)={:<6.2} nowak={:<10} split={}",
        inst.n(),
        k,
        (inst.n() as f64).sqrt(),
        report.bounds.nowak_worst.to_string(),
        report.bounds.split_worst,
    );
}

fn main() {
    row("disjunction(6,2)", &gen_disjunction(6, 2).unwrap());
    row("monotone_cnf(6,2,1)", &gen_monotone_cnf(6, 2, 1).unwrap());
    row("linear_kcase(4)", &gen_linear_kcase(4).unwrap());
    row("linear_kcase(8)", &gen_linear_kcase(8).unwrap());
}
