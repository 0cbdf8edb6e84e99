//! Analyze and run a family over a parameter grid, then print the CSV summary.

use splitfinder::analysis::{analyze, AnalysisOptions};
use splitfinder::families::gen_convex_polygon;
use splitfinder::persistence::{write_csv_summary, SummaryRow};
use splitfinder::run_all_oracles;

fn main() {
    let rows: Vec<SummaryRow> = (4..=8)
        .map(|m| {
            let inst = gen_convex_polygon(m, true).unwrap();
            let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
            SummaryRow::new(&report, &run_all_oracles(&inst))
        })
        .collect();
    let mut out = std::io::stdout().lock();
    write_csv_summary(&rows, &mut out).unwrap();
}
