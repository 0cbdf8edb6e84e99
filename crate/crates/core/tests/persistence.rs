use std::fs::{self, File};

use splitfinder::analysis::{analyze, AnalysisOptions};
use splitfinder::engine::{cost_stats, run_all_transcripts};
use splitfinder::families::{gen_box_localization, gen_convex_polygon};
use splitfinder::persistence::{self, digest, PersistenceError, SummaryRow};
use tempfile::TempDir;

#[test]
fn files_round_trip_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let inst = gen_box_localization(&[1, 1], &[0, 0]).unwrap();
    let inst_path = dir.path().join(format!("box{}", persistence::INSTANCE_EXT));
    persistence::write_instance(&inst, &mut File::create(&inst_path).unwrap()).unwrap();
    let back = persistence::read_instance(&mut File::open(&inst_path).unwrap()).unwrap();
    assert_eq!(back, inst);

    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    let report_path = dir.path().join(format!("box{}", persistence::REPORT_EXT));
    persistence::write_report(&report, &digest(&inst), &mut File::create(&report_path).unwrap()).unwrap();
    let first = fs::read(&report_path).unwrap();
    let (read, d) = persistence::read_report(&mut first.as_slice()).unwrap();
    assert_eq!(d, digest(&back));
    // floats are stored to 12 significant digits; everything exact survives unchanged
    assert_eq!(read.coherence, report.coherence);
    assert_eq!(read.edges, report.edges);
    assert_eq!((read.alpha_star.clone(), read.beta.clone()), (report.alpha_star.clone(), report.beta.clone()));
    let (a, b) = (read.bounds.split_worst.value().unwrap(), report.bounds.split_worst.value().unwrap());
    assert!((a - b).abs() < 1e-9);
    let mut again = Vec::new();
    persistence::write_report(&read, &d, &mut again).unwrap();
    assert_eq!(again, first);
}

#[test]
fn digest_tracks_content_only() {
    let a = gen_convex_polygon(5, false).unwrap();
    let b = gen_convex_polygon(5, false).unwrap();
    let c = gen_convex_polygon(5, true).unwrap();
    assert_eq!(digest(&a), digest(&b));
    assert_ne!(digest(&a), digest(&c));
    assert_eq!(digest(&a).len(), 64);
}

#[test]
fn report_is_not_an_instance() {
    let inst = gen_convex_polygon(5, false).unwrap();
    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    let mut buf = Vec::new();
    persistence::write_report(&report, &digest(&inst), &mut buf).unwrap();
    let err = persistence::read_instance(&mut buf.as_slice()).unwrap_err();
    assert!(matches!(err, PersistenceError::WrongKind { .. } | PersistenceError::ParseError { .. }), "{err:?}");
}

#[test]
fn csv_summary_matches_reports() {
    let inst = gen_convex_polygon(5, false).unwrap();
    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    let stats = cost_stats(&run_all_transcripts(&inst).unwrap());
    let mut buf = Vec::new();
    persistence::write_csv_summary(&[SummaryRow::new(&report, &stats)], &mut buf).unwrap();
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, persistence::CSV_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "20");
    assert_eq!(&rows[0][3], "0.2");
    assert_eq!(&rows[0][10], "5");
}
