//! Instance and report documents: canonical bytes, digests, and byte-stable re-writes.

use splitfinder::analysis::{analyze, AnalysisOptions};
use splitfinder::families::gen_disjunction;
use splitfinder::persistence::{digest, instance_bytes, parse_instance, read_report, write_report};

fn main() {
    let inst = gen_disjunction(3, 1).unwrap();
    let bytes = instance_bytes(&inst);
    println!("instance: {} bytes, digest {}", bytes.len(), digest(&inst));
    let back = parse_instance(std::str::from_utf8(&bytes).unwrap()).unwrap();
    assert_eq!(back, inst);

    let report = analyze(&inst, &AnalysisOptions::default()).unwrap();
    let mut first = Vec::new();
    write_report(&report, &digest(&inst), &mut first).unwrap();
    let (read, d) = read_report(&mut first.as_slice()).unwrap();
    let mut second = Vec::new();
    write_report(&read, &d, &mut second).unwrap();
    println!("report: {} bytes, stable on re-write: {}", first.len(), first == second);
    let head: String = String::from_utf8_lossy(&first).lines().take(12).collect::<Vec<_>>().join("\n");
    println!("{head}\n...");
}
