//! Coherence as a game value: the solver returns a distribution over tests,
//! and the value is recomputed from it exactly.

use splitfinder::analysis::{coherence, verify_certificate};
use splitfinder::families::{gen_convex_polygon, gen_discrete_linear};
use splitfinder::instance::from_matrix;
use splitfinder::rational::{format, ratio};
use splitfinder::Instance;

fn show(inst: &Instance) {
    let cert = coherence(inst);
    let checked = verify_certificate(inst, &cert).unwrap();
    assert_eq!(checked, cert.value);
    let support: Vec<String> =
        cert.distribution.iter().map(|(x, w)| format!("{}:{}", inst.tests()[*x].id, format(w))).collect();
    println!("{:<36} c={:<6} support={}", inst.name(), format(&cert.value), support.len());
    if support.len() <= 6 {
        println!("    {}", support.join(" "));
    }
}

fn main() {
    show(&from_matrix("pennies", &[&[1, 0], &[0, 1]]).unwrap());
    show(&gen_convex_polygon(5, true).unwrap());
    show(&gen_convex_polygon(5, false).unwrap());
    show(&gen_discrete_linear(4, &ratio(5, 1)).unwrap());
}
