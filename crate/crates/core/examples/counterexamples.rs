//! Instances where no single test splits the whole space well. The best
//! split over the full hypothesis set is printed with the test achieving it.

use splitfinder::families::{gen_cx_disjunction, gen_cx_plus};
use splitfinder::rational::format;
use splitfinder::{best_split_test, Instance, VersionSpace};

fn show(inst: &Instance) {
    let (x, split) = best_split_test(&VersionSpace::full(inst)).unwrap();
    println!("{:<28} n={:<3} best test {} split {}", inst.name(), inst.n(), inst.tests()[x].id, format(&split.split));
}

fn main() {
    for m in 2..=5 {
        show(&gen_cx_disjunction(m).unwrap());
    }
    show(&gen_cx_plus(2, 2).unwrap());
    show(&gen_cx_plus(3, 2).unwrap());
}
