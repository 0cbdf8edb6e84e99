//! Compare GBS with the exact optimal worst-case depth on small instances.

use splitfinder::analysis::optimal_worst_case;
use splitfinder::families::{gen_box_localization, gen_convex_polygon, gen_disjunction};
use splitfinder::run_all_oracles;

fn main() {
    let cases = [
        gen_box_localization(&[2], &[0]).unwrap(),
        gen_box_localization(&[1, 1], &[0, 0]).unwrap(),
        gen_disjunction(3, 1).unwrap(),
        gen_disjunction(4, 1).unwrap(),
        gen_convex_polygon(4, true).unwrap(),
    ];
    for inst in &cases {
        let opt = optimal_worst_case(inst, 12).unwrap();
        let gbs = run_all_oracles(inst).worst_case;
        let floor = (inst.n() as f64).log2().ceil();
        println!("{:<40} n={:<3} ceil(log2 n)={floor} optimal={opt} gbs={gbs}", inst.name(), inst.n());
    }
}
