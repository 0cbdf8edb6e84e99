//! Monotone disjunctions and CNF formulas over `d` variables.

use serde_json::json;

use super::{bad, meta, push_bit_tests, Builder, Family, FamilyError};
use crate::instance::Instance;
use crate::rational::ratio;

fn disjunction_id(vars: &[usize]) -> String {
    vars.iter()
        .map(|v| format!("x{v}"))
        .collect::<Vec<_>>()
        .join("|")
}

/// Subsets of `1..=d` of each size in `sizes`, ordered by size then lexicographically.
fn subsets(d: usize, sizes: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=d {
            cur.push(v);
            rec(v + 1, d, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in sizes {
        rec(1, d, size, &mut Vec::new(), &mut out);
    }
    out
}

/// Disjunctions with between 1 and `m` variables.
pub fn gen_disjunction(d: usize, m: usize) -> Result<Instance, FamilyError> {
    if m < 1 || m > d {
        return Err(bad(format!("disjunction needs 1 <= m <= d, got d={d}, m={m}")));
    }
    if d > 20 {
        return Err(bad(format!("d={d} would materialize 2^{d} tests")));
    }
    let mut b = Builder::new(Family::Disjunction);
    b.param("d", json!(d))
        .param("m", json!(m))
        .edges("l1")
        .split_alpha(&ratio(1, m as i64 + 1));
    let tests = push_bit_tests(&mut b, d);
    let hyps = subsets(d, 1..=m);
    for vars in &hyps {
        b.hypothesis(disjunction_id(vars), meta(&[("vars", json!(vars))]));
    }
    b.build(|h, x| hyps[h].iter().any(|&v| tests[x][v - 1]))
}

/// Conjunctions of `l` pairwise-disjoint disjunctions of exactly `m` variables.
pub fn gen_monotone_cnf(d: usize, m: usize, l: usize) -> Result<Instance, FamilyError> {
    if m < 1 || l < 1 || l * m > d {
        return Err(bad(format!(
            "monotone_cnf needs m, l >= 1 and l*m <= d, got d={d}, m={m}, l={l}"
        )));
    }
    if d > 20 {
        return Err(bad(format!("d={d} would materialize 2^{d} tests")));
    }
    let mut b = Builder::new(Family::MonotoneCnf);
    b.param("d", json!(d))
        .param("m", json!(m))
        .param("l", json!(l))
        .edges("l1")
        .split_alpha(&ratio(1, (m + 1 + 3 * (l - 1)) as i64));
    let tests = push_bit_tests(&mut b, d);

    // clauses listed by increasing smallest variable, so each collection appears once
    let clauses = subsets(d, std::iter::once(m));
    let mut formulas: Vec<Vec<Vec<usize>>> = Vec::new();
    fn rec(
        clauses: &[Vec<usize>],
        l: usize,
        after: usize,
        used: u64,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for c in clauses.iter().filter(|c| c[0] > after) {
            let mask = c.iter().fold(0u64, |acc, &v| acc | 1 << v);
            if used & mask == 0 {
                cur.push(c.clone());
                rec(clauses, l, c[0], used | mask, cur, out);
                cur.pop();
            }
        }
    }
    rec(&clauses, l, 0, 0, &mut Vec::new(), &mut formulas);
    formulas.sort();

    for f in &formulas {
        let id = f
            .iter()
            .map(|c| format!("({})", disjunction_id(c)))
            .collect::<Vec<_>>()
            .join("&");
        b.hypothesis(id, meta(&[("clauses", json!(f))]));
    }
    b.build(|h, x| formulas[h].iter().all(|c| c.iter().any(|&v| tests[x][v - 1])))
}

/// `m + 1` variables; each hypothesis is the disjunction of all but one of them.
pub fn gen_cx_disjunction(m: usize) -> Result<Instance, FamilyError> {
    if m < 2 {
        return Err(bad(format!("cx_disjunction needs m >= 2, got {m}")));
    }
    if m > 19 {
        return Err(bad(format!("m={m} would materialize 2^{} tests", m + 1)));
    }
    let d = m + 1;
    let mut b = Builder::new(Family::CxDisjunction);
    b.param("m", json!(m)).param("d", json!(d)).edges("l1");
    let tests = push_bit_tests(&mut b, d);
    let mut hyps: Vec<Vec<usize>> = (1..=d)
        .map(|omit| (1..=d).filter(|&v| v != omit).collect())
        .collect();
    hyps.sort();
    for vars in &hyps {
        b.hypothesis(disjunction_id(vars), meta(&[("vars", json!(vars))]));
    }
    b.build(|h, x| hyps[h].iter().any(|&v| tests[x][v - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::binomial;

    #[test]
    fn disjunction_counts() {
        for (d, m) in [(3, 1), (4, 2), (6, 2), (5, 3)] {
            let expected: u128 = (1..=m).map(|i| binomial(d, i)).sum();
            assert_eq!(gen_disjunction(d, m).unwrap().n() as u128, expected);
        }
    }

    #[test]
    fn disjunction_extreme_tests() {
        let inst = gen_disjunction(3, 1).unwrap();
        assert_eq!((inst.n(), inst.m_tests()), (3, 8));
        assert!(inst.column(0).is_clear());
        assert_eq!(inst.column(7).count_ones(..), 3);
        assert_eq!(inst.tests()[4].id, "100");
        assert_eq!(inst.hypotheses()[0].id, "x1");
    }

    #[test]
    fn single_variable_disjunction() {
        let inst = gen_disjunction(1, 1).unwrap();
        assert_eq!(inst.n(), 1);
    }

    #[test]
    fn bad_disjunction_params() {
        assert_eq!(gen_disjunction(2, 3).unwrap_err().code(), "BadParams");
        assert_eq!(gen_disjunction(2, 0).unwrap_err().code(), "BadParams");
    }

    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }

    #[test]
    fn cnf_count_is_scaled_multinomial() {
        for (d, m, l) in [(4, 1, 2), (6, 2, 1), (6, 2, 2), (7, 2, 3), (6, 3, 2)] {
            let multinomial =
                factorial(d) / (factorial(m).pow(l as u32) * factorial(d - l * m));
            let expected = multinomial / factorial(l);
            assert_eq!(gen_monotone_cnf(d, m, l).unwrap().n() as u128, expected, "{d},{m},{l}");
        }
        assert_eq!(gen_monotone_cnf(4, 1, 2).unwrap().n(), 6);
    }

    #[test]
    fn cnf_with_one_clause_is_exact_size_disjunction() {
        let cnf = gen_monotone_cnf(5, 2, 1).unwrap();
        let dj = gen_disjunction(5, 2).unwrap();
        for h in cnf.hypotheses() {
            let vars = &h.meta["clauses"][0];
            let twin = dj
                .hypotheses()
                .iter()
                .find(|g| &g.meta["vars"] == vars)
                .unwrap();
            assert_eq!(h.outcomes, twin.outcomes);
        }
        assert_eq!(cnf.n(), binomial(5, 2) as usize);
    }

    #[test]
    fn bad_cnf_params() {
        assert_eq!(gen_monotone_cnf(3, 2, 2).unwrap_err().code(), "BadParams");
    }

    #[test]
    fn cx_disjunction_shape() {
        let inst = gen_cx_disjunction(3).unwrap();
        assert_eq!((inst.n(), inst.m_tests()), (4, 16));
        assert_eq!(gen_cx_disjunction(2).unwrap().n(), 3);
        assert!(gen_cx_disjunction(1).is_err());
    }
}
