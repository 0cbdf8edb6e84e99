//! Discrete linear classifiers `h(x) = 1[w·x > b]` over `x ∈ {0,1}^d`.

use std::collections::HashSet;

use num_traits::Signed;
use serde_json::json;

use super::{bad, binomial, meta, push_bit_tests, Builder, Family, FamilyError};
use crate::instance::Instance;
use crate::rational::{self, int, Rational};

fn weight_text(w: &[i64]) -> String {
    w.iter()
        .map(|&v| match v {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

fn dot(w: &[i64], x: &[bool]) -> i64 {
    w.iter().zip(x).filter(|(_, &b)| b).map(|(v, _)| v).sum()
}

/// Whether `(w, b)` satisfies both overshoot/undershoot constraints with ratio `r`.
pub fn admissible(w: &[i64], b: i64, r: &Rational) -> bool {
    let d = w.len() as i64;
    let plus = w.iter().filter(|&&v| v == 1).count() as i64;
    let minus = w.iter().filter(|&&v| v == -1).count() as i64;
    let slack = rational::ratio(d, 8);
    let first = int(plus - b) <= r * int(minus + b) - &slack;
    let second = int(minus + b) <= r * int(plus - b - 1) - &slack;
    first && second
}

/// All `(w, b)` with `w ∈ {-1,0,1}^d`, `b ∈ [-d, d]`, both constraints holding,
/// deduplicated by outcome row (the first pair in enumeration order represents
/// its class).
pub fn gen_discrete_linear(d: usize, r: &Rational) -> Result<Instance, FamilyError> {
    if d < 1 {
        return Err(bad("discrete_linear needs d >= 1"));
    }
    if d > 12 {
        return Err(bad(format!("d={d} would enumerate 3^{d} weight vectors")));
    }
    if !r.is_positive() {
        return Err(bad(format!("discrete_linear needs r > 0, got {}", rational::format(r))));
    }
    let mut b = Builder::new(Family::DiscreteLinear);
    let cap = if r * int(8) > int(16) { r * int(8) } else { int(16) };
    b.param("d", json!(d))
        .param("r", json!(rational::format(r)))
        .edges("l1")
        .split_alpha(&(Rational::from_integer(1.into()) / cap));
    let tests = push_bit_tests(&mut b, d);
    let di = d as i64;

    let mut kept: Vec<(Vec<i64>, i64)> = Vec::new();
    let mut rows: HashSet<Vec<bool>> = HashSet::new();
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let mut w = vec![0i64; d];
        for slot in w.iter_mut().rev() {
            *slot = (c % 3) as i64 - 1;
            c /= 3;
        }
        for bias in -di..=di {
            if !admissible(&w, bias, r) {
                continue;
            }
            let row: Vec<bool> = tests.iter().map(|x| dot(&w, x) > bias).collect();
            if rows.insert(row) {
                kept.push((w.clone(), bias));
            }
        }
    }
    if kept.is_empty() {
        return Err(FamilyError::EmptyFamily(format!(
            "discrete_linear d={d}, r={}",
            rational::format(r)
        )));
    }
    for (w, bias) in &kept {
        b.hypothesis(
            format!("w={};b={bias}", weight_text(w)),
            meta(&[("w", json!(w)), ("b", json!(bias))]),
        );
    }
    b.build(|h, x| dot(&kept[h].0, &tests[x]) > kept[h].1)
}

/// `w ∈ {0,1}^d` with exactly `d/2` ones and `b = d/4 - 1`; `d` divisible by 4.
pub fn gen_linear_kcase(d: usize) -> Result<Instance, FamilyError> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(bad(format!("linear_kcase needs d divisible by 4, got {d}")));
    }
    if d > 16 {
        return Err(bad(format!("d={d} would materialize 2^{d} tests")));
    }
    let bias = (d / 4) as i64 - 1;
    let mut b = Builder::new(Family::LinearKCase);
    b.param("d", json!(d)).param("b", json!(bias)).edges("l1");
    let tests = push_bit_tests(&mut b, d);
    // tests are already every d-bit string in order; reuse them as weight vectors
    let weights: Vec<Vec<i64>> = tests
        .iter()
        .filter(|x| x.iter().filter(|&&v| v).count() == d / 2)
        .map(|x| x.iter().map(|&v| i64::from(v)).collect())
        .collect();
    debug_assert_eq!(weights.len() as u128, binomial(d, d / 2));
    for w in &weights {
        let text: String = w.iter().map(|v| v.to_string()).collect();
        b.hypothesis(
            format!("w={text};b={bias}"),
            meta(&[("w", json!(w)), ("b", json!(bias))]),
        );
    }
    b.build(|h, x| dot(&weights[h], &tests[x]) > bias)
}
