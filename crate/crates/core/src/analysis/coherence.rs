//! Coherence parameter: the value of the game where the tester picks a test
//! distribution and the adversary picks a hypothesis.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::simplex::{Outcome, Scalar, Tableau};
use crate::instance::Instance;
use crate::rational::{half, split_of, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceCertificate {
    /// Nonzero weights only, keyed by test index.
    pub distribution: BTreeMap<usize, Rational>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoherenceError {
    #[error("certificate weights are not a distribution: {0}")]
    NotADistribution(String),
}

impl CoherenceError {
    pub fn code(&self) -> &'static str {
        "NotADistribution"
    }
}

/// `min_h min(E_P[h], 1 - E_P[h])` for the certificate's distribution.
pub fn verify_certificate(
    instance: &Instance,
    cert: &CoherenceCertificate,
) -> Result<Rational, CoherenceError> {
    let mut total = Rational::zero();
    for (&x, w) in &cert.distribution {
        if x >= instance.m_tests() {
            return Err(CoherenceError::NotADistribution(format!("test index {x} out of range")));
        }
        if w.is_negative() {
            return Err(CoherenceError::NotADistribution(format!("negative weight on test {x}")));
        }
        total += w;
    }
    if !total.is_one() {
        return Err(CoherenceError::NotADistribution(format!("weights sum to {total}")));
    }
    let mut worst = half();
    for h in 0..instance.n() {
        let mean: Rational = cert
            .distribution
            .iter()
            .filter(|(&x, _)| instance.outcome(h, x))
            .map(|(_, w)| w.clone())
            .sum();
        let s = split_of(&mean);
        if s < worst {
            worst = s;
        }
    }
    Ok(worst)
}

fn certify(instance: &Instance, distribution: BTreeMap<usize, Rational>) -> CoherenceCertificate {
    let mut cert = CoherenceCertificate { distribution, value: Rational::zero() };
    cert.value = verify_certificate(instance, &cert).expect("solver weights form a distribution");
    cert
}

/// Maximizes the coherence value exactly. The returned value is recomputed
/// from the certificate, never taken from the solver.
pub fn coherence(instance: &Instance) -> CoherenceCertificate {
    let n = instance.n();
    let full = (0..instance.m_tests()).find(|&x| instance.column(x).count_ones(..) == n);
    let empty = (0..instance.m_tests()).find(|&x| instance.column(x).is_clear());
    if let (Some(a), Some(b)) = (full, empty) {
        return certify(instance, BTreeMap::from([(a, half()), (b, half())]));
    }

    // one LP column per distinct outcome column, represented by its first test
    let mut seen = HashMap::new();
    let mut reps = Vec::new();
    for x in 0..instance.m_tests() {
        if seen.insert(instance.column(x).clone(), x).is_none() {
            reps.push(x);
        }
    }
    certify(instance, solve(instance, &reps))
}

/// Games below this many (test, hypothesis) entries are solved in exact
/// arithmetic; larger ones in `f64`, with the weights snapped to rationals.
const EXACT_ENTRIES: usize = 4096;
const PIVOT_LIMIT: usize = 200_000;
const MAX_DENOMINATOR: i64 = 1_000_000;

fn solve(instance: &Instance, reps: &[usize]) -> BTreeMap<usize, Rational> {
    let weights: Vec<Rational> = if reps.len() * instance.n() <= EXACT_ENTRIES {
        solve_by_columns::<Rational>(instance, reps)
    } else {
        let approx: Vec<Rational> =
            solve_by_columns::<f64>(instance, reps).iter().map(|&w| snap(w)).collect();
        let total: Rational = approx.iter().sum();
        if total.is_positive() {
            approx.into_iter().map(|w| w / &total).collect()
        } else {
            vec![Rational::new(1.into(), (reps.len() as i64).into()); reps.len()]
        }
    };
    reps.iter().zip(weights).filter(|(_, w)| !w.is_zero()).map(|(&x, w)| (x, w)).collect()
}

/// Nearest fraction with denominator at most `MAX_DENOMINATOR`, by continued
/// fractions. Negative and non-finite inputs snap to zero.
fn snap(w: f64) -> Rational {
    if !w.is_finite() || w <= 0.0 {
        return Rational::zero();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = w;
    loop {
        let a = x.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > MAX_DENOMINATOR {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    Rational::new(p1.into(), q1.into())
}

/// Column generation over hypotheses: solve the game against a subset of
/// adversary strategies, then add every hypothesis the candidate
/// distribution splits worse than the subset's value. The subset value only
/// over-estimates the full value, so stopping when the distribution matches
/// it is exact. Returns one weight per entry of `reps`.
fn solve_by_columns<T: Scalar + Send + Sync>(instance: &Instance, reps: &[usize]) -> Vec<T> {
    const BATCH: usize = 64;
    let n = instance.n();
    let mut active: Vec<usize> = (0..n.min(BATCH)).collect();
    let mut in_active = vec![false; n];
    for &h in &active {
        in_active[h] = true;
    }
    loop {
        let Some((weights, value)) = solve_game::<T>(instance, reps, &active) else {
            // the restricted game already has value 0
            let mut point = vec![T::zero(); reps.len()];
            point[0] = T::one();
            return point;
        };
        let mut worst: Vec<(T, usize)> = (0..n)
            .into_par_iter()
            .filter(|&h| !in_active[h])
            .filter_map(|h| {
                let mut ones = T::zero();
                for (w, &x) in weights.iter().zip(reps) {
                    if instance.outcome(h, x) {
                        ones = ones + w.clone();
                    }
                }
                let rest = T::one() - ones.clone();
                let minority = if rest < ones { rest } else { ones };
                (value.clone() - minority.clone()).positive().then_some((minority, h))
            })
            .collect();
        if worst.is_empty() {
            return weights;
        }
        worst.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
        for (_, h) in worst.into_iter().take(BATCH) {
            in_active[h] = true;
            active.push(h);
        }
    }
}

/// Value of the zero-sum game with tests as rows and, for each hypothesis in
/// `columns`, the strategies "`h(x)`" and "`1 - h(x)`" as columns. Solves
/// `max Σ w  s.t.  M w <= 1, w >= 0`; the row player's optimal mix is the
/// dual scaled by the value. `None` when the LP is unbounded (value 0).
fn solve_game<T: Scalar>(instance: &Instance, reps: &[usize], columns: &[usize]) -> Option<(Vec<T>, T)> {
    let rows = reps.len();
    let structural = 2 * columns.len();
    let mut t = Tableau::<T>::new(rows, structural);
    for (i, &x) in reps.iter().enumerate() {
        for (j, &h) in columns.iter().enumerate() {
            let col = if instance.outcome(h, x) { 2 * j } else { 2 * j + 1 };
            t.set(i, col, T::one());
        }
        t.set_rhs(i, T::one());
    }
    for j in 0..structural {
        t.set_objective(j, T::zero() - T::one());
    }
    if t.maximize(PIVOT_LIMIT) == Outcome::Unbounded {
        return None;
    }
    let total = t.objective_value();
    if !total.positive() {
        return None;
    }
    let weights = (0..rows).map(|i| t.dual(i).over(&total)).collect();
    Some((weights, T::one().over(&total)))
}
