//! Split constants and query-cost bound formulas.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{self, from_count, int, Rational};

/// A bound value, or the sentinel for a degenerate denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    fn from_ratio(numerator: f64, denominator: f64) -> Self {
        if numerator == 0.0 {
            Bound::Finite(0.0)
        } else if denominator <= 0.0 || !denominator.is_finite() {
            Bound::Unbounded
        } else {
            Bound::Finite(numerator / denominator)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    /// `lhs <= self`, with no tolerance.
    pub fn admits(self, lhs: f64) -> bool {
        self.value().is_none_or(|b| lhs <= b)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v:.6}"),
            Bound::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    pub lambda: Rational,
    pub nowak_worst: Bound,
    pub split_worst: Bound,
    pub split_average: Bound,
}

/// `min(c, 1/(1/α + 2))`, written as `α/(1 + 2α)`; zero when α is zero.
pub fn beta_of(c: &Rational, alpha: &Rational) -> Rational {
    if alpha.is_zero() {
        return Rational::zero();
    }
    let local = alpha / (Rational::one() + int(2) * alpha);
    if &local < c {
        local
    } else {
        c.clone()
    }
}

/// `1 - min(c, 1/(k+2))`.
pub fn lambda_of(c: &Rational, k: usize) -> Rational {
    let local = from_count(1, k + 2);
    let m = if &local < c { local } else { c.clone() };
    Rational::one() - m
}

/// Bernoulli entropy in bits.
pub fn binary_entropy(p: &Rational) -> f64 {
    let p = rational::to_f64(p);
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

pub fn compute_bounds(n: usize, c: &Rational, k: usize, beta: &Rational) -> BoundSet {
    let log_n = (n.max(1) as f64).log2();
    let lambda = lambda_of(c, k);
    let neg_log = |q: &Rational| -rational::to_f64(q).log2();
    BoundSet {
        nowak_worst: Bound::from_ratio(log_n, neg_log(&lambda)),
        split_worst: Bound::from_ratio(log_n, neg_log(&(Rational::one() - beta))),
        split_average: Bound::from_ratio(log_n, binary_entropy(beta)),
        lambda,
    }
}
