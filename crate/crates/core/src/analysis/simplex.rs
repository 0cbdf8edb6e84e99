//! Dense primal simplex over exact rationals or `f64`.

use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub(crate) trait Scalar: Clone + Debug + PartialOrd + Zero + One + std::ops::Sub<Output = Self> {
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    fn same(&self, other: &Self) -> bool;
    fn times(&self, other: &Self) -> Self;
    fn over(&self, other: &Self) -> Self;
    fn sub_assign(&mut self, other: Self);
}

impl Scalar for Rational {
    fn positive(&self) -> bool {
        self.is_positive()
    }
    fn negative(&self) -> bool {
        self.is_negative()
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_assign(&mut self, other: Self) {
        *self -= other;
    }
}

const EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn positive(&self) -> bool {
        *self > EPS
    }
    fn negative(&self) -> bool {
        *self < -EPS
    }
    fn same(&self, other: &Self) -> bool {
        (self - other).abs() <= EPS
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_assign(&mut self, other: Self) {
        *self -= other;
    }
}

/// `max obj·v` over `A v <= b`, `v >= 0`, `b >= 0`, starting from the slack basis.
pub(crate) struct Tableau<T> {
    rows: usize,
    cols: usize,
    structural: usize,
    /// `rows` constraint rows then the objective row; each has `cols + 1` entries (rhs last).
    cells: Vec<Vec<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Unbounded,
    PivotLimit,
}

impl<T: Scalar> Tableau<T> {
    pub(crate) fn new(rows: usize, structural: usize) -> Self {
        let cols = structural + rows;
        let mut cells = vec![vec![T::zero(); cols + 1]; rows + 1];
        for (i, row) in cells.iter_mut().take(rows).enumerate() {
            row[structural + i] = T::one();
        }
        Tableau { rows, cols, structural, cells }
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, v: T) {
        self.cells[row][col] = v;
    }

    pub(crate) fn set_rhs(&mut self, row: usize, v: T) {
        self.cells[row][self.cols] = v;
    }

    pub(crate) fn set_objective(&mut self, col: usize, v: T) {
        self.cells[self.rows][col] = v;
    }

    /// Largest-coefficient entering rule with a lexicographic ratio test,
    /// which rules out cycling on degenerate vertices.
    pub(crate) fn maximize(&mut self, pivot_limit: usize) -> Outcome {
        for _ in 0..pivot_limit {
            let obj = &self.cells[self.rows];
            let entering = (0..self.cols)
                .filter(|&j| obj[j].negative())
                .min_by(|&a, &b| obj[a].partial_cmp(&obj[b]).expect("finite tableau"));
            let Some(entering) = entering else { return Outcome::Optimal };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows {
                let a = &self.cells[i][entering];
                if !a.positive() {
                    continue;
                }
                let ratio = self.cells[i][self.cols].over(a);
                let better = match &leaving {
                    None => true,
                    Some((best, r)) => {
                        if ratio.same(r) {
                            self.lex_less(i, *best, entering)
                        } else {
                            ratio < *r
                        }
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else { return Outcome::Unbounded };
            self.pivot(row, entering);
        }
        Outcome::PivotLimit
    }

    /// Compares rows `a` and `b` of the basis inverse, each scaled by its
    /// entry in column `col`.
    fn lex_less(&self, a: usize, b: usize, col: usize) -> bool {
        let (pa, pb) = (&self.cells[a][col], &self.cells[b][col]);
        for k in self.structural..self.cols {
            let (va, vb) = (&self.cells[a][k], &self.cells[b][k]);
            if va.is_zero() && vb.is_zero() {
                continue;
            }
            let (sa, sb) = (va.over(pa), vb.over(pb));
            if !sa.same(&sb) {
                return sa < sb;
            }
        }
        false
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        for v in self.cells[row].iter_mut() {
            if !v.is_zero() {
                *v = v.over(&p);
            }
        }
        let pivot_row = std::mem::take(&mut self.cells[row]);
        let support: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, other) in self.cells.iter_mut().enumerate() {
            if i == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for &j in &support {
                other[j].sub_assign(factor.times(&pivot_row[j]));
            }
        }
        self.cells[row] = pivot_row;
    }

    pub(crate) fn objective_value(&self) -> T {
        self.cells[self.rows][self.cols].clone()
    }

    /// Shadow price of constraint `row`, read off its slack column.
    pub(crate) fn dual(&self, row: usize) -> T {
        self.cells[self.rows][self.structural + row].clone()
    }
}
