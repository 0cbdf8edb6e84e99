//! Exact minimum worst-case depth over all decision trees.

use std::collections::HashMap;

use crate::instance::Instance;

use super::split::projected_masks;
use super::AnalysisError;

pub const DEFAULT_OPTIMAL_CAP: usize = 12;

struct Solver {
    masks: Vec<u64>,
    memo: HashMap<u64, u32>,
}

fn ceil_log2(size: u32) -> u32 {
    32 - (size - 1).leading_zeros()
}

impl Solver {
    fn cost(&mut self, v: u64) -> u32 {
        let size = v.count_ones();
        if size <= 1 {
            return 0;
        }
        if let Some(&c) = self.memo.get(&v) {
            return c;
        }
        let floor = ceil_log2(size);
        let mut best = u32::MAX;
        for i in 0..self.masks.len() {
            let m = self.masks[i];
            let ones = v & m;
            if ones == 0 || ones == v {
                continue;
            }
            // the heavier side bounds the cost from below, so try it first
            let (big, small) = if ones.count_ones() * 2 >= size { (ones, v & !m) } else { (v & !m, ones) };
            if best != u32::MAX && ceil_log2(big.count_ones()) + 1 >= best {
                continue;
            }
            let mut c = self.cost(big);
            if c + 1 < best {
                c = c.max(self.cost(small));
                best = best.min(c + 1);
            }
            if best == floor {
                break;
            }
        }
        self.memo.insert(v, best);
        best
    }
}

pub fn optimal_worst_case(instance: &Instance, n_cap: usize) -> Result<usize, AnalysisError> {
    let n = instance.n();
    if n > n_cap || n > 63 {
        return Err(AnalysisError::InstanceTooLarge { n, cap: n_cap.min(63) });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut solver = Solver { masks: projected_masks(instance, &all), memo: HashMap::new() };
    Ok(solver.cost((1u64 << n) - 1) as usize)
}
