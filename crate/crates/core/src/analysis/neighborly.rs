//! Smallest `k` for which the k-neighborly test graph is connected.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::instance::Instance;
use crate::version_space::disagreement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinK {
    pub k_min: usize,
    /// Spanning tree edges `(x, x', disagreement)` of a minimum-bottleneck tree.
    pub spanning: Vec<(usize, usize, usize)>,
}

/// Kruskal over pairwise disagreement counts; the heaviest tree edge is the
/// smallest threshold that connects every test.
pub fn min_k(instance: &Instance) -> MinK {
    let m = instance.m_tests();
    let mut pairs: Vec<(usize, usize, usize)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| ((a + 1)..m).map(move |b| (a, b)))
        .map(|(a, b)| (disagreement(instance, a, b), a, b))
        .collect();
    pairs.par_sort_unstable();

    let mut forest = UnionFind::<usize>::new(m);
    let mut spanning = Vec::with_capacity(m.saturating_sub(1));
    for (w, a, b) in pairs {
        if forest.union(a, b) {
            spanning.push((a, b, w));
            if spanning.len() + 1 == m {
                break;
            }
        }
    }
    MinK {
        k_min: spanning.iter().map(|e| e.2).max().unwrap_or(0),
        spanning,
    }
}

/// Whether the undirected graph `{(x, x') : disagreement <= k}` is connected.
pub fn is_k_connected(instance: &Instance, k: usize) -> bool {
    let m = instance.m_tests();
    let mut forest = UnionFind::<usize>::new(m);
    let mut components = m;
    for a in 0..m {
        for b in (a + 1)..m {
            if disagreement(instance, a, b) <= k && forest.union(a, b) {
                components -= 1;
            }
        }
    }
    components <= 1
}
