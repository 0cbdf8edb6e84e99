//! Linear classifiers on the vertices of a convex polygon.
//!
//! On a convex pool, the positive set of a linear classifier is a contiguous
//! arc of vertices, so each equivalence class is an arc `(start, length)`
//! with `1 <= length <= m - 1`.

use serde_json::json;

use super::{meta, Builder, Family, FamilyError};
use crate::instance::Instance;
use crate::rational::ratio;

pub fn gen_convex_polygon(m_points: usize, balanced: bool) -> Result<Instance, FamilyError> {
    if m_points < 3 {
        return Err(FamilyError::TooFewPoints(m_points));
    }
    let m = m_points;
    let mut b = Builder::new(Family::ConvexPolygon);
    b.param("m", json!(m))
        .param("balanced", json!(balanced))
        .edges("cycle")
        .split_alpha(&ratio(1, 3));
    for x in 0..m {
        b.test(format!("v{x}"), meta(&[("position", json!(x))]));
    }
    let mut arcs = Vec::new();
    for start in 0..m {
        for length in 1..m {
            // positive fraction length/m within [1/4, 3/4]
            if balanced && !(4 * length >= m && 4 * length <= 3 * m) {
                continue;
            }
            arcs.push((start, length));
            b.hypothesis(
                format!("arc{start}+{length}"),
                meta(&[("start", json!(start)), ("length", json!(length))]),
            );
        }
    }
    b.build(|h, x| {
        let (start, length) = arcs[h];
        (x + m - start) % m < length
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::version_space::delta_set;

    #[test]
    fn pentagon_has_twenty_classes() {
        let p = gen_convex_polygon(5, false).unwrap();
        assert_eq!((p.n(), p.m_tests()), (20, 5));
        // arcs containing v1 but not v0 start at v1: lengths 1..4
        assert_eq!(delta_set(&p, 0, 1).len(), 4);
    }

    #[test]
    fn balanced_count_formula() {
        for m in 3..=12 {
            let n = gen_convex_polygon(m, true).unwrap().n();
            let q = m.div_ceil(4);
            assert_eq!(n, m * (m - 2 * q + 1), "m={m}");
        }
    }

    #[test]
    fn balanced_adjacent_delta() {
        let p = gen_convex_polygon(5, true).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(delta_set(&p, 0, 1).len(), 2);
        let p = gen_convex_polygon(8, true).unwrap();
        assert_eq!(delta_set(&p, 3, 4).len(), 8 - 4 + 1);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(gen_convex_polygon(2, false), Err(FamilyError::TooFewPoints(2)));
    }
}
