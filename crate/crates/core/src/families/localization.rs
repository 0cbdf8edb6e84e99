//! Object localization on the integer lattice: `h_z(x) = 1[x - z ∈ S]`.
//!
//! The lattice is infinite; tests are restricted to the hypothesis region
//! dilated by the bounding box of `S` plus one. Every test outside that box
//! has an all-zero column, which the box already contains.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde_json::json;

use super::{bad, meta, Builder, Family, FamilyError};
use crate::instance::Instance;
use crate::rational::ratio;

fn point_id(prefix: &str, p: &[i64]) -> String {
    let inner: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("{prefix}({})", inner.join(","))
}

fn lattice_box(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (a..=b).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

const MAX_TESTS: usize = 1 << 20;

fn localize(
    mut b: Builder,
    shape: &[Vec<i64>],
    mut centers: Vec<Vec<i64>>,
) -> Result<Instance, FamilyError> {
    let d = shape[0].len();
    let reach: Vec<i64> = (0..d)
        .map(|i| shape.iter().map(|s| s[i].abs()).max().unwrap_or(0))
        .collect();
    let lo: Vec<i64> = (0..d)
        .map(|i| centers.iter().map(|z| z[i]).min().unwrap() - reach[i] - 1)
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|i| centers.iter().map(|z| z[i]).max().unwrap() + reach[i] + 1)
        .collect();
    let volume = lo
        .iter()
        .zip(&hi)
        .try_fold(1usize, |acc, (a, b)| acc.checked_mul((b - a + 1) as usize));
    if volume.is_none_or(|v| v > MAX_TESTS) {
        return Err(bad(format!("test region {lo:?}..{hi:?} is too large")));
    }
    b.param("test_region", json!({ "lo": lo, "hi": hi }));

    let tests = lattice_box(&lo, &hi);
    for x in &tests {
        b.test(point_id("", x), meta(&[("coords", json!(x))]));
    }
    centers.sort();
    centers.dedup();
    for z in &centers {
        b.hypothesis(point_id("z", z), meta(&[("z", json!(z))]));
    }
    let shape: HashSet<Vec<i64>> = shape.iter().cloned().collect();
    b.build(|h, x| shape.contains(&sub(&tests[x], &centers[h])))
}

/// `S` is the box with the given radii; hypotheses are all `z` with `z - center ∈ S`.
pub fn gen_box_localization(radii: &[i64], center: &[i64]) -> Result<Instance, FamilyError> {
    if radii.is_empty() || radii.iter().any(|&r| r < 0) {
        return Err(bad(format!("box radii must be nonempty and >= 0, got {radii:?}")));
    }
    if center.len() != radii.len() {
        return Err(bad(format!(
            "center {center:?} does not match the {}-dimensional radii",
            radii.len()
        )));
    }
    let neg: Vec<i64> = radii.iter().map(|r| -r).collect();
    let shape = lattice_box(&neg, radii);
    let mut b = Builder::new(Family::BoxLocalization);
    b.param("r", json!(radii))
        .param("center", json!(center))
        .edges("l1")
        .split_alpha(&ratio(1, 4));
    let centers = shape.iter().map(|s| add(center, s)).collect();
    localize(b, &shape, centers)
}

/// Checks closure under negating any coordinate, and that members on any
/// axis-parallel line form a contiguous integer run.
pub fn check_shape(offsets: &[Vec<i64>]) -> Result<(), FamilyError> {
    let d = offsets.first().map_or(0, Vec::len);
    if d == 0 {
        return Err(bad("shape offsets must be a nonempty set of nonempty vectors"));
    }
    if offsets.iter().any(|s| s.len() != d) {
        return Err(bad("shape offsets have mixed dimensions"));
    }
    let set: BTreeSet<&Vec<i64>> = offsets.iter().collect();
    for s in &set {
        for i in 0..d {
            let mut mirrored = (*s).clone();
            mirrored[i] = -mirrored[i];
            if !set.contains(&mirrored) {
                return Err(FamilyError::NotAxisSymmetric((*s).clone(), mirrored));
            }
        }
    }
    for i in 0..d {
        let mut lines: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        for s in &set {
            let mut key = (*s).clone();
            let v = key.remove(i);
            lines.entry(key).or_default().push(v);
        }
        for (key, mut values) in lines {
            values.sort_unstable();
            for w in values.windows(2) {
                if w[1] - w[0] > 1 {
                    let mut gap = key.clone();
                    gap.insert(i, w[0] + 1);
                    return Err(FamilyError::NotAxisConvex(gap));
                }
            }
        }
    }
    Ok(())
}

/// `S` given explicitly; must be axis-symmetric and axis-convex.
pub fn gen_shape_localization(offsets: &[Vec<i64>], center: &[i64]) -> Result<Instance, FamilyError> {
    check_shape(offsets)?;
    let d = offsets[0].len();
    if center.len() != d {
        return Err(bad(format!("center {center:?} does not match the {d}-dimensional shape")));
    }
    let mut shape: Vec<Vec<i64>> = offsets.to_vec();
    shape.sort();
    shape.dedup();
    let mut b = Builder::new(Family::ShapeLocalization);
    b.param("offsets", json!(shape))
        .param("center", json!(center))
        .edges("l1")
        .split_alpha(&ratio(1, 4 * d as i64 + 1));
    let centers = shape.iter().map(|s| add(center, s)).collect();
    localize(b, &shape, centers)
}

/// Plus-shaped `S = {j e_i : |j| <= l}` with hypotheses `{±l e_i}`.
pub fn gen_cx_plus(d: usize, l: usize) -> Result<Instance, FamilyError> {
    if d < 2 || l < 1 {
        return Err(bad(format!("cx_plus needs d >= 2 and l >= 1, got d={d}, l={l}")));
    }
    let l = l as i64;
    let mut shape = Vec::new();
    for i in 0..d {
        for j in -l..=l {
            let mut p = vec![0; d];
            p[i] = j;
            shape.push(p);
        }
    }
    shape.sort();
    shape.dedup();
    let mut centers = Vec::new();
    for i in 0..d {
        for sign in [-1, 1] {
            let mut p = vec![0; d];
            p[i] = sign * l;
            centers.push(p);
        }
    }
    let mut b = Builder::new(Family::CxPlus);
    b.param("d", json!(d)).param("l", json!(l)).edges("l1");
    localize(b, &shape, centers)
}
