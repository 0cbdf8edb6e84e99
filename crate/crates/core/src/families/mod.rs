//! Deterministic generators for the problem families and counterexamples.
//!
//! Every generator returns a validated [`Instance`]. Instance params record
//! the generator arguments plus two analysis hints:
//!
//! * `edges`: the candidate edge preset (`cycle`, `l1` or `all`);
//! * `split_alpha`: the split-neighborly constant proven for the family,
//!   as a `num/den` string, when one is known.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::instance::{validate_instance, Instance, InstanceError, Meta, RawHypothesis, RawInstance, TestRecord};
use crate::rational::{self, Rational};

mod boolean;
mod linear;
mod localization;
mod polygon;

pub use boolean::{gen_cx_disjunction, gen_disjunction, gen_monotone_cnf};
pub use linear::{gen_discrete_linear, gen_linear_kcase};
pub use localization::{gen_box_localization, gen_cx_plus, gen_shape_localization};
pub use polygon::gen_convex_polygon;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{0}")]
    BadParams(String),
    #[error("convex polygon needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("no hypothesis satisfies the family constraints: {0}")]
    EmptyFamily(String),
    #[error("offset set is not axis-symmetric: {0:?} present but {1:?} missing")]
    NotAxisSymmetric(Vec<i64>, Vec<i64>),
    #[error("offset set is not axis-convex: {0:?} missing between members on one axis")]
    NotAxisConvex(Vec<i64>),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl FamilyError {
    pub fn code(&self) -> &'static str {
        match self {
            FamilyError::UnknownFamily(_) => "UnknownFamily",
            FamilyError::BadParams(_) => "BadParams",
            FamilyError::TooFewPoints(_) => "TooFewPoints",
            FamilyError::EmptyFamily(_) => "EmptyFamily",
            FamilyError::NotAxisSymmetric(..) => "NotAxisSymmetric",
            FamilyError::NotAxisConvex(_) => "NotAxisConvex",
            FamilyError::Instance(e) => e.code(),
        }
    }
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParams(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    ConvexPolygon,
    Disjunction,
    MonotoneCnf,
    BoxLocalization,
    ShapeLocalization,
    DiscreteLinear,
    LinearKCase,
    CxDisjunction,
    CxPlus,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::ConvexPolygon,
        Family::Disjunction,
        Family::MonotoneCnf,
        Family::BoxLocalization,
        Family::ShapeLocalization,
        Family::DiscreteLinear,
        Family::LinearKCase,
        Family::CxDisjunction,
        Family::CxPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ConvexPolygon => "convex_polygon",
            Family::Disjunction => "disjunction",
            Family::MonotoneCnf => "monotone_cnf",
            Family::BoxLocalization => "box_localization",
            Family::ShapeLocalization => "shape_localization",
            Family::DiscreteLinear => "discrete_linear",
            Family::LinearKCase => "linear_kcase",
            Family::CxDisjunction => "cx_disjunction",
            Family::CxPlus => "cx_plus",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// A family name plus textual `key=value` parameters, as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, String>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec {
            family,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Parses `key=value` pairs.
    pub fn parse(family: &str, pairs: &[String]) -> Result<Self, FamilyError> {
        let mut spec = FamilySpec::new(family.parse()?);
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| bad(format!("parameter {pair:?} is not key=value")))?;
            spec.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(spec)
    }

    fn allow(&self, keys: &[&str]) -> Result<(), FamilyError> {
        match self.params.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(bad(format!(
                "{} does not take parameter {k:?} (accepts {})",
                self.family,
                keys.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn count(&self, key: &str) -> Result<usize, FamilyError> {
        let v = self
            .params
            .get(key)
            .ok_or_else(|| bad(format!("{} requires parameter {key}", self.family)))?;
        v.parse()
            .map_err(|_| bad(format!("parameter {key}={v} is not a non-negative integer")))
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, FamilyError> {
        match self.params.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(bad(format!("parameter {key}={v} is not a boolean"))),
        }
    }

    fn vector(&self, key: &str) -> Result<Option<Vec<i64>>, FamilyError> {
        self.params.get(key).map(|v| parse_vector(key, v)).transpose()
    }

    fn rational(&self, key: &str) -> Result<Rational, FamilyError> {
        let v = self
            .params
            .get(key)
            .ok_or_else(|| bad(format!("{} requires parameter {key}", self.family)))?;
        rational::parse(v).map_err(|e| bad(e.to_string()))
    }
}

fn parse_vector(key: &str, text: &str) -> Result<Vec<i64>, FamilyError> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| bad(format!("parameter {key}={text} is not an integer list")))
        })
        .collect()
}

/// Parses `a,b;c,d;...` into a list of integer vectors.
pub fn parse_offsets(text: &str) -> Result<Vec<Vec<i64>>, FamilyError> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_vector("offsets", p))
        .collect()
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Instance, FamilyError> {
    match spec.family {
        Family::ConvexPolygon => {
            spec.allow(&["m", "balanced"])?;
            gen_convex_polygon(spec.count("m")?, spec.flag("balanced", true)?)
        }
        Family::Disjunction => {
            spec.allow(&["d", "m"])?;
            gen_disjunction(spec.count("d")?, spec.count("m")?)
        }
        Family::MonotoneCnf => {
            spec.allow(&["d", "m", "l"])?;
            gen_monotone_cnf(spec.count("d")?, spec.count("m")?, spec.count("l")?)
        }
        Family::BoxLocalization => {
            spec.allow(&["r", "center"])?;
            let radii = spec
                .vector("r")?
                .ok_or_else(|| bad("box_localization requires parameter r"))?;
            let center = spec.vector("center")?.unwrap_or_else(|| vec![0; radii.len()]);
            gen_box_localization(&radii, &center)
        }
        Family::ShapeLocalization => {
            spec.allow(&["offsets", "center"])?;
            let offsets = parse_offsets(
                spec.params
                    .get("offsets")
                    .ok_or_else(|| bad("shape_localization requires parameter offsets"))?,
            )?;
            let dims = offsets.first().map_or(0, Vec::len);
            let center = spec.vector("center")?.unwrap_or_else(|| vec![0; dims]);
            gen_shape_localization(&offsets, &center)
        }
        Family::DiscreteLinear => {
            spec.allow(&["d", "r"])?;
            gen_discrete_linear(spec.count("d")?, &spec.rational("r")?)
        }
        Family::LinearKCase => {
            spec.allow(&["d"])?;
            gen_linear_kcase(spec.count("d")?)
        }
        Family::CxDisjunction => {
            spec.allow(&["m"])?;
            gen_cx_disjunction(spec.count("m")?)
        }
        Family::CxPlus => {
            spec.allow(&["d", "l"])?;
            gen_cx_plus(spec.count("d")?, spec.count("l")?)
        }
    }
}

/// Shared assembly: ids, metadata and an outcome predicate.
pub(crate) struct Builder {
    family: Family,
    params: Meta,
    tests: Vec<TestRecord>,
    hypotheses: Vec<(String, Meta)>,
}

impl Builder {
    pub(crate) fn new(family: Family) -> Self {
        Builder {
            family,
            params: Meta::new(),
            tests: Vec::new(),
            hypotheses: Vec::new(),
        }
    }

    pub(crate) fn param(&mut self, key: &str, value: Value) -> &mut Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub(crate) fn edges(&mut self, preset: &str) -> &mut Self {
        self.param("edges", json!(preset))
    }

    pub(crate) fn split_alpha(&mut self, alpha: &Rational) -> &mut Self {
        self.param("split_alpha", json!(rational::format(alpha)))
    }

    pub(crate) fn test(&mut self, id: String, meta: Meta) {
        self.tests.push(TestRecord { id, meta });
    }

    pub(crate) fn hypothesis(&mut self, id: String, meta: Meta) {
        self.hypotheses.push((id, meta));
    }

    /// `outcome(h, x)` with indices into the pushed hypotheses and tests.
    pub(crate) fn build(self, outcome: impl Fn(usize, usize) -> bool) -> Result<Instance, FamilyError> {
        let name = {
            let args: Vec<String> = self
                .params
                .iter()
                .filter(|(k, _)| !matches!(k.as_str(), "edges" | "split_alpha" | "test_region"))
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect();
            format!("{}({})", self.family, args.join(","))
        };
        let m = self.tests.len();
        let hypotheses = self
            .hypotheses
            .into_iter()
            .enumerate()
            .map(|(h, (id, meta))| RawHypothesis {
                id,
                outcomes: (0..m).map(|x| outcome(h, x)).collect(),
                meta,
            })
            .collect();
        let instance = validate_instance(RawInstance {
            name,
            family: self.family.name().to_string(),
            params: self.params,
            tests: self.tests,
            hypotheses,
        })?;
        Ok(instance)
    }
}

pub(crate) fn meta(pairs: &[(&str, Value)]) -> Meta {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// All `d`-bit strings in lexicographic order; character `i` is variable `i + 1`.
pub(crate) fn bit_strings(d: usize) -> Vec<Vec<bool>> {
    (0..1u64 << d)
        .map(|v| (0..d).map(|i| (v >> (d - 1 - i)) & 1 == 1).collect())
        .collect()
}

pub(crate) fn bits_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn push_bit_tests(builder: &mut Builder, d: usize) -> Vec<Vec<bool>> {
    let strings = bit_strings(d);
    for s in &strings {
        let text = bits_text(s);
        builder.test(text.clone(), meta(&[("bits", json!(text))]));
    }
    strings
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
