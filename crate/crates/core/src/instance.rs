//! Finite hypothesis/test outcome matrices.
//!
//! An [`Instance`] is immutable once validated. Outcomes are indexed twice:
//! per-hypothesis rows (over tests) and per-test columns (over hypotheses),
//! so both restriction and split counting are word-parallel.

use std::collections::{BTreeMap, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde_json::Value;

pub type Meta = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestRecord {
    pub id: String,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub id: String,
    /// Bit `x` is `h(x)`, in instance test order.
    pub outcomes: FixedBitSet,
    pub meta: Meta,
}

/// Unvalidated input to [`validate_instance`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawInstance {
    pub name: String,
    pub family: String,
    pub params: Meta,
    pub tests: Vec<TestRecord>,
    pub hypotheses: Vec<RawHypothesis>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawHypothesis {
    pub id: String,
    pub outcomes: Vec<bool>,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("instance has no {0}")]
    EmptyInstance(&'static str),
    #[error("hypotheses {first:?} and {second:?} have identical outcome rows")]
    DuplicateOutcomeRow { first: String, second: String },
    #[error("hypothesis {hypothesis:?} has {found} outcomes, expected {expected}")]
    RowLengthMismatch {
        hypothesis: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("test {id:?} has {found}-dimensional coordinates, expected {expected}")]
    InconsistentCoordinates {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("floating-point value at {0}")]
    FloatField(String),
}

impl InstanceError {
    pub fn code(&self) -> &'static str {
        match self {
            InstanceError::EmptyInstance(_) => "EmptyInstance",
            InstanceError::DuplicateOutcomeRow { .. } => "DuplicateOutcomeRow",
            InstanceError::RowLengthMismatch { .. } => "RowLengthMismatch",
            InstanceError::DuplicateId { .. } => "DuplicateId",
            InstanceError::InconsistentCoordinates { .. } => "InconsistentCoordinates",
            InstanceError::FloatField(_) => "FloatField",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    family: String,
    params: Meta,
    tests: Vec<TestRecord>,
    hypotheses: Vec<HypothesisRecord>,
    columns: Vec<FixedBitSet>,
}

fn reject_floats(path: &str, value: &Value) -> Result<(), InstanceError> {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            Err(InstanceError::FloatField(path.to_string()))
        }
        Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, v)| reject_floats(&format!("{path}[{i}]"), v)),
        Value::Object(map) => map
            .iter()
            .try_for_each(|(k, v)| reject_floats(&format!("{path}.{k}"), v)),
        _ => Ok(()),
    }
}

fn reject_floats_in(path: &str, meta: &Meta) -> Result<(), InstanceError> {
    meta.iter()
        .try_for_each(|(k, v)| reject_floats(&format!("{path}.{k}"), v))
}

/// Checks identifiability and shape, and builds the dual row/column index.
pub fn validate_instance(raw: RawInstance) -> Result<Instance, InstanceError> {
    if raw.tests.is_empty() {
        return Err(InstanceError::EmptyInstance("tests"));
    }
    if raw.hypotheses.is_empty() {
        return Err(InstanceError::EmptyInstance("hypotheses"));
    }
    let m = raw.tests.len();

    let mut seen = HashSet::new();
    for t in &raw.tests {
        if !seen.insert(t.id.as_str()) {
            return Err(InstanceError::DuplicateId {
                kind: "test",
                id: t.id.clone(),
            });
        }
    }
    let mut seen = HashSet::new();
    for h in &raw.hypotheses {
        if !seen.insert(h.id.as_str()) {
            return Err(InstanceError::DuplicateId {
                kind: "hypothesis",
                id: h.id.clone(),
            });
        }
    }

    reject_floats_in("params", &raw.params)?;
    let mut dims = None;
    for t in &raw.tests {
        reject_floats_in(&format!("tests.{}", t.id), &t.meta)?;
        if let Some(c) = coords_of(&t.meta) {
            match dims {
                None => dims = Some(c.len()),
                Some(d) if d != c.len() => {
                    return Err(InstanceError::InconsistentCoordinates {
                        id: t.id.clone(),
                        expected: d,
                        found: c.len(),
                    })
                }
                _ => {}
            }
        }
    }

    let mut hypotheses = Vec::with_capacity(raw.hypotheses.len());
    let mut rows: HashMap<FixedBitSet, usize> = HashMap::new();
    for h in raw.hypotheses {
        if h.outcomes.len() != m {
            return Err(InstanceError::RowLengthMismatch {
                hypothesis: h.id,
                expected: m,
                found: h.outcomes.len(),
            });
        }
        reject_floats_in(&format!("hypotheses.{}", h.id), &h.meta)?;
        let mut bits = FixedBitSet::with_capacity(m);
        for (x, &y) in h.outcomes.iter().enumerate() {
            bits.set(x, y);
        }
        if let Some(&prev) = rows.get(&bits) {
            let prev: &HypothesisRecord = &hypotheses[prev];
            return Err(InstanceError::DuplicateOutcomeRow {
                first: prev.id.clone(),
                second: h.id,
            });
        }
        rows.insert(bits.clone(), hypotheses.len());
        hypotheses.push(HypothesisRecord {
            id: h.id,
            outcomes: bits,
            meta: h.meta,
        });
    }

    let n = hypotheses.len();
    let mut columns = vec![FixedBitSet::with_capacity(n); m];
    for (hi, h) in hypotheses.iter().enumerate() {
        for x in h.outcomes.ones() {
            columns[x].insert(hi);
        }
    }

    Ok(Instance {
        name: raw.name,
        family: raw.family,
        params: raw.params,
        tests: raw.tests,
        hypotheses,
        columns,
    })
}

/// Integer coordinates of a test: `coords` array, or a `bits` string read as 0/1.
pub fn coords_of(meta: &Meta) -> Option<Vec<i64>> {
    if let Some(Value::Array(items)) = meta.get("coords") {
        return items.iter().map(Value::as_i64).collect();
    }
    if let Some(Value::String(bits)) = meta.get("bits") {
        return bits
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
    }
    None
}

impl Instance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &Meta {
        &self.params
    }

    pub fn tests(&self) -> &[TestRecord] {
        &self.tests
    }

    pub fn hypotheses(&self) -> &[HypothesisRecord] {
        &self.hypotheses
    }

    /// Number of hypotheses.
    pub fn n(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn m_tests(&self) -> usize {
        self.tests.len()
    }

    pub fn outcome(&self, hypothesis: usize, test: usize) -> bool {
        self.hypotheses[hypothesis].outcomes.contains(test)
    }

    /// Hypotheses answering 1 on `test`.
    pub fn column(&self, test: usize) -> &FixedBitSet {
        &self.columns[test]
    }

    pub fn columns(&self) -> &[FixedBitSet] {
        &self.columns
    }

    pub fn row(&self, hypothesis: usize) -> &FixedBitSet {
        &self.hypotheses[hypothesis].outcomes
    }

    pub fn test_index(&self, id: &str) -> Option<usize> {
        self.tests.iter().position(|t| t.id == id)
    }

    pub fn hypothesis_index(&self, id: &str) -> Option<usize> {
        self.hypotheses.iter().position(|h| h.id == id)
    }

    pub fn test_coords(&self, test: usize) -> Option<Vec<i64>> {
        coords_of(&self.tests[test].meta)
    }

    pub fn param_str(&self, key: &str) -> Option<&str> {
        self.params.get(key).and_then(Value::as_str)
    }

    /// Same tests, only the listed hypotheses (in the given order).
    pub fn restrict_hypotheses(&self, keep: &[usize]) -> Instance {
        let raw = RawInstance {
            name: self.name.clone(),
            family: self.family.clone(),
            params: self.params.clone(),
            tests: self.tests.clone(),
            hypotheses: keep
                .iter()
                .map(|&h| RawHypothesis {
                    id: self.hypotheses[h].id.clone(),
                    outcomes: (0..self.m_tests()).map(|x| self.outcome(h, x)).collect(),
                    meta: self.hypotheses[h].meta.clone(),
                })
                .collect(),
        };
        validate_instance(raw).expect("a subset of identifiable hypotheses stays identifiable")
    }

    /// Round-trips back to the unvalidated form.
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            name: self.name.clone(),
            family: self.family.clone(),
            params: self.params.clone(),
            tests: self.tests.clone(),
            hypotheses: self
                .hypotheses
                .iter()
                .enumerate()
                .map(|(h, rec)| RawHypothesis {
                    id: rec.id.clone(),
                    outcomes: (0..self.m_tests()).map(|x| self.outcome(h, x)).collect(),
                    meta: rec.meta.clone(),
                })
                .collect(),
        }
    }
}

/// Builds an instance from a dense 0/1 matrix with generated ids `x0..`, `h0..`.
/// Mostly useful in tests and examples.
pub fn from_matrix(name: &str, rows: &[&[u8]]) -> Result<Instance, InstanceError> {
    let m = rows.first().map_or(0, |r| r.len());
    validate_instance(RawInstance {
        name: name.to_string(),
        family: "matrix".to_string(),
        params: Meta::new(),
        tests: (0..m)
            .map(|x| TestRecord {
                id: format!("x{x}"),
                meta: Meta::new(),
            })
            .collect(),
        hypotheses: rows
            .iter()
            .enumerate()
            .map(|(h, r)| RawHypothesis {
                id: format!("h{h}"),
                outcomes: r.iter().map(|&b| b != 0).collect(),
                meta: Meta::new(),
            })
            .collect(),
    })
}
