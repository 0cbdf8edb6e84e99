//! Version spaces, split constants and Δ-sets.

use fixedbitset::FixedBitSet;

use crate::instance::Instance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("version space is empty")]
    EmptyVersionSpace,
}

/// Hypotheses still consistent with the observed outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionSpace<'a> {
    instance: &'a Instance,
    members: FixedBitSet,
}

impl<'a> VersionSpace<'a> {
    pub fn full(instance: &'a Instance) -> Self {
        let mut members = FixedBitSet::with_capacity(instance.n());
        members.insert_range(..);
        VersionSpace { instance, members }
    }

    pub fn from_members(instance: &'a Instance, members: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(instance.n());
        for h in members {
            assert!(h < instance.n(), "hypothesis index {h} out of range");
            bits.insert(h);
        }
        VersionSpace {
            instance,
            members: bits,
        }
    }

    pub fn from_bits(instance: &'a Instance, members: FixedBitSet) -> Self {
        assert_eq!(members.len(), instance.n());
        VersionSpace { instance, members }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, hypothesis: usize) -> bool {
        self.members.contains(hypothesis)
    }

    /// Members answering 1 on `test`.
    pub fn ones_on(&self, test: usize) -> usize {
        self.members.intersection_count(self.instance.column(test))
    }
}

/// Positive fraction of a version space on one test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitValue {
    pub p_one: Rational,
    pub split: Rational,
    pub ones: usize,
    pub size: usize,
}

impl SplitValue {
    pub fn from_counts(ones: usize, size: usize) -> Self {
        let p_one = rational::from_count(ones, size);
        let split = rational::split_of(&p_one);
        SplitValue {
            p_one,
            split,
            ones,
            size,
        }
    }

    /// Size of the smaller side.
    pub fn minority(&self) -> usize {
        self.ones.min(self.size - self.ones)
    }
}

pub fn split_probability(space: &VersionSpace<'_>, test: usize) -> Result<SplitValue, SpaceError> {
    let size = space.len();
    if size == 0 {
        return Err(SpaceError::EmptyVersionSpace);
    }
    Ok(SplitValue::from_counts(space.ones_on(test), size))
}

/// The test whose positive fraction is closest to 1/2; lowest index wins ties.
pub fn best_split_test(space: &VersionSpace<'_>) -> Result<(usize, SplitValue), SpaceError> {
    let size = space.len();
    if size == 0 {
        return Err(SpaceError::EmptyVersionSpace);
    }
    let mut best = (0, 0usize, space.ones_on(0));
    best.1 = best.2.min(size - best.2);
    let perfect = size / 2;
    for x in 1..space.instance().m_tests() {
        if best.1 == perfect {
            break;
        }
        let ones = space.ones_on(x);
        let minority = ones.min(size - ones);
        if minority > best.1 {
            best = (x, minority, ones);
        }
    }
    Ok((best.0, SplitValue::from_counts(best.2, size)))
}

pub fn restrict<'a>(space: &VersionSpace<'a>, test: usize, outcome: bool) -> VersionSpace<'a> {
    let mut members = space.members.clone();
    let column = space.instance.column(test);
    if outcome {
        members.intersect_with(column);
    } else {
        members.difference_with(column);
    }
    VersionSpace {
        instance: space.instance,
        members,
    }
}

/// `{h : h(from) = 0 and h(to) = 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSet {
    pub from_test: usize,
    pub to_test: usize,
    pub members: FixedBitSet,
}

impl DeltaSet {
    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }
}

pub fn delta_set(instance: &Instance, from: usize, to: usize) -> DeltaSet {
    let mut members = instance.column(to).clone();
    members.difference_with(instance.column(from));
    DeltaSet {
        from_test: from,
        to_test: to,
        members,
    }
}

/// `|Δ(x,x') ∪ Δ(x',x)|`: hypotheses disagreeing on the two tests.
pub fn disagreement(instance: &Instance, a: usize, b: usize) -> usize {
    instance.column(a).symmetric_difference_count(instance.column(b))
}
