use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::Region;
use crate::error::{Error, Result};
use crate::uea::{int, rational_to_string, Field, Rational};

/// A rational number or one of the two infinities.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Ext {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Ext {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn shift(&self, c: &Rational) -> Ext {
        match self {
            Ext::Finite(r) => Ext::Finite(r + c),
            other => other.clone(),
        }
    }
}

impl From<Rational> for Ext {
    fn from(r: Rational) -> Self {
        Ext::Finite(r)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => f.write_str("-inf"),
            Ext::PosInf => f.write_str("+inf"),
            Ext::Finite(r) => f.write_str(&rational_to_string(r)),
        }
    }
}

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
}

impl Interval {
    /// `None` when the interval would be empty.
    pub fn new(lo: Ext, hi: Ext) -> Option<Self> {
        (lo < hi && lo != Ext::PosInf && hi != Ext::NegInf).then_some(Self { lo, hi })
    }

    pub fn finite(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(Ext::Finite(lo), Ext::Finite(hi))
    }

    pub fn whole() -> Self {
        Self {
            lo: Ext::NegInf,
            hi: Ext::PosInf,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = Ext::Finite(x.clone());
        self.lo < x && x < self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        Interval::new(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().min(o.hi.clone()),
        )
    }

    pub fn shift(&self, c: &Rational) -> Interval {
        Interval {
            lo: self.lo.shift(c),
            hi: self.hi.shift(c),
        }
    }

    /// A rational point inside the interval.
    pub fn sample_point(&self) -> Rational {
        match (&self.lo, &self.hi) {
            (Ext::Finite(a), Ext::Finite(b)) => (a + b) / int(2),
            (Ext::NegInf, Ext::Finite(b)) => b - Rational::one(),
            (Ext::Finite(a), Ext::PosInf) => a + Rational::one(),
            _ => Rational::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Open subset of ℝ: a finite union of disjoint open intervals, sorted.
///
/// Overlapping intervals are merged; intervals that merely share an endpoint
/// stay separate because the shared point is not in the union.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RealOpenSet {
    intervals: Vec<Interval>,
}

impl RealOpenSet {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match out.last_mut() {
                Some(last) if iv.lo < last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    /// Builds from `(lo, hi)` pairs; empty pairs are dropped.
    pub fn from_pairs(pairs: &[(Ext, Ext)]) -> Self {
        Self::new(
            pairs
                .iter()
                .filter_map(|(a, b)| Interval::new(a.clone(), b.clone()))
                .collect(),
        )
    }

    /// Convenience constructor from finite rational bounds.
    pub fn from_finite(pairs: &[(Rational, Rational)]) -> Self {
        Self::new(
            pairs
                .iter()
                .filter_map(|(a, b)| Interval::finite(a.clone(), b.clone()))
                .collect(),
        )
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Self::from_finite(&[(lo, hi)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Index of the component containing `x`.
    pub fn locate(&self, x: &Rational) -> Option<usize> {
        let key = Ext::Finite(x.clone());
        let idx = self.intervals.partition_point(|iv| iv.lo < key);
        // the candidate is the last interval starting strictly left of x
        let i = idx.checked_sub(1)?;
        self.intervals[i].contains(x).then_some(i)
    }
}

impl Region for RealOpenSet {
    type Scalar = Rational;
    const SPACE: Field = Field::Real;

    fn empty() -> Self {
        Self::default()
    }

    fn whole() -> Self {
        Self {
            intervals: vec![Interval::whole()],
        }
    }

    fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    fn is_whole(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0] == Interval::whole()
    }

    fn union(&self, other: &Self) -> Result<Self> {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Ok(Self::new(all))
    }

    fn intersect(&self, other: &Self) -> Result<Self> {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(iv) = a[i].intersect(&b[j]) {
                out.push(iv);
            }
            match a[i].hi.cmp(&b[j].hi) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self::new(out))
    }

    fn shift(&self, c: &Rational) -> Self {
        Self {
            intervals: self.intervals.iter().map(|iv| iv.shift(c)).collect(),
        }
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.intervals
            .iter()
            .all(|iv| other.intervals.iter().any(|ov| ov.contains_interval(iv)))
    }

    fn contains(&self, x: &Rational) -> bool {
        self.locate(x).is_some()
    }

    fn components(&self) -> Vec<Self> {
        self.intervals
            .iter()
            .map(|iv| Self {
                intervals: vec![iv.clone()],
            })
            .collect()
    }

    fn component_count(&self) -> usize {
        self.intervals.len()
    }

    fn sample_point(&self) -> Option<Rational> {
        self.intervals.first().map(Interval::sample_point)
    }

    fn component_containing(&self, x: &Rational) -> Option<usize> {
        self.locate(x)
    }

    fn meets(&self, other: &Self) -> bool {
        self.intervals
            .iter()
            .any(|a| other.intervals.iter().any(|b| a.intersect(b).is_some()))
    }
}

impl fmt::Display for RealOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Closed bounded interval `[lo, hi]`, `lo ≤ hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClosedInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn shift(&self, c: &Rational) -> Self {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn contains_interval(&self, o: &ClosedInterval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// Whether the closed interval sits inside the open interval.
    pub fn inside_open(&self, o: &Interval) -> bool {
        o.lo < Ext::Finite(self.lo.clone()) && Ext::Finite(self.hi.clone()) < o.hi
    }
}

/// Compact subset of ℝ: a finite union of disjoint closed intervals, sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RealCompactSet {
    intervals: Vec<ClosedInterval>,
}

impl RealCompactSet {
    pub fn new(mut intervals: Vec<ClosedInterval>) -> Self {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut out: Vec<ClosedInterval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Self::new(ClosedInterval::new(lo, hi).into_iter().collect())
    }

    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Self {
        Self::new(
            pairs
                .iter()
                .filter_map(|(a, b)| ClosedInterval::new(a.clone(), b.clone()))
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Every component has nonempty interior, which for a finite union of
    /// intervals is the same as the interior being dense.
    pub fn has_dense_interior(&self) -> bool {
        self.intervals.iter().all(|iv| iv.lo < iv.hi)
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend(o.intervals.iter().cloned());
        Self::new(all)
    }

    pub fn shift(&self, c: &Rational) -> Self {
        Self {
            intervals: self.intervals.iter().map(|iv| iv.shift(c)).collect(),
        }
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.intervals
            .iter()
            .all(|iv| o.intervals.iter().any(|ov| ov.contains_interval(iv)))
    }

    /// Whether the compact set lies inside the open set.
    pub fn inside(&self, open: &RealOpenSet) -> bool {
        self.intervals
            .iter()
            .all(|iv| open.intervals().iter().any(|ov| iv.inside_open(ov)))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|iv| &iv.lo <= x && x <= &iv.hi)
    }
}

impl fmt::Display for RealCompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(
                f,
                "[{}, {}]",
                rational_to_string(&iv.lo),
                rational_to_string(&iv.hi)
            )?;
        }
        Ok(())
    }
}

pub(crate) fn unsupported(what: &str) -> Error {
    Error::Unsupported(what.to_string())
}
