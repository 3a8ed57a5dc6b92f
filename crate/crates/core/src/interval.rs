//! Finite unions of open intervals with dyadic endpoints.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::Dyadic;

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo >= hi {
            return Err(Error::DegenerateInterval(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    /// `(center - half_width, center + half_width)`.
    pub fn centered(center: &Dyadic, half_width: &Dyadic) -> Result<Self> {
        Self::new(center - half_width, center + half_width)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn length(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains(&self, s: &Dyadic) -> bool {
        self.lo < *s && *s < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        (lo < hi).then(|| Interval { lo: lo.clone(), hi: hi.clone() })
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sorted, pairwise disjoint open intervals.
///
/// Overlapping intervals are merged on insertion. Intervals that merely
/// touch at an endpoint are kept apart: the shared endpoint is not in the
/// union, and keeping it out makes [`IntervalUnion::contains`] exact.
/// Lengths are unaffected either way.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(interval: Interval) -> Self {
        Self { parts: alloc::vec![interval] }
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Self {
        let mut u = Self::new();
        for iv in intervals {
            u.insert(iv);
        }
        u
    }

    pub fn insert(&mut self, iv: Interval) {
        // first part whose right end reaches past iv.lo
        let start = self.parts.partition_point(|p| p.hi <= iv.lo);
        let mut end = start;
        let mut merged = iv;
        while end < self.parts.len() && self.parts[end].lo < merged.hi {
            let p = &self.parts[end];
            if p.lo < merged.lo {
                merged.lo = p.lo.clone();
            }
            if p.hi > merged.hi {
                merged.hi = p.hi.clone();
            }
            end += 1;
        }
        self.parts.splice(start..end, core::iter::once(merged));
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = self.clone();
        for iv in &other.parts {
            out.insert(iv.clone());
        }
        out
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.parts.iter()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total_length(&self) -> Dyadic {
        self.parts.iter().fold(Dyadic::zero(), |acc, p| &acc + &p.length())
    }

    pub fn contains(&self, s: &Dyadic) -> bool {
        let i = self.parts.partition_point(|p| p.hi <= *s);
        self.parts.get(i).is_some_and(|p| p.contains(s))
    }

    pub fn contains_interval(&self, iv: &Interval) -> bool {
        let i = self.parts.partition_point(|p| p.hi <= iv.lo);
        self.parts.get(i).is_some_and(|p| p.contains_interval(iv))
    }

    /// Every interval of `self` lies inside a single interval of `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.parts.iter().all(|p| other.contains_interval(p))
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalUnion {
        Self { parts: self.parts.iter().filter_map(|p| p.intersect(iv)).collect() }
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            if let Some(x) = a.intersect(b) {
                parts.push(x);
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts }
    }

    pub fn intersection_length(&self, other: &IntervalUnion) -> Dyadic {
        self.intersection(other).total_length()
    }

    /// Restriction to `(lo, hi)`.
    pub fn clip(&self, lo: &Dyadic, hi: &Dyadic) -> IntervalUnion {
        match Interval::new(lo.clone(), hi.clone()) {
            Ok(window) => self.intersect_interval(&window),
            Err(_) => IntervalUnion::new(),
        }
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.parts.iter()).finish()
    }
}

impl FromIterator<Interval> for IntervalUnion {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        Self::from_intervals(iter)
    }
}

/// Lebesgue measure of a union of open intervals given as endpoint pairs.
pub fn interval_union_length(intervals: &[(Dyadic, Dyadic)]) -> Result<Dyadic> {
    let mut u = IntervalUnion::new();
    for (lo, hi) in intervals {
        u.insert(Interval::new(lo.clone(), hi.clone())?);
    }
    Ok(u.total_length())
}
