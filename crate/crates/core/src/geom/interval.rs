//! Angular-interval arithmetic on the unit circle. Used to subtract the
//! portions of a ball's bounding circle covered by its neighbors, leaving the
//! arcs that lie on the boundary of the union.

use super::{normalize_angle, TAU};
use serde::{Deserialize, Serialize};

/// Interval endpoints closer than this (radians) are merged, so floating-point
/// noise cannot create sliver arcs.
pub const ANGLE_MERGE_TOL: f64 = 1e-9;

/// A set of pairwise-disjoint angular intervals on the circle, kept sorted and
/// normalized. Each stored interval satisfies `0 <= start < 2*pi`,
/// `start < end <= 2*pi`; an interval wrapping through zero is stored split.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AngularIntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl AngularIntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full_circle() -> Self {
        Self {
            intervals: vec![(0.0, TAU)],
        }
    }

    /// Add the CCW interval starting at `start` with the given span.
    /// Spans >= 2*pi mark the whole circle.
    pub fn add(&mut self, start: f64, span: f64) {
        if span <= 0.0 {
            return;
        }
        if span >= TAU - ANGLE_MERGE_TOL {
            self.intervals = vec![(0.0, TAU)];
            self.merge();
            return;
        }
        let s = normalize_angle(start);
        let e = s + span;
        if e <= TAU {
            self.intervals.push((s, e));
        } else {
            self.intervals.push((s, TAU));
            self.intervals.push((0.0, e - TAU));
        }
        self.merge();
    }

    fn merge(&mut self) {
        if self.intervals.is_empty() {
            return;
        }
        self.intervals
            .sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len());
        for &(s, e) in &self.intervals {
            match merged.last_mut() {
                Some(last) if s <= last.1 + ANGLE_MERGE_TOL => {
                    last.1 = last.1.max(e);
                }
                _ => merged.push((s, e)),
            }
        }
        // Wrap-around contact between the final and first interval.
        if merged.len() > 1 {
            let first = merged[0];
            let last = *merged.last().expect("nonempty");
            if last.1 >= TAU - ANGLE_MERGE_TOL && first.0 <= ANGLE_MERGE_TOL {
                // Contiguous across zero; representation stays split, which is
                // fine for measure and complement.
            }
        }
        self.intervals = merged;
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn covers_circle(&self) -> bool {
        (TAU - self.measure()).abs() <= 16.0 * ANGLE_MERGE_TOL
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(s, e)| e - s).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = normalize_angle(theta);
        self.intervals.iter().any(|&(s, e)| t >= s && t <= e)
    }

    /// Intervals as `(start, end)` pairs with `end <= 2*pi`.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Complement on the circle, as disjoint intervals. Endpoints within
    /// [`ANGLE_MERGE_TOL`] collapse, so covered circles yield an empty set.
    pub fn complement(&self) -> AngularIntervalSet {
        if self.intervals.is_empty() {
            return AngularIntervalSet::full_circle();
        }
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(s, e) in &self.intervals {
            if s > cursor + ANGLE_MERGE_TOL {
                out.push((cursor, s));
            }
            cursor = cursor.max(e);
        }
        if cursor < TAU - ANGLE_MERGE_TOL {
            out.push((cursor, TAU));
        }
        // Stitch a gap that wraps through zero into one logical interval: the
        // representation stays split, so nothing to do beyond keeping order.
        AngularIntervalSet { intervals: out }
    }

    /// Union with another set.
    pub fn union(&self, other: &AngularIntervalSet) -> AngularIntervalSet {
        let mut out = self.clone();
        out.intervals.extend_from_slice(&other.intervals);
        out.merge();
        out
    }

    /// Disjoint maximal intervals in "logical" form: wrap-through-zero gaps are
    /// re-joined, so each entry is `(start, span)` with `start` in `[0, 2*pi)`.
    pub fn logical_intervals(&self) -> Vec<(f64, f64)> {
        if self.intervals.is_empty() {
            return Vec::new();
        }
        if self.covers_circle() && self.intervals.len() == 1 {
            return vec![(0.0, TAU)];
        }
        let mut parts = self.intervals.clone();
        // Join a trailing interval ending at 2*pi with a leading one at 0.
        if parts.len() >= 2 {
            let last = *parts.last().expect("nonempty");
            let first = parts[0];
            if last.1 >= TAU - ANGLE_MERGE_TOL && first.0 <= ANGLE_MERGE_TOL {
                parts.pop();
                parts[0] = (last.0, first.1 + TAU);
            }
        }
        parts
            .into_iter()
            .map(|(s, e)| (normalize_angle(s), e - s))
            .collect()
    }
}

/// Complement of a union of covering intervals on a circle: the uncovered
/// portion as disjoint intervals. An empty result means the circle is fully
/// covered; an empty cover returns the full circle.
pub fn subtract_angular_cover(cover: &AngularIntervalSet) -> AngularIntervalSet {
    cover.complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn half_cover_leaves_half() {
        let mut cover = AngularIntervalSet::new();
        cover.add(0.0, PI);
        let rest = subtract_angular_cover(&cover);
        assert_eq!(rest.intervals().len(), 1);
        let (s, e) = rest.intervals()[0];
        assert!((s - PI).abs() < 1e-12);
        assert!((e - TAU).abs() < 1e-12);
    }

    #[test]
    fn empty_cover_gives_full_circle() {
        let rest = subtract_angular_cover(&AngularIntervalSet::new());
        assert!(rest.covers_circle());
        assert!((rest.measure() - TAU).abs() < 1e-12);
    }

    #[test]
    fn full_cover_gives_empty() {
        let mut cover = AngularIntervalSet::new();
        cover.add(1.0, TAU);
        let rest = subtract_angular_cover(&cover);
        assert!(rest.is_empty());
    }

    #[test]
    fn wrapping_interval_splits_and_measures() {
        let mut set = AngularIntervalSet::new();
        set.add(5.5, 2.0); // wraps through zero
        assert!((set.measure() - 2.0).abs() < 1e-12);
        assert!(set.contains(5.6));
        assert!(set.contains(0.5));
        assert!(!set.contains(3.0));
        let logical = set.logical_intervals();
        assert_eq!(logical.len(), 1);
        assert!((logical[0].0 - 5.5).abs() < 1e-12);
        assert!((logical[0].1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_cover_complement_matches_rasterization() {
        // Deterministic pseudo-random intervals; oracle rasterizes membership
        // at 10^4 angles and compares measures.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let mut cover = AngularIntervalSet::new();
            for _ in 0..20 {
                cover.add(next() * TAU, next() * 1.2);
            }
            let rest = cover.complement();
            let m = 10_000;
            let mut uncovered = 0usize;
            for k in 0..m {
                let theta = (k as f64 + 0.5) / m as f64 * TAU;
                if !cover.contains(theta) {
                    uncovered += 1;
                }
            }
            let raster = uncovered as f64 / m as f64 * TAU;
            assert!(
                (rest.measure() - raster).abs() < TAU * 1e-3,
                "measure {} vs raster {}",
                rest.measure(),
                raster
            );
        }
    }

    proptest! {
        #[test]
        fn complement_union_reproduces_circle(
            starts in proptest::collection::vec(0.0..TAU, 0..12),
            spans in proptest::collection::vec(1e-6..3.0f64, 0..12),
        ) {
            let mut cover = AngularIntervalSet::new();
            for (s, w) in starts.iter().zip(spans.iter()) {
                cover.add(*s, *w);
            }
            let rest = cover.complement();
            let whole = cover.union(&rest);
            prop_assert!((whole.measure() - TAU).abs() < 1e-9);
        }
    }
}
