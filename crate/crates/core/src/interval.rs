//! Finite unions of compact real intervals and affine normalization.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("interval union is empty")]
    EmptySet,
    #[error("intervals are not in increasing order: [{0}, {1}] before [{2}, {3}]")]
    UnorderedIntervals(f64, f64, f64, f64),
    #[error("intervals overlap or touch: [{0}, {1}] and [{2}, {3}]")]
    OverlappingIntervals(f64, f64, f64, f64),
    #[error("degenerate interval [{0}, {0}]")]
    DegenerateInterval(f64),
    #[error("interval endpoint is not finite")]
    NonFiniteEndpoint,
}

/// A union of `L >= 1` compact intervals `[a_1, b_1] ∪ ... ∪ [a_L, b_L]`
/// with `a_1 < b_1 < a_2 < ... < a_L < b_L`.
///
/// Touching intervals (`b_i == a_{i+1}`) are rejected rather than merged:
/// the gap constraints of the restricted minimax problem assume every gap
/// has positive width, so changing `L` silently would be worse than failing.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Validates a list of interval pairs. Input may be unsorted; it is
    /// sorted by left endpoint before the strict-ordering check.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self, IntervalError> {
        if raw.is_empty() {
            return Err(IntervalError::EmptySet);
        }
        let mut intervals = raw.to_vec();
        for &(a, b) in &intervals {
            if !a.is_finite() || !b.is_finite() {
                return Err(IntervalError::NonFiniteEndpoint);
            }
            if a == b {
                return Err(IntervalError::DegenerateInterval(a));
            }
            if a > b {
                return Err(IntervalError::UnorderedIntervals(a, b, a, b));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in intervals.windows(2) {
            let (a0, b0) = w[0];
            let (a1, b1) = w[1];
            if b0 >= a1 {
                return Err(IntervalError::OverlappingIntervals(a0, b0, a1, b1));
            }
        }
        Ok(Self { intervals })
    }

    /// The interval `[a, b]`.
    pub fn segment(a: f64, b: f64) -> Result<Self, IntervalError> {
        Self::new(&[(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Number of intervals `L`.
    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    /// `(a_1, b_L)`.
    pub fn hull(&self) -> (f64, f64) {
        (self.intervals[0].0, self.intervals[self.intervals.len() - 1].1)
    }

    /// The `L - 1` open gaps `(b_i, a_{i+1})`, in order.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].1, w[1].0))
            .collect()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }

    pub fn min_length(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| b - a)
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership with a tolerance band of `tol` beyond each endpoint.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| x >= a - tol && x <= b + tol)
    }

    /// Whether the whole union lies within `[-1, 1]` (up to a small slack
    /// for endpoints that should be exactly ±1).
    pub fn within_unit(&self) -> bool {
        let (a, b) = self.hull();
        a >= -1.0 - 1e-12 && b <= 1.0 + 1e-12
    }

    /// Affine map of the hull onto `[-1, 1]`, applied to every endpoint.
    /// The outer endpoints of the result are exactly -1 and 1.
    pub fn normalize(&self) -> (IntervalUnion, AffineMap) {
        let (a, b) = self.hull();
        let map = AffineMap::onto_unit(a, b);
        let mut intervals: Vec<(f64, f64)> = self
            .intervals
            .iter()
            .map(|&(x, y)| (map.apply(x), map.apply(y)))
            .collect();
        let last = intervals.len() - 1;
        intervals[0].0 = -1.0;
        intervals[last].1 = 1.0;
        (IntervalUnion { intervals }, map)
    }
}

/// Invertible map `x -> scale * x + shift` with `scale > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub shift: f64,
}

impl AffineMap {
    pub fn identity() -> Self {
        Self { scale: 1.0, shift: 0.0 }
    }

    /// The map sending `[a, b]` onto `[-1, 1]`.
    pub fn onto_unit(a: f64, b: f64) -> Self {
        let scale = 2.0 / (b - a);
        let shift = -(a + b) / (b - a);
        Self { scale, shift }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap {
            scale: 1.0 / self.scale,
            shift: -self.shift / self.scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_intervals_valid() {
        let k = IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap();
        assert_eq!(k.count(), 3);
        assert_eq!(k.hull(), (-1.0, 1.0));
    }

    #[test]
    fn single_interval_valid() {
        let k = IntervalUnion::new(&[(-1.0, 1.0)]).unwrap();
        assert_eq!(k.count(), 1);
        assert!(k.gaps().is_empty());
    }

    #[test]
    fn overlap_rejected() {
        let e = IntervalUnion::new(&[(0.0, 0.5), (0.4, 1.0)]).unwrap_err();
        assert!(matches!(e, IntervalError::OverlappingIntervals(..)));
    }

    #[test]
    fn touching_rejected() {
        let e = IntervalUnion::new(&[(0.0, 0.5), (0.5, 1.0)]).unwrap_err();
        assert!(matches!(e, IntervalError::OverlappingIntervals(..)));
    }

    #[test]
    fn empty_and_degenerate_rejected() {
        assert!(matches!(IntervalUnion::new(&[]), Err(IntervalError::EmptySet)));
        assert!(matches!(
            IntervalUnion::new(&[(0.3, 0.3)]),
            Err(IntervalError::DegenerateInterval(_))
        ));
    }

    #[test]
    fn unsorted_input_is_sorted() {
        let k = IntervalUnion::new(&[(0.5, 1.0), (-1.0, -0.5)]).unwrap();
        assert_eq!(k.intervals()[0], (-1.0, -0.5));
    }

    #[test]
    fn normalize_examples() {
        // [(0,1),(2,4)] -> [(-1,-0.5),(0,1)] with x -> (2x-4)/4
        let k = IntervalUnion::new(&[(0.0, 1.0), (2.0, 4.0)]).unwrap();
        let (n, map) = k.normalize();
        assert_eq!(n.intervals(), &[(-1.0, -0.5), (0.0, 1.0)]);
        assert!((map.apply(1.0) - (-0.5)).abs() < 1e-15);

        let k = IntervalUnion::new(&[(-1.0, 1.0)]).unwrap();
        let (n, map) = k.normalize();
        assert_eq!(n.intervals(), &[(-1.0, 1.0)]);
        assert_eq!(map, AffineMap::identity());

        let k = IntervalUnion::new(&[(-2.0, -1.0), (1.0, 2.0)]).unwrap();
        let (n, map) = k.normalize();
        assert_eq!(n.intervals(), &[(-1.0, -0.5), (0.5, 1.0)]);
        assert!((map.scale - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalize_round_trip() {
        let k = IntervalUnion::new(&[(0.1, 0.7), (1.3, 2.9), (3.0, 5.5)]).unwrap();
        let (_, map) = k.normalize();
        let inv = map.inverse();
        for &(a, b) in k.intervals() {
            for x in [a, b] {
                let back = inv.apply(map.apply(x));
                assert!((back - x).abs() <= 1e-14 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn gaps_of_fig1_sets() {
        let k1 = IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap();
        assert_eq!(k1.gaps(), vec![(-0.5, -0.2), (0.2, 0.5)]);

        let k2 = IntervalUnion::new(&[(-1.0, -0.5), (0.1, 0.2), (2.0 / 3.0, 1.0)]).unwrap();
        assert_eq!(k2.gaps(), vec![(-0.5, 0.1), (0.2, 2.0 / 3.0)]);
    }

    #[test]
    fn gap_count_and_positivity() {
        let k = IntervalUnion::new(&[(-1.0, -0.6), (-0.5, 0.0), (0.2, 0.3), (0.4, 1.0)]).unwrap();
        let gaps = k.gaps();
        assert_eq!(gaps.len(), k.count() - 1);
        assert!(gaps.iter().all(|&(lo, hi)| hi > lo));
    }
}
