//! Timestamped scalar series, the unit of report emission.

use serde::{Deserialize, Serialize};

use crate::model::Timestamp;

/// One named metric over time. Points are strictly increasing in time with
/// at most one point per window; windows a metric could not be computed for
/// are simply absent (a gap), never coerced to a placeholder value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    name: String,
    points: Vec<(Timestamp, f64)>,
}

impl MetricSeries {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            points: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Appends a point. Panics if `ts` does not advance the series; callers
    /// emit one point per window in window order.
    pub fn push(&mut self, ts: Timestamp, value: f64) {
        if let Some(&(last, _)) = self.points.last() {
            assert!(
                ts > last,
                "series `{}`: point at {ts} does not advance past {last}",
                self.name
            );
        }
        self.points.push((ts, value));
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(Timestamp, f64)] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = (Timestamp, f64)> + '_ {
        self.points.iter().copied()
    }

    pub fn value_at(&self, ts: Timestamp) -> Option<f64> {
        self.points
            .binary_search_by_key(&ts, |&(t, _)| t)
            .ok()
            .map(|i| self.points[i].1)
    }

    pub fn last(&self) -> Option<(Timestamp, f64)> {
        self.points.last().copied()
    }

    /// Pairs of values at timestamps both series carry (inner join).
    pub fn inner_join(&self, other: &MetricSeries) -> Vec<(f64, f64)> {
        let mut joined = Vec::new();
        let mut right = other.points.iter().peekable();
        for &(ts, a) in &self.points {
            while let Some(&&(rts, _)) = right.peek() {
                if rts < ts {
                    right.next();
                } else {
                    break;
                }
            }
            if let Some(&&(rts, b)) = right.peek() {
                if rts == ts {
                    joined.push((a, b));
                }
            }
        }
        joined
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: i64) -> Timestamp {
        Timestamp::from_nanos(n)
    }

    #[test]
    fn push_keeps_time_strictly_increasing() {
        let mut s = MetricSeries::new("x");
        s.push(t(1), 1.0);
        s.push(t(5), 2.0);
        assert_eq!(s.len(), 2);
    }

    #[test]
    #[should_panic(expected = "does not advance")]
    fn push_rejects_stale_point() {
        let mut s = MetricSeries::new("x");
        s.push(t(5), 1.0);
        s.push(t(5), 2.0);
    }

    #[test]
    fn inner_join_matches_timestamps() {
        let mut a = MetricSeries::new("a");
        let mut b = MetricSeries::new("b");
        for (ts, v) in [(1, 10.0), (2, 20.0), (4, 40.0)] {
            a.push(t(ts), v);
        }
        for (ts, v) in [(2, 2.0), (3, 3.0), (4, 4.0)] {
            b.push(t(ts), v);
        }
        assert_eq!(a.inner_join(&b), vec![(20.0, 2.0), (40.0, 4.0)]);
    }
}
