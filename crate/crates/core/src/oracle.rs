//! Brute-force conflict-freeness checks over the endpoint arrangement.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Ok,
    Violation { witness: f64 },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

fn sorted_coords(intervals: &[Interval]) -> Vec<f64> {
    let mut xs: Vec<f64> = intervals.iter().flat_map(|i| [i.left, i.right]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// One representative point per cell of the endpoint arrangement: every
/// endpoint, one point inside each gap between consecutive endpoints, and
/// one point on either unbounded side.
pub fn elementary_regions(intervals: &[Interval]) -> Vec<f64> {
    let xs = sorted_coords(intervals);
    let (Some(&first), Some(&last)) = (xs.first(), xs.last()) else {
        return Vec::new();
    };
    let mut reps = Vec::with_capacity(2 * xs.len() + 1);
    reps.push(first - 1.0);
    for (k, &x) in xs.iter().enumerate() {
        reps.push(x);
        if let Some(&next) = xs.get(k + 1) {
            reps.push(x + (next - x) / 2.0);
        }
    }
    reps.push(last + 1.0);
    reps
}

pub fn stabbing_set(intervals: &[Interval], q: f64) -> BTreeSet<IntervalId> {
    intervals
        .iter()
        .filter(|i| i.contains_point(q))
        .map(|i| i.id)
        .collect()
}

fn color_of(assignment: &dyn Fn(IntervalId) -> Option<Color>, id: IntervalId) -> Result<Color> {
    assignment(id).ok_or(Error::MissingColor(id))
}

/// True iff some non-dummy color occurs exactly once among `colors`, or the
/// slice is empty.
pub fn has_unique_color(colors: &[Color]) -> bool {
    if colors.is_empty() {
        return true;
    }
    let mut counts: HashMap<Color, usize> = HashMap::new();
    for c in colors.iter().filter(|c| !c.is_dummy()) {
        *counts.entry(*c).or_default() += 1;
    }
    counts.values().any(|&n| n == 1)
}

/// Sweep-line check. Witnesses inside open cells are preferred over
/// witnesses sitting on an endpoint.
pub fn is_conflict_free_with(
    intervals: &[Interval],
    assignment: &dyn Fn(IntervalId) -> Option<Color>,
) -> Result<Verdict> {
    let mut starts: Vec<(f64, Color)> = Vec::with_capacity(intervals.len());
    let mut ends: Vec<(f64, Color)> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        let c = color_of(assignment, iv.id)?;
        starts.push((iv.left, c));
        ends.push((iv.right, c));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    ends.sort_by(|a, b| a.0.total_cmp(&b.0));
    let xs = sorted_coords(intervals);

    let mut counts: HashMap<Color, usize> = HashMap::new();
    let mut unique = 0usize;
    let mut live = 0usize;
    let (mut si, mut ei) = (0, 0);
    let mut endpoint_witness = None;

    let bump = |counts: &mut HashMap<Color, usize>, unique: &mut usize, c: Color, add: bool| {
        if c.is_dummy() {
            return;
        }
        let n = counts.entry(c).or_default();
        let before = *n;
        if add {
            *n += 1;
        } else {
            *n -= 1;
        }
        match (before, *n) {
            (1, _) => *unique -= 1,
            (_, 1) => *unique += 1,
            _ => {}
        }
    };

    for (k, &x) in xs.iter().enumerate() {
        while si < starts.len() && starts[si].0 == x {
            bump(&mut counts, &mut unique, starts[si].1, true);
            live += 1;
            si += 1;
        }
        if live > 0 && unique == 0 && endpoint_witness.is_none() {
            endpoint_witness = Some(x);
        }
        while ei < ends.len() && ends[ei].0 == x {
            bump(&mut counts, &mut unique, ends[ei].1, false);
            live -= 1;
            ei += 1;
        }
        if live > 0 && unique == 0 {
            let next = xs[k + 1];
            return Ok(Verdict::Violation {
                witness: x + (next - x) / 2.0,
            });
        }
    }
    Ok(match endpoint_witness {
        Some(w) => Verdict::Violation { witness: w },
        None => Verdict::Ok,
    })
}

pub fn is_conflict_free(
    intervals: &[Interval],
    assignment: &std::collections::BTreeMap<IntervalId, Color>,
) -> Result<Verdict> {
    is_conflict_free_with(intervals, &|id| assignment.get(&id).copied())
}

/// Direct evaluation of every elementary region; quadratic, used as a
/// second route against the sweep.
pub fn check_by_regions(
    intervals: &[Interval],
    assignment: &dyn Fn(IntervalId) -> Option<Color>,
) -> Result<Verdict> {
    for iv in intervals {
        color_of(assignment, iv.id)?;
    }
    for q in elementary_regions(intervals) {
        let colors: Vec<Color> = intervals
            .iter()
            .filter(|i| i.contains_point(q))
            .map(|i| assignment(i.id).unwrap())
            .collect();
        if !has_unique_color(&colors) {
            return Ok(Verdict::Violation { witness: q });
        }
    }
    Ok(Verdict::Ok)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn regions_empty_and_single() {
        assert!(elementary_regions(&[]).is_empty());
        let r = elementary_regions(&[iv(0, 0.0, 1.0)]);
        assert_eq!(r, vec![-1.0, 0.0, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn regions_cover_stabbing_sets() {
        let set = [iv(0, 0.0, 2.0), iv(1, 1.0, 3.0)];
        let reached: BTreeSet<BTreeSet<u64>> = elementary_regions(&set)
            .into_iter()
            .map(|q| stabbing_set(&set, q))
            .collect();
        let expected: BTreeSet<BTreeSet<u64>> = [vec![], vec![0], vec![0, 1], vec![1]]
            .into_iter()
            .map(|v| v.into_iter().collect())
            .collect();
        assert_eq!(reached, expected);
    }

    #[test]
    fn stabbing_closed() {
        let set = [iv(0, 0.0, 2.0), iv(1, 1.0, 3.0)];
        assert_eq!(stabbing_set(&set, 1.5).len(), 2);
        assert_eq!(stabbing_set(&set, 1.0).len(), 2);
        assert!(stabbing_set(&set, 5.0).is_empty());
    }

    #[test]
    fn empty_is_ok() {
        assert!(is_conflict_free(&[], &BTreeMap::new()).unwrap().is_ok());
    }

    #[test]
    fn same_color_overlap_violates_inside_cell() {
        let set = [iv(0, 0.0, 2.0), iv(1, 1.0, 3.0)];
        let a: BTreeMap<_, _> = [(0, Color::palette(0, 0)), (1, Color::palette(0, 0))].into();
        assert_eq!(
            is_conflict_free(&set, &a).unwrap(),
            Verdict::Violation { witness: 1.5 }
        );
    }

    #[test]
    fn touching_violation_only_on_endpoint() {
        let set = [iv(0, 0.0, 1.0), iv(1, 1.0, 2.0)];
        let a: BTreeMap<_, _> = [(0, Color::palette(0, 0)), (1, Color::palette(0, 0))].into();
        assert_eq!(
            is_conflict_free(&set, &a).unwrap(),
            Verdict::Violation { witness: 1.0 }
        );
    }

    #[test]
    fn dummy_never_unique() {
        let set = [iv(0, 0.0, 1.0)];
        let a: BTreeMap<_, _> = [(0, Color::Dummy)].into();
        assert!(!is_conflict_free(&set, &a).unwrap().is_ok());
    }

    #[test]
    fn missing_color_is_error() {
        let set = [iv(0, 0.0, 1.0)];
        assert_eq!(
            is_conflict_free(&set, &BTreeMap::new()),
            Err(Error::MissingColor(0))
        );
    }

    #[test]
    fn chain_layout_ok() {
        // four overlapping intervals, chain red/blue/red plus one dummy
        let set = [
            iv(0, 0.0, 3.0),
            iv(1, 2.0, 6.0),
            iv(2, 2.5, 5.0),
            iv(3, 5.5, 9.0),
        ];
        let red = Color::palette(0, 0);
        let blue = Color::palette(0, 1);
        let a: BTreeMap<_, _> = [(0, red), (1, blue), (2, Color::Dummy), (3, red)].into();
        let get = |id| a.get(&id).copied();
        assert!(is_conflict_free(&set, &a).unwrap().is_ok());
        assert!(check_by_regions(&set, &get).unwrap().is_ok());
    }
}
