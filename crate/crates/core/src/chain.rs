//! Greedy covering chains and the alternating chain coloring.
//!
//! Starting from the interval with the leftmost left endpoint, the chain
//! repeatedly takes, among the intervals whose left endpoint lies inside the
//! current chain interval, the one reaching furthest to the right. Chain
//! members are colored alternately from a palette; everything else gets the
//! dummy color.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coloring::ColoringState;
use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};

/// Chain members ordered by left endpoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Chain {
    pub members: Vec<IntervalId>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, id: IntervalId) -> Option<usize> {
        self.members.iter().position(|&m| m == id)
    }

    pub fn pred(&self, id: IntervalId) -> Option<IntervalId> {
        let p = self.position(id)?;
        p.checked_sub(1).map(|q| self.members[q])
    }

    pub fn succ(&self, id: IntervalId) -> Option<IntervalId> {
        let p = self.position(id)?;
        self.members.get(p + 1).copied()
    }
}

fn by_left(a: &Interval, b: &Interval) -> Ordering {
    a.left
        .total_cmp(&b.left)
        .then(b.right.total_cmp(&a.right))
        .then(a.id.cmp(&b.id))
}

/// Better candidate first: furthest right, then longest, then smaller id.
fn reach_order(a: &Interval, b: &Interval) -> Ordering {
    b.right
        .total_cmp(&a.right)
        .then(a.left.total_cmp(&b.left))
        .then(a.id.cmp(&b.id))
}

/// Partition into maximal groups connected through closed overlaps, each
/// group sorted by left endpoint.
pub fn connected_components(intervals: &[Interval]) -> Vec<Vec<Interval>> {
    let mut sorted = intervals.to_vec();
    sorted.sort_by(by_left);
    let mut out: Vec<Vec<Interval>> = Vec::new();
    let mut reach = f64::NEG_INFINITY;
    for iv in sorted {
        match out.last_mut() {
            Some(cur) if iv.left <= reach => {
                cur.push(iv);
                reach = reach.max(iv.right);
            }
            _ => {
                reach = iv.right;
                out.push(vec![iv]);
            }
        }
    }
    out
}

/// Greedy chain. Meant for one component; on a disconnected input the scan
/// restarts at each new component, yielding the concatenation of the
/// per-component chains.
pub fn build_chain(component: &[Interval]) -> Chain {
    let mut sorted = component.to_vec();
    sorted.sort_by(by_left);
    let mut members = Vec::new();
    let mut next = 0;
    while next < sorted.len() {
        let mut cur = sorted[next];
        next += 1;
        members.push(cur.id);
        loop {
            let mut best: Option<Interval> = None;
            while next < sorted.len() && sorted[next].left <= cur.right {
                let cand = sorted[next];
                next += 1;
                if cand.right > cur.right
                    && best.is_none_or(|b| reach_order(&cand, &b) == Ordering::Less)
                {
                    best = Some(cand);
                }
            }
            match best {
                Some(b) => {
                    members.push(b.id);
                    cur = b;
                }
                None => break,
            }
        }
    }
    Chain { members }
}

/// Chain members get `palette[position mod len]`, other members of
/// `component` get the dummy color.
pub fn color_chain(
    component: &[Interval],
    chain: &Chain,
    palette: &[Color],
) -> Result<BTreeMap<IntervalId, Color>> {
    if palette.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "chain palette needs at least 2 colors, got {}",
            palette.len()
        )));
    }
    let mut out: BTreeMap<IntervalId, Color> =
        component.iter().map(|iv| (iv.id, Color::Dummy)).collect();
    for (pos, id) in chain.members.iter().enumerate() {
        out.insert(*id, palette[pos % palette.len()]);
    }
    Ok(out)
}

pub const RED: Color = Color::palette(0, 0);
pub const BLUE: Color = Color::palette(0, 1);

/// Static three-color coloring: each component chain-colored red/blue, the
/// rest dummy.
pub fn static_color(intervals: &[Interval]) -> ColoringState {
    let mut state = ColoringState::new();
    for comp in connected_components(intervals) {
        let chain = build_chain(&comp);
        let colors = color_chain(&comp, &chain, &[RED, BLUE]).expect("two-color palette");
        for (id, c) in colors {
            state.set(id, c);
        }
    }
    state.commit(false);
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_conflict_free;

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn components() {
        assert_eq!(
            connected_components(&[iv(0, 0., 1.), iv(1, 2., 3.)]).len(),
            2
        );
        assert_eq!(
            connected_components(&[iv(0, 0., 2.), iv(1, 1., 3.)]).len(),
            1
        );
        assert_eq!(
            connected_components(&[iv(0, 0., 1.), iv(1, 1., 2.)]).len(),
            1
        );
        assert!(connected_components(&[]).is_empty());
    }

    #[test]
    fn single_and_nested() {
        assert_eq!(build_chain(&[iv(7, 0., 1.)]).members, vec![7]);
        let nested = [iv(0, 0., 10.), iv(1, 1., 9.), iv(2, 2., 3.)];
        assert_eq!(build_chain(&nested).members, vec![0]);
        assert!(build_chain(&[]).is_empty());
    }

    #[test]
    fn three_link_chain_alternates() {
        let comp = [
            iv(0, 0., 3.),
            iv(1, 1., 2.),
            iv(2, 2., 6.),
            iv(3, 2.5, 5.),
            iv(4, 5.5, 9.),
        ];
        let chain = build_chain(&comp);
        assert_eq!(chain.members, vec![0, 2, 4]);
        let colors = color_chain(&comp, &chain, &[RED, BLUE]).unwrap();
        assert_eq!(colors[&0], RED);
        assert_eq!(colors[&2], BLUE);
        assert_eq!(colors[&4], RED);
        assert_eq!(colors[&1], Color::Dummy);
        assert_eq!(chain.pred(2), Some(0));
        assert_eq!(chain.succ(2), Some(4));
        assert_eq!(chain.succ(4), None);
    }

    #[test]
    fn palette_too_small() {
        let comp = [iv(0, 0., 1.)];
        assert!(color_chain(&comp, &build_chain(&comp), &[RED]).is_err());
    }

    #[test]
    fn static_disjoint_all_red() {
        let set: Vec<_> = (0..5)
            .map(|k| iv(k, 3. * k as f64, 3. * k as f64 + 1.))
            .collect();
        let s = static_color(&set);
        assert!(s.assignment().values().all(|&c| c == RED));
        assert!(is_conflict_free(&set, s.assignment()).unwrap().is_ok());
        assert_eq!(static_color(&[]).colors_in_use().len(), 0);
    }
}
