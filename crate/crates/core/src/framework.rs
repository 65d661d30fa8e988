//! Shared pieces of the level-palette framework used by the tree engines:
//! extreme-interval selection per key slot and chain coloring of a node's
//! extremes with that node's two level colors.

use std::collections::{BTreeMap, BTreeSet};

use crate::chain::{build_chain, color_chain, connected_components};
use crate::coloring::ColoringState;
use crate::interval::{Color, Interval, IntervalId};

pub fn level_palette(level: u32) -> [Color; 2] {
    [Color::palette(level, 0), Color::palette(level, 1)]
}

/// Left/right extremes of one slot, updated one member at a time.
#[derive(Debug, Clone, Copy, Default)]
pub struct SlotExtremes {
    pub left: Option<Interval>,
    pub right: Option<Interval>,
}

impl SlotExtremes {
    pub fn offer(&mut self, iv: &Interval) {
        let better_left = self.left.is_none_or(|l| (iv.left, iv.id) < (l.left, l.id));
        if better_left {
            self.left = Some(*iv);
        }
        let better_right = self
            .right
            .is_none_or(|r| iv.right > r.right || (iv.right == r.right && iv.id < r.id));
        if better_right {
            self.right = Some(*iv);
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = IntervalId> {
        let l = self.left.map(|i| i.id);
        let r = self.right.map(|i| i.id).filter(|&r| Some(r) != l);
        l.into_iter().chain(r)
    }
}

/// The set of extreme intervals over all slots of a node.
pub fn node_extremes<'a>(members: impl Iterator<Item = (usize, &'a Interval)>) -> Vec<Interval> {
    let mut slots: BTreeMap<usize, SlotExtremes> = BTreeMap::new();
    for (slot, iv) in members {
        slots.entry(slot).or_default().offer(iv);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in slots.values() {
        for iv in [s.left, s.right].into_iter().flatten() {
            if seen.insert(iv.id) {
                out.push(iv);
            }
        }
    }
    out
}

/// Chain-colors `extremes` with the level's two colors and sets every id in
/// `others` to dummy. Each component picks whichever of the two alternations
/// changes fewer existing colors. Returns the number of ids whose color
/// changed from a previous color.
pub fn recolor_node(
    state: &mut ColoringState,
    extremes: &[Interval],
    others: impl IntoIterator<Item = IntervalId>,
    level: u32,
) -> usize {
    let [a, b] = level_palette(level);
    let mut changed = 0;
    let mut apply = |state: &mut ColoringState, id: IntervalId, c: Color| {
        let before = state.get(id);
        if before != Some(c) {
            if before.is_some() {
                changed += 1;
            }
            state.set(id, c);
        }
    };
    for comp in connected_components(extremes) {
        let chain = build_chain(&comp);
        let first = color_chain(&comp, &chain, &[a, b]).expect("two colors");
        let second = color_chain(&comp, &chain, &[b, a]).expect("two colors");
        let cost = |m: &BTreeMap<IntervalId, Color>| {
            m.iter()
                .filter(|(id, c)| state.get(**id) != Some(**c))
                .count()
        };
        let pick = if cost(&second) < cost(&first) {
            second
        } else {
            first
        };
        for (id, c) in pick {
            apply(state, id, c);
        }
    }
    for id in others {
        apply(state, id, Color::Dummy);
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_conflict_free;

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn extremes_per_slot() {
        let a = iv(0, 0., 5.);
        let b = iv(1, 1., 9.);
        let c = iv(2, 2., 4.);
        let d = iv(3, 20., 21.);
        let members = [(0, &a), (0, &b), (0, &c), (1, &d)];
        let ex: Vec<u64> = node_extremes(members.into_iter())
            .iter()
            .map(|i| i.id)
            .collect();
        assert_eq!(ex, vec![0, 1, 3]);
    }

    #[test]
    fn recolor_prefers_fewer_changes() {
        let mut s = ColoringState::new();
        let set = [iv(0, 0., 2.), iv(1, 1., 4.), iv(2, 3., 6.)];
        s.set(0, Color::palette(2, 1));
        s.set(1, Color::palette(2, 0));
        s.set(2, Color::palette(2, 1));
        s.commit(false);
        let changed = recolor_node(&mut s, &set, [], 2);
        assert_eq!(changed, 0);
        assert!(is_conflict_free(&set, s.assignment()).unwrap().is_ok());
    }
}
