//! Insertion-only greedy coloring of nested intervals.
//!
//! A new interval contained in a live one gets the dummy color. Otherwise it
//! becomes a root of the containment forest and takes the smallest color
//! `c ≥ 1` that keeps the coloring conflict-free.
//!
//! Feasibility of `c` is decided exactly without sweeping: every point sees
//! a root-to-node path of the forest, so per node we keep the set of
//! `(once, multi)` color masks over all points of its subtree. Adding `c` on
//! top breaks a point only if `c` was the single color occurring once there.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use ordered_float::OrderedFloat;

use crate::coloring::{ColoringState, UpdateReport};
use crate::engine::ColoringEngine;
use crate::error::{Error, Result};
use crate::interval::{Color, Coord, Interval, IntervalId};

/// Colors occurring exactly once and more than once along a path.
type PathState = (u64, u64);

fn push(c: u32, (once, multi): PathState) -> PathState {
    if c == 0 {
        return (once, multi);
    }
    let bit = 1u64 << c;
    if multi & bit != 0 {
        (once, multi)
    } else if once & bit != 0 {
        (once & !bit, multi | bit)
    } else {
        (once | bit, multi)
    }
}

/// Greedy color `c` as published: dummy for 0, `Palette(0, c)` otherwise.
pub fn greedy_color(c: u32) -> Color {
    if c == 0 {
        Color::Dummy
    } else {
        Color::palette(0, c)
    }
}

#[derive(Debug, Clone)]
struct ForestNode {
    color: u32,
    children: BTreeMap<(Coord, IntervalId), IntervalId>,
    size: usize,
    states: BTreeSet<PathState>,
}

#[derive(Debug, Clone, Default)]
pub struct GreedyNested {
    live: BTreeMap<IntervalId, Interval>,
    nodes: HashMap<IntervalId, ForestNode>,
    roots: BTreeMap<(Coord, IntervalId), IntervalId>,
    state: ColoringState,
    /// Subtree size (covered intervals + 1) of each interval when colored.
    covered_at_assignment: BTreeMap<IntervalId, usize>,
}

/// Where a new interval goes: under `parent` (a root if `None`), adopting
/// the siblings in `adopt`; `path` lists every ancestor.
struct Placement {
    parent: Option<IntervalId>,
    path: Vec<IntervalId>,
    adopt: Vec<(Coord, IntervalId)>,
}

impl GreedyNested {
    pub fn new() -> Self {
        Self::default()
    }

    /// Greedy label of `id` (0 = dummy).
    pub fn label(&self, id: IntervalId) -> Option<u32> {
        self.nodes.get(&id).map(|n| n.color)
    }

    /// Distinct non-dummy labels in use.
    pub fn palette_size(&self) -> usize {
        self.nodes
            .values()
            .filter(|n| n.color > 0)
            .map(|n| n.color)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Number of live intervals covered by `id` when it received its color.
    pub fn covered_when_colored(&self, id: IntervalId) -> Option<usize> {
        self.covered_at_assignment.get(&id).map(|s| s - 1)
    }

    fn siblings(&self, parent: Option<IntervalId>) -> &BTreeMap<(Coord, IntervalId), IntervalId> {
        match parent {
            Some(p) => &self.nodes[&p].children,
            None => &self.roots,
        }
    }

    fn place(&self, iv: &Interval) -> Result<Placement> {
        let mut parent = None;
        let mut path = Vec::new();
        'descend: loop {
            let sibs = self.siblings(parent);
            let lo = sibs
                .range(..(OrderedFloat(iv.left), IntervalId::MAX))
                .next_back()
                .map(|(k, _)| *k);
            let mut hits: Vec<(Coord, IntervalId)> = Vec::new();
            if let Some(k) = lo {
                if self.live[&k.1].right >= iv.left {
                    hits.push(k);
                }
            }
            let start = (OrderedFloat(iv.left), IntervalId::MAX);
            for (k, _) in sibs.range(start..=(OrderedFloat(iv.right), IntervalId::MAX)) {
                if !hits.contains(k) {
                    hits.push(*k);
                }
            }
            let mut adopt = Vec::new();
            for k in hits {
                let other = self.live[&k.1];
                if other.contains(iv) {
                    parent = Some(k.1);
                    path.push(k.1);
                    continue 'descend;
                }
                if iv.contains(&other) {
                    adopt.push(k);
                } else {
                    return Err(Error::NotNested {
                        id: iv.id,
                        other: other.id,
                    });
                }
            }
            return Ok(Placement {
                parent,
                path,
                adopt,
            });
        }
    }

    fn has_exclusive_point(
        &self,
        iv: &Interval,
        children: &BTreeMap<(Coord, IntervalId), IntervalId>,
    ) -> bool {
        !children.values().any(|c| {
            let c = &self.live[c];
            c.left == iv.left && c.right == iv.right
        })
    }
}

impl ColoringEngine for GreedyNested {
    fn name(&self) -> String {
        "greedy-nested".into()
    }

    fn insert(&mut self, iv: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&iv.id) {
            return Err(Error::DuplicateId(iv.id));
        }
        let Placement {
            parent,
            path,
            adopt,
        } = self.place(&iv)?;
        self.live.insert(iv.id, iv);
        let mut children = BTreeMap::new();
        for k in &adopt {
            let removed = match parent {
                Some(p) => self.nodes.get_mut(&p).unwrap().children.remove(k),
                None => self.roots.remove(k),
            };
            children.insert(*k, removed.expect("adopted sibling"));
        }
        let below: BTreeSet<PathState> = children
            .values()
            .flat_map(|c| self.nodes[c].states.iter().copied())
            .collect();
        let color = if parent.is_some() {
            0
        } else {
            let forbidden: u64 = below
                .iter()
                .filter(|(once, _)| once.count_ones() == 1)
                .fold(0, |acc, (once, _)| acc | once);
            let c = (1..64).find(|c| forbidden & (1u64 << c) == 0);
            c.ok_or_else(|| Error::Internal("greedy palette exceeds 63 colors".into()))?
        };
        let mut states: BTreeSet<PathState> = below.iter().map(|&s| push(color, s)).collect();
        if self.has_exclusive_point(&iv, &children) {
            states.insert(push(color, (0, 0)));
        }
        let size = 1 + children.values().map(|c| self.nodes[c].size).sum::<usize>();
        if color > 0 {
            let need = (1usize << (color - 1)) - 1;
            if size - 1 < need {
                return Err(Error::Internal(format!(
                    "color {color} given to interval {} covering only {} others",
                    iv.id,
                    size - 1
                )));
            }
        }
        self.nodes.insert(
            iv.id,
            ForestNode {
                color,
                children,
                size,
                states,
            },
        );
        let key = (OrderedFloat(iv.left), iv.id);
        match parent {
            Some(p) => {
                self.nodes.get_mut(&p).unwrap().children.insert(key, iv.id);
            }
            None => {
                self.roots.insert(key, iv.id);
            }
        }
        for a in path {
            self.nodes.get_mut(&a).unwrap().size += 1;
        }
        self.covered_at_assignment.insert(iv.id, size);
        self.state.set(iv.id, greedy_color(color));
        Ok(self.state.commit(false))
    }

    fn delete(&mut self, _id: IntervalId) -> Result<UpdateReport> {
        Err(Error::Unsupported {
            engine: self.name(),
            what: "deletion (insertion-only setting)".into(),
        })
    }

    fn coloring(&self) -> &ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }
}

/// `[-1, 1], [-2, 2], …, [-n, n]`, with ids `0..n`.
pub fn nested_lowerbound_instance(n: usize) -> Vec<Interval> {
    (1..=n)
        .map(|i| Interval::new(i as IntervalId - 1, -(i as f64), i as f64).expect("valid"))
        .collect()
}
