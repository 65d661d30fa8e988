//! Bounded-universe engines over a static B-tree skeleton on `{0, …, U-1}`.
//!
//! Each interval is stored at the highest node holding a key it contains, in
//! the bucket of the leftmost such key. Per bucket only the left-extreme
//! (leftmost left endpoint) and the right-extreme (rightmost right endpoint)
//! carry palette colors; everything else is dummy. Palette colors are
//! `(level, index)` with `level` the node's height above the leaves, so
//! different levels never share colors.
//!
//! * [`FixedScheme::DistinctColors`]: `4t - 2` colors per level, each extreme
//!   owns a distinct color at its node; at most two recolorings per update.
//! * [`FixedScheme::ChainPerNode`]: two colors per level, the extremes of a
//!   node are chain-colored from scratch after each change.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use ordered_float::OrderedFloat;

use crate::btree_layout;
use crate::coloring::{ColoringState, UpdateReport};
use crate::engine::{Budget, ColoringEngine};
use crate::error::{Error, Result};
use crate::framework::{level_palette, recolor_node};
use crate::interval::{Color, Coord, Interval, IntervalId};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedScheme {
    DistinctColors,
    ChainPerNode,
}

#[derive(Debug, Clone)]
struct SkeletonNode {
    keys: Vec<u64>,
    children: Vec<usize>,
    level: u32,
}

#[derive(Debug, Clone, Default)]
struct Bucket {
    by_left: BTreeSet<(Coord, IntervalId)>,
    by_right: BTreeSet<(Reverse<Coord>, IntervalId)>,
}

impl Bucket {
    fn add(&mut self, iv: &Interval) {
        self.by_left.insert((OrderedFloat(iv.left), iv.id));
        self.by_right
            .insert((Reverse(OrderedFloat(iv.right)), iv.id));
    }

    fn remove(&mut self, iv: &Interval) {
        self.by_left.remove(&(OrderedFloat(iv.left), iv.id));
        self.by_right
            .remove(&(Reverse(OrderedFloat(iv.right)), iv.id));
    }

    fn extremes(&self) -> (Option<IntervalId>, Option<IntervalId>) {
        (
            self.by_left.first().map(|e| e.1),
            self.by_right.first().map(|e| e.1),
        )
    }

    fn is_empty(&self) -> bool {
        self.by_left.is_empty()
    }
}

fn ext_set(e: (Option<IntervalId>, Option<IntervalId>)) -> BTreeSet<IntervalId> {
    e.0.into_iter().chain(e.1).collect()
}

#[derive(Debug, Clone)]
pub struct FixedEngine {
    universe: u64,
    t: usize,
    scheme: FixedScheme,
    nodes: Vec<SkeletonNode>,
    root: usize,
    height: u32,
    live: BTreeMap<IntervalId, Interval>,
    loc: HashMap<IntervalId, (usize, usize)>,
    buckets: BTreeMap<(usize, usize), Bucket>,
    /// Current extremes of each non-empty node.
    node_extremes: HashMap<usize, BTreeSet<IntervalId>>,
    /// Color indices held at each node (DistinctColors only).
    used: HashMap<usize, BTreeSet<u32>>,
    state: ColoringState,
}

impl FixedEngine {
    pub fn new(universe: u64, t: usize, scheme: FixedScheme) -> Result<Self> {
        if universe < 1 {
            return Err(Error::InvalidParameter(
                "universe must be at least 1".into(),
            ));
        }
        if t < 2 || t as u64 > universe.max(2) {
            return Err(Error::InvalidParameter(format!(
                "minimum degree t={t} must satisfy 2 <= t <= U={universe}"
            )));
        }
        let layout = btree_layout::layout(universe as usize, t);
        let nodes = layout
            .nodes
            .into_iter()
            .map(|n| SkeletonNode {
                keys: n.keys.into_iter().map(|k| k as u64).collect(),
                children: n.children,
                level: n.level,
            })
            .collect();
        Ok(FixedEngine {
            universe,
            t,
            scheme,
            nodes,
            root: layout.root,
            height: layout.height,
            live: BTreeMap::new(),
            loc: HashMap::new(),
            buckets: BTreeMap::new(),
            node_extremes: HashMap::new(),
            used: HashMap::new(),
            state: ColoringState::new(),
        })
    }

    pub fn scheme(&self) -> FixedScheme {
        self.scheme
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn tree_height(&self) -> u32 {
        self.height
    }

    /// Palette size per level.
    pub fn level_palette_size(&self) -> usize {
        match self.scheme {
            FixedScheme::DistinctColors => 4 * self.t - 2,
            FixedScheme::ChainPerNode => 2,
        }
    }

    /// `1 + Σ_ℓ |C(ℓ)|`.
    pub fn color_budget(&self) -> usize {
        1 + self.level_palette_size() * (self.height as usize + 1)
    }

    pub fn node_level(&self, node: usize) -> u32 {
        self.nodes[node].level
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn check_universe(&self, iv: &Interval) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x <= (self.universe - 1) as f64 && x.fract() == 0.0;
        if ok(iv.left) && ok(iv.right) {
            Ok(())
        } else {
            Err(Error::OutOfUniverse {
                id: iv.id,
                universe: self.universe,
            })
        }
    }

    /// Highest node holding a key inside `iv`, and the slot of the leftmost
    /// such key.
    pub fn locate(&self, iv: &Interval) -> Result<(usize, usize)> {
        let mut v = self.root;
        loop {
            let node = &self.nodes[v];
            let i = node.keys.partition_point(|&k| (k as f64) < iv.left);
            if i < node.keys.len() && node.keys[i] as f64 <= iv.right {
                return Ok((v, i));
            }
            match node.children.get(i) {
                Some(&c) => v = c,
                None => {
                    return Err(Error::Internal(format!(
                        "interval {} contains no universe point",
                        iv.id
                    )))
                }
            }
        }
    }

    fn node_buckets(&self, v: usize) -> impl Iterator<Item = (&(usize, usize), &Bucket)> {
        self.buckets.range((v, 0)..=(v, usize::MAX))
    }

    fn compute_node_extremes(&self, v: usize) -> BTreeSet<IntervalId> {
        self.node_buckets(v)
            .flat_map(|(_, b)| ext_set(b.extremes()))
            .collect()
    }

    fn alloc_color(&mut self, v: usize) -> Color {
        let used = self.used.entry(v).or_default();
        let idx = (0..).find(|k| !used.contains(k)).unwrap();
        used.insert(idx);
        Color::palette(self.nodes[v].level, idx)
    }

    fn free_color(&mut self, v: usize, id: IntervalId) {
        if let Some(Color::Palette { index, .. }) = self.state.get(id) {
            if let Some(u) = self.used.get_mut(&v) {
                u.remove(&index);
            }
        }
    }

    /// DistinctColors: demote and promote the slot's extremes.
    fn distinct_update(
        &mut self,
        v: usize,
        old: BTreeSet<IntervalId>,
        new: BTreeSet<IntervalId>,
        deleted: Option<IntervalId>,
    ) {
        for &id in old.difference(&new) {
            self.free_color(v, id);
            if Some(id) != deleted {
                self.state.set(id, Color::Dummy);
            }
        }
        for &id in new.difference(&old) {
            let c = self.alloc_color(v);
            self.state.set(id, c);
        }
    }

    fn chain_update(&mut self, v: usize, inserted: Option<IntervalId>) {
        let old = self.node_extremes.remove(&v).unwrap_or_default();
        let new = self.compute_node_extremes(v);
        let ivs: Vec<Interval> = new.iter().map(|id| self.live[id]).collect();
        let others: Vec<IntervalId> = old
            .difference(&new)
            .copied()
            .chain(inserted.filter(|id| !new.contains(id)))
            .filter(|id| self.live.contains_key(id))
            .collect();
        recolor_node(&mut self.state, &ivs, others, self.nodes[v].level);
        if !new.is_empty() {
            self.node_extremes.insert(v, new);
        }
    }

    /// Checks (A.1)–(A.3), extreme bookkeeping and color uniqueness per node.
    pub fn check_framework(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(m));
        let mut per_node: BTreeMap<usize, Vec<Interval>> = BTreeMap::new();
        for (id, iv) in &self.live {
            let (v, i) = self.locate(iv)?;
            if self.loc.get(id) != Some(&(v, i)) {
                return fail(format!("interval {id} stored at wrong node/slot"));
            }
            per_node.entry(v).or_default().push(*iv);
        }
        for (v, members) in per_node {
            let extremes = self.compute_node_extremes(v);
            let level = self.nodes[v].level;
            let mut ex_ivs = Vec::new();
            for iv in &members {
                let c = self.state.get(iv.id).ok_or(Error::MissingColor(iv.id))?;
                if extremes.contains(&iv.id) {
                    ex_ivs.push(*iv);
                    let chain_dummy = self.scheme == FixedScheme::ChainPerNode && c.is_dummy();
                    if !chain_dummy && c.level() != Some(level) {
                        return fail(format!(
                            "extreme {} has color {c:?} at level {level}",
                            iv.id
                        ));
                    }
                } else if c != Color::Dummy {
                    return fail(format!("non-extreme {} is not dummy", iv.id));
                }
            }
            if self.scheme == FixedScheme::DistinctColors {
                let colors: BTreeSet<Color> = ex_ivs
                    .iter()
                    .map(|i| self.state.get(i.id).unwrap())
                    .collect();
                if colors.len() != ex_ivs.len() {
                    return fail(format!("node {v} reuses a color among its extremes"));
                }
            }
            if !oracle::is_conflict_free(&ex_ivs, self.state.assignment())?.is_ok() {
                return fail(format!("extremes of node {v} not locally conflict-free"));
            }
        }
        Ok(())
    }
}

impl ColoringEngine for FixedEngine {
    fn name(&self) -> String {
        match self.scheme {
            FixedScheme::DistinctColors => {
                format!("fixed-distinct(U={},t={})", self.universe, self.t)
            }
            FixedScheme::ChainPerNode => format!("fixed-chain(U={},t={})", self.universe, self.t),
        }
    }

    fn insert(&mut self, iv: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&iv.id) {
            return Err(Error::DuplicateId(iv.id));
        }
        self.check_universe(&iv)?;
        let (v, i) = self.locate(&iv)?;
        self.live.insert(iv.id, iv);
        self.loc.insert(iv.id, (v, i));
        let bucket = self.buckets.entry((v, i)).or_default();
        let old = ext_set(bucket.extremes());
        bucket.add(&iv);
        let new = ext_set(bucket.extremes());
        match self.scheme {
            FixedScheme::DistinctColors => {
                if !new.contains(&iv.id) {
                    self.state.set(iv.id, Color::Dummy);
                }
                self.distinct_update(v, old, new, None);
            }
            FixedScheme::ChainPerNode => self.chain_update(v, Some(iv.id)),
        }
        Ok(self.state.commit(false))
    }

    fn delete(&mut self, id: IntervalId) -> Result<UpdateReport> {
        let iv = self.live.remove(&id).ok_or(Error::UnknownId(id))?;
        let (v, i) = self.loc.remove(&id).unwrap();
        let bucket = self.buckets.get_mut(&(v, i)).unwrap();
        let old = ext_set(bucket.extremes());
        bucket.remove(&iv);
        let new = ext_set(bucket.extremes());
        if bucket.is_empty() {
            self.buckets.remove(&(v, i));
        }
        match self.scheme {
            FixedScheme::DistinctColors => {
                self.distinct_update(v, old, new, Some(id));
                self.state.remove(id);
            }
            FixedScheme::ChainPerNode => {
                self.state.remove(id);
                self.chain_update(v, None);
            }
        }
        Ok(self.state.commit(false))
    }

    fn coloring(&self) -> &ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }

    fn declared_budget(&self) -> Option<Budget> {
        let recolorings = match self.scheme {
            FixedScheme::DistinctColors => 2,
            FixedScheme::ChainPerNode => 4 * self.t,
        };
        Some(Budget {
            colors: self.color_budget(),
            recolorings,
        })
    }

    fn height(&self) -> Option<usize> {
        Some(self.height as usize)
    }

    fn check_invariants(&self) -> Result<()> {
        self.check_framework()
    }
}

/// Palette of level `level` under `scheme` with minimum degree `t`.
pub fn level_colors(scheme: FixedScheme, t: usize, level: u32) -> Vec<Color> {
    match scheme {
        FixedScheme::DistinctColors => (0..(4 * t - 2) as u32)
            .map(|j| Color::palette(level, j))
            .collect(),
        FixedScheme::ChainPerNode => level_palette(level).to_vec(),
    }
}
