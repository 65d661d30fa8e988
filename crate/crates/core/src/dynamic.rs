//! General dynamic engine: a B-tree over the endpoint multiset with a chain
//! coloring per node.
//!
//! Keys are `(coordinate, id, side)` triples so equal coordinates still
//! order strictly. Every interval lives at the highest node holding a key it
//! contains. Inserts split full nodes on the way down; deletes run the
//! single-pass top-down algorithm (swap with predecessor or successor,
//! borrow from a sibling, or merge). After each structural primitive the
//! intervals of the nodes it touched are re-seated from the root, and at the
//! end of the update every touched node has its extremes chain-colored
//! again with the two colors of its level.
//!
//! In [`DynamicMode::Epsilon`] the tree is rebuilt from scratch, with
//! `t = max(2, round(n^ε))`, whenever `n` leaves `[n_last/2, 2·n_last]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use ordered_float::OrderedFloat;

use crate::btree_layout;
use crate::coloring::{ColoringState, UpdateReport};
use crate::engine::ColoringEngine;
use crate::error::{Error, Result};
use crate::framework::{node_extremes, recolor_node};
use crate::interval::{Color, Coord, Interval, IntervalId};
use crate::oracle;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub coord: Coord,
    pub id: IntervalId,
    /// 0 for the left endpoint, 1 for the right one.
    pub side: u8,
}

impl Key {
    fn endpoints(iv: &Interval) -> [Key; 2] {
        [
            Key {
                coord: OrderedFloat(iv.left),
                id: iv.id,
                side: 0,
            },
            Key {
                coord: OrderedFloat(iv.right),
                id: iv.id,
                side: 1,
            },
        ]
    }
}

/// Minimum degree chosen at a rebuild over `n` intervals.
pub fn eps_degree(n: usize, eps: f64) -> usize {
    ((n as f64).powf(eps).round() as usize).max(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicMode {
    FixedT(usize),
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveKind {
    LeafInsert,
    LeafRemove,
    Split,
    Merge,
    /// Borrow a key from the left sibling.
    BorrowLeft,
    /// Borrow a key from the right sibling.
    BorrowRight,
    SwapPred,
    SwapSucc,
    RootCollapse,
    Rebuild,
}

/// One structural step and every node whose intervals or extremes it could
/// have changed (including destinations of re-seated intervals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitive {
    pub kind: PrimitiveKind,
    pub nodes: BTreeSet<NodeId>,
}

#[derive(Debug, Clone)]
struct Node {
    keys: Vec<Key>,
    children: Vec<NodeId>,
    level: u32,
    members: BTreeSet<IntervalId>,
}

impl Node {
    fn empty(level: u32) -> Self {
        Node {
            keys: Vec::new(),
            children: Vec::new(),
            level,
            members: BTreeSet::new(),
        }
    }

    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Slot of the leftmost key inside `iv`, if any.
    fn slot(&self, iv: &Interval) -> (usize, bool) {
        let i = self.keys.partition_point(|k| k.coord.0 < iv.left);
        (i, i < self.keys.len() && self.keys[i].coord.0 <= iv.right)
    }
}

#[derive(Debug, Clone)]
pub struct DynamicEngine {
    mode: DynamicMode,
    t: usize,
    nodes: Vec<Option<Node>>,
    root: NodeId,
    live: BTreeMap<IntervalId, Interval>,
    home: HashMap<IntervalId, NodeId>,
    state: ColoringState,
    n_last: usize,
    dirty: BTreeSet<NodeId>,
    ops: Vec<Primitive>,
}

impl DynamicEngine {
    pub fn new(mode: DynamicMode) -> Result<Self> {
        let t = match mode {
            DynamicMode::FixedT(t) if t >= 2 => t,
            DynamicMode::FixedT(t) => {
                return Err(Error::InvalidParameter(format!("t={t} must be at least 2")))
            }
            DynamicMode::Epsilon(e) if e > 0.0 && e <= 1.0 => 2,
            DynamicMode::Epsilon(e) => {
                return Err(Error::InvalidParameter(format!(
                    "eps={e} must lie in (0, 1]"
                )))
            }
        };
        Ok(DynamicEngine {
            mode,
            t,
            nodes: vec![Some(Node::empty(0))],
            root: 0,
            live: BTreeMap::new(),
            home: HashMap::new(),
            state: ColoringState::new(),
            n_last: 0,
            dirty: BTreeSet::new(),
            ops: Vec::new(),
        })
    }

    pub fn with_t(t: usize) -> Result<Self> {
        Self::new(DynamicMode::FixedT(t))
    }

    pub fn with_eps(eps: f64) -> Result<Self> {
        Self::new(DynamicMode::Epsilon(eps))
    }

    pub fn mode(&self) -> DynamicMode {
        self.mode
    }

    /// Current minimum degree.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n_last(&self) -> usize {
        self.n_last
    }

    pub fn tree_height(&self) -> u32 {
        self.node(self.root).level
    }

    /// Structural primitives executed by the most recent update.
    pub fn last_primitives(&self) -> &[Primitive] {
        &self.ops
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        (0..self.nodes.len())
            .filter(|&v| self.nodes[v].is_some())
            .collect()
    }

    pub fn node_members(&self, v: NodeId) -> Option<&BTreeSet<IntervalId>> {
        self.nodes.get(v)?.as_ref().map(|n| &n.members)
    }

    /// Node holding each live interval.
    pub fn home_of(&self, id: IntervalId) -> Option<NodeId> {
        self.home.get(&id).copied()
    }

    /// Colors of each node's members, keyed by node.
    pub fn node_colorings(&self) -> BTreeMap<NodeId, BTreeMap<IntervalId, Color>> {
        self.node_ids()
            .into_iter()
            .map(|v| {
                let m = self
                    .node(v)
                    .members
                    .iter()
                    .map(|&id| (id, self.state.get(id).unwrap_or(Color::Dummy)))
                    .collect();
                (v, m)
            })
            .collect()
    }

    fn node(&self, v: NodeId) -> &Node {
        self.nodes[v].as_ref().expect("live node")
    }

    fn node_mut(&mut self, v: NodeId) -> &mut Node {
        self.nodes[v].as_mut().expect("live node")
    }

    fn alloc(&mut self, n: Node) -> NodeId {
        self.nodes.push(Some(n));
        self.nodes.len() - 1
    }

    fn full(&self, v: NodeId) -> bool {
        self.node(v).keys.len() == 2 * self.t - 1
    }

    pub fn locate(&self, iv: &Interval) -> Result<NodeId> {
        let mut v = self.root;
        loop {
            let node = self.node(v);
            let (i, hit) = node.slot(iv);
            if hit {
                return Ok(v);
            }
            match node.children.get(i) {
                Some(&c) => v = c,
                None => {
                    return Err(Error::Internal(format!(
                        "interval {} contains no key of the tree",
                        iv.id
                    )))
                }
            }
        }
    }

    /// Pulls the members out of `affected`, seats each again from the root
    /// and records the primitive.
    fn reseat(&mut self, kind: PrimitiveKind, affected: &[NodeId]) {
        let mut nodes: BTreeSet<NodeId> = affected.iter().copied().collect();
        let mut moving = Vec::new();
        for &v in affected {
            if let Some(n) = self.nodes[v].as_mut() {
                moving.extend(std::mem::take(&mut n.members));
            }
        }
        for id in moving {
            let iv = self.live[&id];
            let dest = self
                .locate(&iv)
                .expect("live interval has its endpoints in the tree");
            self.node_mut(dest).members.insert(id);
            self.home.insert(id, dest);
            nodes.insert(dest);
        }
        self.dirty.extend(nodes.iter().copied());
        self.ops.push(Primitive { kind, nodes });
    }

    fn split_child(&mut self, x: NodeId, i: usize) {
        let t = self.t;
        let y = self.node(x).children[i];
        let (median, z_node) = {
            let yn = self.node_mut(y);
            let z_keys = yn.keys.split_off(t);
            let median = yn.keys.pop().expect("full node");
            let z_children = if yn.is_leaf() {
                Vec::new()
            } else {
                yn.children.split_off(t)
            };
            let mut z = Node::empty(yn.level);
            z.keys = z_keys;
            z.children = z_children;
            (median, z)
        };
        let z = self.alloc(z_node);
        let xn = self.node_mut(x);
        xn.keys.insert(i, median);
        xn.children.insert(i + 1, z);
        self.reseat(PrimitiveKind::Split, &[x, y, z]);
    }

    fn insert_key(&mut self, k: Key) {
        if self.full(self.root) {
            let old = self.root;
            let mut s = Node::empty(self.node(old).level + 1);
            s.children.push(old);
            let s = self.alloc(s);
            self.root = s;
            self.split_child(s, 0);
        }
        let mut x = self.root;
        loop {
            if self.node(x).is_leaf() {
                let xn = self.node_mut(x);
                let pos = xn.keys.partition_point(|q| *q < k);
                xn.keys.insert(pos, k);
                self.reseat(PrimitiveKind::LeafInsert, &[x]);
                return;
            }
            let mut i = self.node(x).keys.partition_point(|q| *q < k);
            let c = self.node(x).children[i];
            if self.full(c) {
                self.split_child(x, i);
                if self.node(x).keys[i] < k {
                    i += 1;
                }
            }
            x = self.node(x).children[i];
        }
    }

    /// Merges `children[i]`, `keys[i]` and `children[i+1]` of `x` into
    /// `children[i]`; collapses the root if it runs empty. Returns the merged
    /// node.
    fn merge(&mut self, x: NodeId, i: usize) -> NodeId {
        let (y, z) = {
            let xn = self.node(x);
            (xn.children[i], xn.children[i + 1])
        };
        let zn = self.nodes[z].take().expect("live sibling");
        let sep = {
            let xn = self.node_mut(x);
            xn.children.remove(i + 1);
            xn.keys.remove(i)
        };
        let yn = self.node_mut(y);
        yn.keys.push(sep);
        yn.keys.extend(zn.keys);
        yn.children.extend(zn.children);
        yn.members.extend(zn.members);
        self.reseat(PrimitiveKind::Merge, &[x, y, z]);
        if x == self.root && self.node(x).keys.is_empty() {
            let xn = self.nodes[x].take().expect("root");
            debug_assert!(xn.members.is_empty());
            self.root = y;
            self.node_mut(y).members.extend(xn.members);
            self.reseat(PrimitiveKind::RootCollapse, &[y]);
        }
        y
    }

    /// Moves `keys[i-1]` of `x` into `children[i]` and the last key of the
    /// left sibling up into `x`.
    fn borrow_left(&mut self, x: NodeId, i: usize) {
        let (l, c) = {
            let xn = self.node(x);
            (xn.children[i - 1], xn.children[i])
        };
        let (lk, lc) = {
            let ln = self.node_mut(l);
            (ln.keys.pop().expect("rich sibling"), ln.children.pop())
        };
        let sep = std::mem::replace(&mut self.node_mut(x).keys[i - 1], lk);
        let cn = self.node_mut(c);
        cn.keys.insert(0, sep);
        if let Some(ch) = lc {
            cn.children.insert(0, ch);
        }
        self.reseat(PrimitiveKind::BorrowLeft, &[x, l, c]);
    }

    fn borrow_right(&mut self, x: NodeId, i: usize) {
        let (c, r) = {
            let xn = self.node(x);
            (xn.children[i], xn.children[i + 1])
        };
        let (rk, rc) = {
            let rn = self.node_mut(r);
            let k = rn.keys.remove(0);
            let ch = if rn.is_leaf() {
                None
            } else {
                Some(rn.children.remove(0))
            };
            (k, ch)
        };
        let sep = std::mem::replace(&mut self.node_mut(x).keys[i], rk);
        let cn = self.node_mut(c);
        cn.keys.push(sep);
        if let Some(ch) = rc {
            cn.children.push(ch);
        }
        self.reseat(PrimitiveKind::BorrowRight, &[x, c, r]);
    }

    /// Path from `v` down to the leaf holding its subtree's extreme key.
    fn extreme_path(&self, mut v: NodeId, max: bool) -> (Key, Vec<NodeId>) {
        let mut path = vec![v];
        loop {
            let n = self.node(v);
            if n.is_leaf() {
                let k = if max { n.keys.last() } else { n.keys.first() };
                return (*k.expect("non-empty leaf"), path);
            }
            v = if max {
                *n.children.last().unwrap()
            } else {
                n.children[0]
            };
            path.push(v);
        }
    }

    fn delete_key(&mut self, mut k: Key) {
        let t = self.t;
        let mut x = self.root;
        loop {
            let (i, found, leaf) = {
                let n = self.node(x);
                let i = n.keys.partition_point(|q| *q < k);
                (i, i < n.keys.len() && n.keys[i] == k, n.is_leaf())
            };
            if leaf {
                assert!(found, "key to delete is missing from the tree");
                self.node_mut(x).keys.remove(i);
                self.reseat(PrimitiveKind::LeafRemove, &[x]);
                return;
            }
            if found {
                let (y, z) = {
                    let n = self.node(x);
                    (n.children[i], n.children[i + 1])
                };
                if self.node(y).keys.len() >= t {
                    let (pred, path) = self.extreme_path(y, true);
                    self.node_mut(x).keys[i] = pred;
                    let mut affected = vec![x];
                    affected.extend(path);
                    self.reseat(PrimitiveKind::SwapPred, &affected);
                    k = pred;
                    x = y;
                } else if self.node(z).keys.len() >= t {
                    let (succ, path) = self.extreme_path(z, false);
                    self.node_mut(x).keys[i] = succ;
                    let mut affected = vec![x];
                    affected.extend(path);
                    self.reseat(PrimitiveKind::SwapSucc, &affected);
                    k = succ;
                    x = z;
                } else {
                    x = self.merge(x, i);
                }
                continue;
            }
            let n_children = self.node(x).children.len();
            let c = self.node(x).children[i];
            if self.node(c).keys.len() >= t {
                x = c;
            } else if i > 0 && self.node(self.node(x).children[i - 1]).keys.len() >= t {
                self.borrow_left(x, i);
                x = c;
            } else if i + 1 < n_children && self.node(self.node(x).children[i + 1]).keys.len() >= t
            {
                self.borrow_right(x, i);
                x = c;
            } else if i + 1 < n_children {
                x = self.merge(x, i);
            } else {
                x = self.merge(x, i - 1);
            }
        }
    }

    fn recolor(&mut self, v: NodeId) {
        let Some(n) = self.nodes.get(v).and_then(Option::as_ref) else {
            return;
        };
        let members: Vec<Interval> = n.members.iter().map(|id| self.live[id]).collect();
        let extremes = node_extremes(members.iter().map(|iv| (n.slot(iv).0, iv)));
        let ex: BTreeSet<IntervalId> = extremes.iter().map(|i| i.id).collect();
        let others: Vec<IntervalId> = members
            .iter()
            .map(|i| i.id)
            .filter(|id| !ex.contains(id))
            .collect();
        let level = n.level;
        recolor_node(&mut self.state, &extremes, others, level);
    }

    fn flush(&mut self) {
        for v in std::mem::take(&mut self.dirty) {
            self.recolor(v);
        }
    }

    /// Rebuilds the tree over the current endpoints with a fresh `t`.
    fn rebuild(&mut self) {
        let DynamicMode::Epsilon(eps) = self.mode else {
            return;
        };
        let n = self.live.len();
        self.t = eps_degree(n, eps);
        self.n_last = n;
        let mut keys: Vec<Key> = self.live.values().flat_map(Key::endpoints).collect();
        keys.sort();
        let layout = btree_layout::layout(keys.len(), self.t);
        self.nodes = layout
            .nodes
            .iter()
            .map(|ln| {
                let mut node = Node::empty(ln.level);
                node.keys = ln.keys.iter().map(|&j| keys[j]).collect();
                node.children = ln.children.clone();
                Some(node)
            })
            .collect();
        self.root = layout.root;
        self.home.clear();
        self.dirty.clear();
        let ids: Vec<IntervalId> = self.live.keys().copied().collect();
        for id in ids {
            let v = self.locate(&self.live[&id]).expect("endpoints present");
            self.node_mut(v).members.insert(id);
            self.home.insert(id, v);
        }
        let all: BTreeSet<NodeId> = (0..self.nodes.len()).collect();
        self.dirty.extend(all.iter().copied());
        self.ops.push(Primitive {
            kind: PrimitiveKind::Rebuild,
            nodes: all,
        });
    }

    fn finish(&mut self) -> UpdateReport {
        let mut rebuilt = false;
        if let DynamicMode::Epsilon(_) = self.mode {
            let n = self.live.len();
            if n > 2 * self.n_last || 2 * n < self.n_last {
                self.rebuild();
                rebuilt = true;
            }
        }
        self.flush();
        self.state.commit(rebuilt)
    }

    fn check_structure(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(m));
        let t = self.t;
        let mut inorder = Vec::new();
        fn walk(
            e: &DynamicEngine,
            v: NodeId,
            is_root: bool,
            t: usize,
            out: &mut Vec<Key>,
        ) -> std::result::Result<(), String> {
            let n = e
                .nodes
                .get(v)
                .and_then(|n| n.as_ref())
                .ok_or("dangling child")?;
            if n.keys.len() > 2 * t - 1 {
                return Err(format!("node {v} overfull"));
            }
            if !is_root && n.keys.len() < t - 1 {
                return Err(format!("node {v} underfull"));
            }
            if n.is_leaf() {
                if n.level != 0 {
                    return Err(format!("leaf {v} at level {}", n.level));
                }
                out.extend(&n.keys);
                return Ok(());
            }
            if n.children.len() != n.keys.len() + 1 || n.keys.is_empty() {
                return Err(format!("node {v} has bad fan-out"));
            }
            for (j, &c) in n.children.iter().enumerate() {
                let cl = e.nodes[c].as_ref().map(|c| c.level);
                if cl.map(|l| l + 1) != Some(n.level) {
                    return Err(format!("child {c} of {v} at wrong level"));
                }
                walk(e, c, false, t, out)?;
                if j < n.keys.len() {
                    out.push(n.keys[j]);
                }
            }
            Ok(())
        }
        if let Err(m) = walk(self, self.root, true, t, &mut inorder) {
            return fail(m);
        }
        if inorder.windows(2).any(|w| w[0] >= w[1]) {
            return fail("keys out of order".into());
        }
        let mut expect: Vec<Key> = self.live.values().flat_map(Key::endpoints).collect();
        expect.sort();
        if inorder != expect {
            return fail("tree keys differ from live endpoints".into());
        }
        Ok(())
    }

    /// B-tree shape, interval placement and (A.1)–(A.3).
    pub fn check_framework(&self) -> Result<()> {
        self.check_structure()?;
        let fail = |m: String| Err(Error::Internal(m));
        let mut seated = 0;
        for v in self.node_ids() {
            let n = self.node(v);
            let members: Vec<Interval> = n.members.iter().map(|id| self.live[id]).collect();
            seated += members.len();
            for iv in &members {
                if self.home.get(&iv.id) != Some(&v) || self.locate(iv)? != v {
                    return fail(format!("interval {} seated at wrong node {v}", iv.id));
                }
            }
            let extremes = node_extremes(members.iter().map(|iv| (n.slot(iv).0, iv)));
            let ex: BTreeSet<IntervalId> = extremes.iter().map(|i| i.id).collect();
            for iv in &members {
                let c = self.state.get(iv.id).ok_or(Error::MissingColor(iv.id))?;
                // extremes off the chain may be dummy too
                let ok = if ex.contains(&iv.id) {
                    c.is_dummy() || c.level() == Some(n.level)
                } else {
                    c == Color::Dummy
                };
                if !ok {
                    return fail(format!("interval {} at node {v} has color {c:?}", iv.id));
                }
            }
            if !oracle::is_conflict_free(&extremes, self.state.assignment())?.is_ok() {
                return fail(format!("extremes of node {v} not locally conflict-free"));
            }
        }
        if seated != self.live.len() || self.state.len() != self.live.len() {
            return fail("seated intervals differ from live set".into());
        }
        Ok(())
    }
}

impl ColoringEngine for DynamicEngine {
    fn name(&self) -> String {
        match self.mode {
            DynamicMode::FixedT(t) => format!("dynamic(t={t})"),
            DynamicMode::Epsilon(e) => format!("eps(eps={e})"),
        }
    }

    fn insert(&mut self, iv: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&iv.id) {
            return Err(Error::DuplicateId(iv.id));
        }
        self.ops.clear();
        self.live.insert(iv.id, iv);
        for k in Key::endpoints(&iv) {
            self.insert_key(k);
        }
        let v = self.locate(&iv)?;
        self.node_mut(v).members.insert(iv.id);
        self.home.insert(iv.id, v);
        self.dirty.insert(v);
        Ok(self.finish())
    }

    fn delete(&mut self, id: IntervalId) -> Result<UpdateReport> {
        let iv = *self.live.get(&id).ok_or(Error::UnknownId(id))?;
        self.ops.clear();
        let v = self.home.remove(&id).expect("seated");
        self.node_mut(v).members.remove(&id);
        self.dirty.insert(v);
        self.state.remove(id);
        for k in Key::endpoints(&iv) {
            self.delete_key(k);
        }
        self.live.remove(&id);
        Ok(self.finish())
    }

    fn coloring(&self) -> &ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }

    fn height(&self) -> Option<usize> {
        Some(self.tree_height() as usize)
    }

    fn check_invariants(&self) -> Result<()> {
        self.check_framework()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DynamicEngine::with_t(1).is_err());
        assert!(DynamicEngine::with_eps(0.0).is_err());
        assert!(DynamicEngine::with_eps(1.5).is_err());
    }

    #[test]
    fn first_insert_free() {
        let mut e = DynamicEngine::with_t(2).unwrap();
        let r = e.insert(iv(0, 0., 1.)).unwrap();
        assert_eq!(r.recolorings, 0);
        assert_eq!(e.tree_height(), 0);
        e.check_framework().unwrap();
    }

    #[test]
    fn root_split_raises_height() {
        let mut e = DynamicEngine::with_t(2).unwrap();
        e.insert(iv(0, 0., 1.)).unwrap();
        e.insert(iv(1, 2., 3.)).unwrap();
        assert_eq!(e.tree_height(), 1);
        assert!(e
            .last_primitives()
            .iter()
            .any(|p| p.kind == PrimitiveKind::Split));
        e.check_framework().unwrap();
        assert!(e.verify().unwrap().is_ok());
    }

    #[test]
    fn insert_delete_roundtrip() {
        let mut e = DynamicEngine::with_t(2).unwrap();
        for k in 0..40u64 {
            let l = (k * 7 % 41) as f64;
            e.insert(iv(k, l, l + 3.5)).unwrap();
            e.check_framework().unwrap();
            assert!(e.verify().unwrap().is_ok());
        }
        for k in (0..40u64).rev() {
            e.delete(k).unwrap();
            e.check_framework().unwrap();
            assert!(e.verify().unwrap().is_ok());
        }
        assert_eq!(e.tree_height(), 0);
        assert!(e.coloring().is_empty());
    }

    #[test]
    fn equal_coordinates() {
        let mut e = DynamicEngine::with_t(2).unwrap();
        for k in 0..12u64 {
            e.insert(iv(k, 0., 1. + (k % 3) as f64)).unwrap();
        }
        e.check_framework().unwrap();
        assert!(e.verify().unwrap().is_ok());
        for k in (0..12u64).step_by(2) {
            e.delete(k).unwrap();
        }
        e.check_framework().unwrap();
        assert!(e.verify().unwrap().is_ok());
    }

    #[test]
    fn eps_rebuild_schedule() {
        assert_eq!(eps_degree(17, 0.5), 4);
        assert_eq!(eps_degree(1, 0.5), 2);
        let mut e = DynamicEngine::with_eps(0.5).unwrap();
        let mut rebuilds = Vec::new();
        for k in 0..40u64 {
            let r = e.insert(iv(k, 2. * k as f64, 2. * k as f64 + 1.)).unwrap();
            if r.rebuild {
                rebuilds.push((k + 1, e.t()));
            }
        }
        assert_eq!(rebuilds, vec![(1, 2), (3, 2), (7, 3), (15, 4), (31, 6)]);
        let mut shrink = Vec::new();
        for k in 0..40u64 {
            if e.delete(k).unwrap().rebuild {
                shrink.push(39 - k as usize);
            }
        }
        assert_eq!(shrink, vec![15, 7, 3, 1, 0]);
        e.check_framework().unwrap();
    }

    #[test]
    fn duplicate_and_unknown() {
        let mut e = DynamicEngine::with_t(3).unwrap();
        e.insert(iv(1, 0., 1.)).unwrap();
        assert_eq!(e.insert(iv(1, 0., 2.)), Err(Error::DuplicateId(1)));
        assert_eq!(e.delete(5), Err(Error::UnknownId(5)));
    }
}
