//! Reduction for intervals with lengths in `[1, L)`.
//!
//! Every interval is registered at the leftmost integer point it contains.
//! Per point only two intervals matter: the one reaching furthest left and,
//! among the rest, the one reaching furthest right. Points are grouped into
//! blocks of `L` consecutive integers; the extremes of each block are fed to
//! their own inner engine. Blocks of equal parity are geometrically disjoint,
//! so they share one palette: inner color `(l, j)` of a block with parity
//! `p` is published as `(2l + p, j)`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use ordered_float::OrderedFloat;

use crate::coloring::{ColoringState, UpdateReport};
use crate::engine::ColoringEngine;
use crate::error::{Error, Result};
use crate::interval::{Color, Coord, Interval, IntervalId};

pub type EngineFactory = Box<dyn Fn() -> Result<Box<dyn ColoringEngine>> + Send + Sync>;

#[derive(Debug, Default)]
struct PointSet {
    by_left: BTreeSet<(Coord, IntervalId)>,
    by_right: BTreeSet<(Reverse<Coord>, IntervalId)>,
}

impl PointSet {
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

    fn extremes(&self) -> BTreeSet<IntervalId> {
        let Some(&(_, a)) = self.by_left.first() else {
            return BTreeSet::new();
        };
        let b = self.by_right.iter().map(|e| e.1).find(|&id| id != a);
        std::iter::once(a).chain(b).collect()
    }
}

pub struct GridEngine {
    l: u64,
    factory: EngineFactory,
    inner_name: String,
    points: BTreeMap<i64, PointSet>,
    blocks: BTreeMap<i64, Box<dyn ColoringEngine>>,
    live: BTreeMap<IntervalId, Interval>,
    state: ColoringState,
}

impl std::fmt::Debug for GridEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridEngine")
            .field("l", &self.l)
            .field("inner", &self.inner_name)
            .field("live", &self.live.len())
            .finish()
    }
}

fn publish(c: Color, parity: u32) -> Color {
    match c {
        Color::Dummy => Color::Dummy,
        Color::Palette { level, index } => Color::palette(2 * level + parity, index),
    }
}

impl GridEngine {
    pub fn new(l: u64, factory: EngineFactory) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter(format!("L={l} must be at least 2")));
        }
        let inner_name = factory()?.name();
        Ok(GridEngine {
            l,
            factory,
            inner_name,
            points: BTreeMap::new(),
            blocks: BTreeMap::new(),
            live: BTreeMap::new(),
            state: ColoringState::new(),
        })
    }

    pub fn block_len(&self) -> u64 {
        self.l
    }

    pub fn point_of(iv: &Interval) -> i64 {
        iv.left.ceil() as i64
    }

    pub fn block_of(&self, x: i64) -> i64 {
        x.div_euclid(self.l as i64)
    }

    pub fn inner_engines(&self) -> impl Iterator<Item = (i64, &dyn ColoringEngine)> {
        self.blocks.iter().map(|(&b, e)| (b, e.as_ref()))
    }

    fn parity(block: i64) -> u32 {
        block.rem_euclid(2) as u32
    }

    fn sync(&mut self, block: i64, report: &UpdateReport) {
        let p = Self::parity(block);
        for ev in &report.events {
            self.state.set(ev.id, publish(ev.color, p));
        }
    }

    fn inner_insert(&mut self, block: i64, iv: Interval) -> Result<()> {
        if !self.blocks.contains_key(&block) {
            self.blocks.insert(block, (self.factory)()?);
        }
        let r = self.blocks.get_mut(&block).unwrap().insert(iv)?;
        self.sync(block, &r);
        Ok(())
    }

    fn inner_delete(&mut self, block: i64, id: IntervalId) -> Result<()> {
        let e = self
            .blocks
            .get_mut(&block)
            .ok_or(Error::Internal(format!("no block {block}")))?;
        let r = e.delete(id)?;
        if e.live().is_empty() {
            self.blocks.remove(&block);
        }
        self.sync(block, &r);
        Ok(())
    }

    pub fn check_registry(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(m));
        let mut extremes_by_block: BTreeMap<i64, BTreeSet<IntervalId>> = BTreeMap::new();
        let mut registered = 0;
        for (&x, ps) in &self.points {
            registered += ps.by_left.len();
            for &(_, id) in &ps.by_left {
                if Self::point_of(&self.live[&id]) != x {
                    return fail(format!("interval {id} registered at wrong point {x}"));
                }
            }
            extremes_by_block
                .entry(self.block_of(x))
                .or_default()
                .extend(ps.extremes());
        }
        if registered != self.live.len() {
            return fail("registry size differs from live set".into());
        }
        for (id, iv) in &self.live {
            let block = self.block_of(Self::point_of(iv));
            let is_extreme = extremes_by_block
                .get(&block)
                .is_some_and(|s| s.contains(id));
            let c = self.state.get(*id).ok_or(Error::MissingColor(*id))?;
            let expected = if is_extreme {
                let inner = self.blocks.get(&block).and_then(|e| e.color_of(*id));
                match inner {
                    Some(ic) => publish(ic, Self::parity(block)),
                    None => return fail(format!("extreme {id} missing from block {block}")),
                }
            } else {
                Color::Dummy
            };
            if c != expected {
                return fail(format!("interval {id} has {c:?}, expected {expected:?}"));
            }
        }
        for (b, e) in &self.blocks {
            let held: BTreeSet<IntervalId> = e.live().keys().copied().collect();
            if Some(&held) != extremes_by_block.get(b) {
                return fail(format!("block {b} holds a stale extreme set"));
            }
            e.check_invariants()?;
        }
        Ok(())
    }
}

impl ColoringEngine for GridEngine {
    fn name(&self) -> String {
        format!("grid(L={},inner={})", self.l, self.inner_name)
    }

    fn insert(&mut self, iv: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&iv.id) {
            return Err(Error::DuplicateId(iv.id));
        }
        let len = iv.length();
        if !(1.0..self.l as f64).contains(&len) {
            return Err(Error::LengthOutOfRange {
                id: iv.id,
                length: len,
                max: self.l,
            });
        }
        let x = Self::point_of(&iv);
        let block = self.block_of(x);
        let ps = self.points.entry(x).or_default();
        let before = ps.extremes();
        ps.add(&iv);
        let after = ps.extremes();
        self.live.insert(iv.id, iv);
        if !after.contains(&iv.id) {
            self.state.set(iv.id, Color::Dummy);
        }
        for &gone in before.difference(&after) {
            self.inner_delete(block, gone)?;
            self.state.set(gone, Color::Dummy);
        }
        for &new in after.difference(&before) {
            let niv = self.live[&new];
            self.inner_insert(block, niv)?;
        }
        Ok(self.state.commit(false))
    }

    fn delete(&mut self, id: IntervalId) -> Result<UpdateReport> {
        let iv = self.live.remove(&id).ok_or(Error::UnknownId(id))?;
        let x = Self::point_of(&iv);
        let block = self.block_of(x);
        let ps = self.points.get_mut(&x).expect("registered");
        let before = ps.extremes();
        ps.remove(&iv);
        let after = ps.extremes();
        if ps.by_left.is_empty() {
            self.points.remove(&x);
        }
        if before.contains(&id) {
            self.inner_delete(block, id)?;
        }
        self.state.remove(id);
        for &new in after.difference(&before) {
            let niv = self.live[&new];
            self.inner_insert(block, niv)?;
        }
        Ok(self.state.commit(false))
    }

    fn coloring(&self) -> &ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }

    fn check_invariants(&self) -> Result<()> {
        self.check_registry()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::TrivialEngine;

    fn trivial() -> EngineFactory {
        Box::new(|| Ok(Box::new(TrivialEngine::new()) as Box<dyn ColoringEngine>))
    }

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GridEngine::new(1, trivial()).is_err());
        let mut g = GridEngine::new(4, trivial()).unwrap();
        assert!(matches!(
            g.insert(iv(0, 0., 0.5)),
            Err(Error::LengthOutOfRange { .. })
        ));
        assert!(matches!(
            g.insert(iv(0, 0., 4.)),
            Err(Error::LengthOutOfRange { .. })
        ));
        assert_eq!(g.delete(3), Err(Error::UnknownId(3)));
    }

    #[test]
    fn non_extreme_is_dummy() {
        let mut g = GridEngine::new(4, trivial()).unwrap();
        g.insert(iv(0, 0.5, 3.0)).unwrap();
        g.insert(iv(1, 0.7, 3.5)).unwrap();
        let r = g.insert(iv(2, 0.9, 2.0)).unwrap();
        assert_eq!(r.recolorings, 0);
        assert_eq!(g.color_of(2), Some(Color::Dummy));
        g.check_registry().unwrap();
    }

    #[test]
    fn displacement_costs_one() {
        let mut g = GridEngine::new(4, trivial()).unwrap();
        g.insert(iv(0, 0.5, 2.0)).unwrap();
        g.insert(iv(1, 0.7, 2.5)).unwrap();
        // reaches further right than 1, displacing it
        let r = g.insert(iv(2, 0.8, 3.5)).unwrap();
        assert_eq!(r.recolorings, 1);
        assert_eq!(g.color_of(1), Some(Color::Dummy));
        assert!(!g.color_of(2).unwrap().is_dummy());
        g.check_registry().unwrap();
        assert!(g.verify().unwrap().is_ok());
        // deleting 2 promotes 1 again
        let r = g.delete(2).unwrap();
        assert_eq!(r.recolorings, 1);
        g.check_registry().unwrap();
    }

    #[test]
    fn negative_coordinates_and_parity() {
        let mut g = GridEngine::new(2, trivial()).unwrap();
        g.insert(iv(0, -3.5, -2.0)).unwrap();
        g.insert(iv(1, -1.5, -0.25)).unwrap();
        g.insert(iv(2, 0.5, 1.5)).unwrap();
        assert_eq!(g.block_of(-3), -2);
        assert_eq!(g.block_of(-1), -1);
        assert_eq!(g.color_of(0).unwrap().level(), Some(0));
        assert_eq!(g.color_of(1).unwrap().level(), Some(1));
        g.check_registry().unwrap();
        assert!(g.verify().unwrap().is_ok());
    }
}
