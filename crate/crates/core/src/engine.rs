//! The update contract shared by every coloring strategy.

use std::collections::{BTreeMap, BTreeSet};

use crate::coloring::{ColoringState, UpdateReport};
use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};
use crate::oracle::{self, Verdict};
use crate::trace::UpdateOp;

/// Color and per-update recoloring guarantees an engine declares up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub colors: usize,
    pub recolorings: usize,
}

pub trait ColoringEngine: Send {
    fn name(&self) -> String;

    fn insert(&mut self, interval: Interval) -> Result<UpdateReport>;

    fn delete(&mut self, id: IntervalId) -> Result<UpdateReport>;

    fn coloring(&self) -> &ColoringState;

    fn live(&self) -> &BTreeMap<IntervalId, Interval>;

    fn declared_budget(&self) -> Option<Budget> {
        None
    }

    /// Height of the underlying search tree, for tree-based engines.
    fn height(&self) -> Option<usize> {
        None
    }

    /// Engine-specific structural checks.
    fn check_invariants(&self) -> Result<()> {
        Ok(())
    }

    fn apply(&mut self, op: &UpdateOp) -> Result<UpdateReport> {
        match op {
            UpdateOp::Insert(iv) => self.insert(*iv),
            UpdateOp::Delete(id) => self.delete(*id),
        }
    }

    fn color_of(&self, id: IntervalId) -> Option<Color> {
        self.coloring().get(id)
    }

    fn intervals(&self) -> Vec<Interval> {
        self.live().values().copied().collect()
    }

    /// Runs the sweep oracle over the current state.
    fn verify(&self) -> Result<Verdict> {
        oracle::is_conflict_free(&self.intervals(), self.coloring().assignment())
    }
}

/// Gives every live interval a color no other live interval holds
/// (smallest free index). Never recolors.
#[derive(Debug, Default)]
pub struct TrivialEngine {
    live: BTreeMap<IntervalId, Interval>,
    state: ColoringState,
    used: BTreeSet<u32>,
}

impl TrivialEngine {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ColoringEngine for TrivialEngine {
    fn name(&self) -> String {
        "trivial".into()
    }

    fn insert(&mut self, interval: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&interval.id) {
            return Err(Error::DuplicateId(interval.id));
        }
        let index = (0..).find(|k| !self.used.contains(k)).unwrap();
        self.used.insert(index);
        self.live.insert(interval.id, interval);
        self.state.set(interval.id, Color::palette(0, index));
        Ok(self.state.commit(false))
    }

    fn delete(&mut self, id: IntervalId) -> Result<UpdateReport> {
        if self.live.remove(&id).is_none() {
            return Err(Error::UnknownId(id));
        }
        if let Some(Color::Palette { index, .. }) = self.state.remove(id) {
            self.used.remove(&index);
        }
        Ok(self.state.commit(false))
    }

    fn coloring(&self) -> &ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }
}
