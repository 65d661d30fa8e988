//! Color assignment with per-update recoloring accounting.
//!
//! A recoloring is counted when an interval that was already colored before
//! an update ends that update with a different color. Colors given to a newly
//! inserted interval are free, and intermediate flips that revert within the
//! same update are not counted.

use std::collections::{BTreeMap, BTreeSet};

use crate::interval::{Color, IntervalId};

/// One color change visible to the outside world (initial or recoloring).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorEvent {
    pub id: IntervalId,
    pub color: Color,
}

/// Result of one public update.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpdateReport {
    pub seq: u64,
    /// Net color changes, including the initial color of an inserted interval.
    pub events: Vec<ColorEvent>,
    /// Number of already-colored intervals whose color changed.
    pub recolorings: usize,
    /// Whether a global rebuild ran inside this update.
    pub rebuild: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecolorLedger {
    per_update: Vec<(u64, usize)>,
    total: u64,
    max_per_update: usize,
    rebuild_total: u64,
    rebuilds: usize,
}

impl RecolorLedger {
    pub fn record(&mut self, seq: u64, count: usize, rebuild: bool) {
        self.per_update.push((seq, count));
        self.total += count as u64;
        self.max_per_update = self.max_per_update.max(count);
        if rebuild {
            self.rebuild_total += count as u64;
            self.rebuilds += 1;
        }
    }

    pub fn per_update(&self) -> &[(u64, usize)] {
        &self.per_update
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_per_update(&self) -> usize {
        self.max_per_update
    }

    /// Recolorings charged to updates that triggered a global rebuild.
    pub fn rebuild_total(&self) -> u64 {
        self.rebuild_total
    }

    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn updates(&self) -> usize {
        self.per_update.len()
    }

    pub fn amortized(&self) -> f64 {
        if self.per_update.is_empty() {
            0.0
        } else {
            self.total as f64 / self.per_update.len() as f64
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ColoringState {
    assignment: BTreeMap<IntervalId, Color>,
    ledger: RecolorLedger,
    colors_ever: BTreeSet<Color>,
    /// Color of each touched id at the start of the open update.
    pending: BTreeMap<IntervalId, Option<Color>>,
    seq: u64,
}

impl ColoringState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: IntervalId) -> Option<Color> {
        self.assignment.get(&id).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<IntervalId, Color> {
        &self.assignment
    }

    pub fn ledger(&self) -> &RecolorLedger {
        &self.ledger
    }

    /// Every color that has ever been assigned, dummy included.
    pub fn colors_ever(&self) -> &BTreeSet<Color> {
        &self.colors_ever
    }

    /// Distinct colors currently in use, dummy included.
    pub fn colors_in_use(&self) -> BTreeSet<Color> {
        self.assignment.values().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Sets the color of `id`; returns whether it changed.
    pub fn set(&mut self, id: IntervalId, color: Color) -> bool {
        let prev = self.assignment.insert(id, color);
        self.pending.entry(id).or_insert(prev);
        self.colors_ever.insert(color);
        prev != Some(color)
    }

    pub fn remove(&mut self, id: IntervalId) -> Option<Color> {
        let prev = self.assignment.remove(&id);
        self.pending.entry(id).or_insert(prev);
        prev
    }

    /// Closes the open update, charging net changes to the ledger.
    pub fn commit(&mut self, rebuild: bool) -> UpdateReport {
        let mut events = Vec::new();
        let mut recolorings = 0;
        for (id, before) in std::mem::take(&mut self.pending) {
            let after = self.assignment.get(&id).copied();
            match (before, after) {
                (None, Some(c)) => events.push(ColorEvent { id, color: c }),
                (Some(b), Some(a)) if a != b => {
                    recolorings += 1;
                    events.push(ColorEvent { id, color: a });
                }
                _ => {}
            }
        }
        let seq = self.seq;
        self.seq += 1;
        self.ledger.record(seq, recolorings, rebuild);
        UpdateReport {
            seq,
            events,
            recolorings,
            rebuild,
        }
    }

    /// Drops uncommitted bookkeeping without touching the ledger.
    pub fn discard_pending(&mut self) {
        self.pending.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_color_is_free() {
        let mut s = ColoringState::new();
        s.set(1, Color::palette(0, 0));
        let r = s.commit(false);
        assert_eq!(r.recolorings, 0);
        assert_eq!(r.events.len(), 1);
    }

    #[test]
    fn reverted_flip_not_counted() {
        let mut s = ColoringState::new();
        s.set(1, Color::palette(0, 0));
        s.commit(false);
        s.set(1, Color::Dummy);
        s.set(1, Color::palette(0, 0));
        let r = s.commit(false);
        assert_eq!(r.recolorings, 0);
        assert!(r.events.is_empty());
    }

    #[test]
    fn ledger_totals() {
        let mut s = ColoringState::new();
        s.set(1, Color::palette(0, 0));
        s.set(2, Color::palette(0, 1));
        s.commit(false);
        s.set(1, Color::Dummy);
        s.set(2, Color::Dummy);
        s.commit(true);
        s.remove(1);
        s.commit(false);
        let l = s.ledger();
        assert_eq!(l.total(), 2);
        assert_eq!(l.max_per_update(), 2);
        assert_eq!(l.rebuild_total(), 2);
        assert_eq!(
            l.per_update().iter().map(|p| p.1 as u64).sum::<u64>(),
            l.total()
        );
        assert_eq!(s.colors_ever().len(), 3);
    }
}
