//! Adaptive lower-bound adversaries for insertion-only engines.
//!
//! Both drivers insert rounds of pairwise disjoint intervals. The general
//! driver keeps only the intervals that still form living bricks of the
//! round's designated color and stacks one new interval over every `4r` of
//! them. The local driver stacks one over every `r + 2` intervals of the
//! previous round and audits that equal signatures always get equal answers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::chain::connected_components;
use crate::coloring::UpdateReport;
use crate::engine::ColoringEngine;
use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};
use crate::trace::UpdateOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    General,
    Local,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    /// Intervals inserted in this round, left to right.
    pub inserted: Vec<IntervalId>,
    /// Designated color (general) or common round color (local).
    pub designated: Option<Color>,
    /// General: intervals of living bricks right after the round. Local:
    /// the whole round.
    pub survivors: Vec<IntervalId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    /// Too few survivors to form a group.
    Exhausted,
    /// Every color of the round was already designated (or dummy).
    NoEligibleColor,
    /// Special final round of the local construction.
    FinalSpanning,
    /// The engine's coloring stopped being conflict-free.
    Violation { op: usize, witness: f64 },
    /// The local audit saw two answers for one signature.
    NotLocal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub kind: AdversaryKind,
    pub n: usize,
    /// Recoloring budget the construction was sized for.
    pub r: usize,
    pub engine: String,
    pub ops: Vec<UpdateOp>,
    pub reports: Vec<UpdateReport>,
    pub intervals: BTreeMap<IntervalId, Interval>,
    pub rounds: Vec<Round>,
    pub final_colors: BTreeMap<IntervalId, Color>,
    pub stop: StopReason,
    /// Distinct colors ever used, dummy included.
    pub c_obs: usize,
    /// Largest recoloring count of a single insertion.
    pub r_obs: usize,
    /// Local audit: signatures answered inconsistently, or recolorings
    /// outside the component.
    pub audit_failures: usize,
}

impl Transcript {
    /// Rounds with a designated color.
    pub fn rho(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| r.designated.is_some())
            .count()
    }

    pub fn designated_colors(&self) -> Vec<Color> {
        self.rounds.iter().filter_map(|r| r.designated).collect()
    }

    pub fn designated_distinct(&self) -> bool {
        let d = self.designated_colors();
        d.iter().collect::<BTreeSet<_>>().len() == d.len()
    }

    pub fn conflict_free(&self) -> bool {
        !matches!(self.stop, StopReason::Violation { .. })
    }

    pub fn budget_honored(&self) -> bool {
        self.r_obs <= self.r
    }
}

/// Inequality a correct engine must satisfy; `None` when `r = 0`, where it
/// says nothing.
pub fn check_tradeoff(n: usize, c: usize, r: usize, kind: AdversaryKind) -> Option<bool> {
    if r == 0 || c == 0 {
        return None;
    }
    let (n, c, r) = (n as f64, c as f64, r as f64);
    Some(match kind {
        AdversaryKind::General => r > n.powf(1.0 / (c + 1.0)) / (8.0 * c),
        AdversaryKind::Local => r >= n.powf(1.0 / (c + 2.0)) - 2.0,
    })
}

/// Per-round floor on survivors: `n_1/(8rc)^i - 1` (general) or
/// `n/(r+2)^i - 2` (local), rounds counted from 1.
pub fn survivor_floor(kind: AdversaryKind, n: usize, c: usize, r: usize, round: usize) -> f64 {
    let i = round as i32;
    match kind {
        AdversaryKind::General => (n / 2) as f64 / (8.0 * r as f64 * c as f64).powi(i) - 1.0,
        AdversaryKind::Local => n as f64 / (r as f64 + 2.0).powi(i) - 2.0,
    }
}

/// Quarter of the smallest gap between distinct endpoint coordinates.
fn quarter_gap(intervals: &BTreeMap<IntervalId, Interval>) -> f64 {
    let mut xs: Vec<f64> = intervals.values().flat_map(|i| [i.left, i.right]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let gap = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        gap / 4.0
    } else {
        0.25
    }
}

/// Which bricks of each round are alive under `colors`. Bricks of round `i`
/// are the round's intervals with the empty space up to the next interval of
/// the round; a brick contains another if it contains its interval part.
pub fn living_levels(
    rounds: &[Round],
    intervals: &BTreeMap<IntervalId, Interval>,
    colors: &BTreeMap<IntervalId, Color>,
) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = Vec::new();
    for (i, round) in rounds.iter().enumerate() {
        let support = if i == 0 {
            vec![true; round.inserted.len()]
        } else {
            supported(
                &rounds[i - 1].inserted,
                &out[i - 1],
                &round.inserted,
                intervals,
            )
        };
        let alive = round
            .inserted
            .iter()
            .zip(support)
            .map(|(id, s)| {
                s && round.designated.is_some() && colors.get(id).copied() == round.designated
            })
            .collect();
        out.push(alive);
    }
    out
}

/// For each interval of `upper`, whether both it and its empty space hold
/// a living brick of `lower`.
fn supported(
    lower: &[IntervalId],
    lower_alive: &[bool],
    upper: &[IntervalId],
    intervals: &BTreeMap<IntervalId, Interval>,
) -> Vec<bool> {
    let lows: Vec<Interval> = lower.iter().map(|id| intervals[id]).collect();
    let mut prefix = vec![0usize; lows.len() + 1];
    for (k, &a) in lower_alive.iter().enumerate() {
        prefix[k + 1] = prefix[k] + usize::from(a);
    }
    // lower intervals are disjoint and sorted, so contained ones form a run
    let count = |from: usize, to: usize| {
        if to > from {
            prefix[to] - prefix[from]
        } else {
            0
        }
    };
    let closed = |lo: f64, hi: f64| {
        let a = lows.partition_point(|i| i.left < lo);
        let b = lows.partition_point(|i| i.right <= hi);
        count(a, b)
    };
    let open = |lo: f64, hi: f64| {
        let a = lows.partition_point(|i| i.left <= lo);
        let b = lows.partition_point(|i| i.right < hi);
        count(a, b)
    };
    (0..upper.len())
        .map(|k| {
            let iv = intervals[&upper[k]];
            let next = upper
                .get(k + 1)
                .map_or(f64::INFINITY, |id| intervals[id].left);
            closed(iv.left, iv.right) > 0 && open(iv.right, next) > 0
        })
        .collect()
}

/// Intervals of round `level` (1-based) whose bricks are alive; empty for
/// level 0.
pub fn living_bricks(
    rounds: &[Round],
    intervals: &BTreeMap<IntervalId, Interval>,
    colors: &BTreeMap<IntervalId, Color>,
    level: usize,
) -> Vec<IntervalId> {
    if level == 0 || level > rounds.len() {
        return Vec::new();
    }
    let alive = living_levels(&rounds[..level], intervals, colors);
    rounds[level - 1]
        .inserted
        .iter()
        .zip(&alive[level - 1])
        .filter(|(_, &a)| a)
        .map(|(&id, _)| id)
        .collect()
}

/// Order and color fingerprint of a newcomer's component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    /// Left-endpoint ranks (1-based), listed by right endpoint.
    pub labels: Vec<usize>,
    /// Color of the interval with each label; `None` for the newcomer.
    pub colors: Vec<Option<Color>>,
}

impl Signature {
    /// `⟨λ…, c…⟩` with colors rendered by `name`.
    pub fn render(&self, name: impl Fn(Color) -> String) -> String {
        let parts: Vec<String> = self
            .labels
            .iter()
            .map(|l| l.to_string())
            .chain(
                self.colors
                    .iter()
                    .map(|c| c.map_or("NIL".to_string(), &name)),
            )
            .collect();
        format!("⟨{}⟩", parts.join(","))
    }
}

fn left_order(a: &Interval, b: &Interval) -> std::cmp::Ordering {
    a.left.total_cmp(&b.left).then(a.id.cmp(&b.id))
}

/// Signature of `component ∪ {new}`, with `component` the intervals of the
/// newcomer's component (without it). Also returns the id carrying each
/// label.
pub fn signature(
    component: &[Interval],
    new: &Interval,
    color_of: impl Fn(IntervalId) -> Option<Color>,
) -> (Signature, Vec<IntervalId>) {
    let mut all: Vec<Interval> = component.to_vec();
    all.push(*new);
    all.sort_by(left_order);
    let by_label: Vec<IntervalId> = all.iter().map(|i| i.id).collect();
    let mut by_right: Vec<(usize, &Interval)> = all.iter().enumerate().collect();
    by_right.sort_by(|a, b| a.1.right.total_cmp(&b.1.right).then(a.1.id.cmp(&b.1.id)));
    let labels = by_right.iter().map(|(k, _)| k + 1).collect();
    let colors = all
        .iter()
        .map(|i| if i.id == new.id { None } else { color_of(i.id) })
        .collect();
    (Signature { labels, colors }, by_label)
}

/// Intervals of `live` in the same component as `new` once it is added.
pub fn component_of(live: &BTreeMap<IntervalId, Interval>, new: &Interval) -> Vec<Interval> {
    let mut all: Vec<Interval> = live.values().copied().collect();
    all.push(*new);
    connected_components(&all)
        .into_iter()
        .find(|c| c.iter().any(|i| i.id == new.id))
        .map(|c| c.into_iter().filter(|i| i.id != new.id).collect())
        .unwrap_or_default()
}

/// Toy local algorithm: the newcomer takes the smallest color missing from
/// its component; nothing is ever recolored.
#[derive(Debug, Default)]
pub struct FreshColorLocal {
    live: BTreeMap<IntervalId, Interval>,
    state: crate::coloring::ColoringState,
}

impl FreshColorLocal {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ColoringEngine for FreshColorLocal {
    fn name(&self) -> String {
        "fresh-local".into()
    }

    fn insert(&mut self, iv: Interval) -> Result<UpdateReport> {
        if self.live.contains_key(&iv.id) {
            return Err(Error::DuplicateId(iv.id));
        }
        let taken: BTreeSet<u32> = component_of(&self.live, &iv)
            .iter()
            .filter_map(|i| match self.state.get(i.id) {
                Some(Color::Palette { index, .. }) => Some(index),
                _ => None,
            })
            .collect();
        let k = (0..).find(|k| !taken.contains(k)).unwrap();
        self.live.insert(iv.id, iv);
        self.state.set(iv.id, Color::palette(0, k));
        Ok(self.state.commit(false))
    }

    fn delete(&mut self, _id: IntervalId) -> Result<UpdateReport> {
        Err(Error::Unsupported {
            engine: self.name(),
            what: "deletion (insertion-only setting)".into(),
        })
    }

    fn coloring(&self) -> &crate::coloring::ColoringState {
        &self.state
    }

    fn live(&self) -> &BTreeMap<IntervalId, Interval> {
        &self.live
    }

    fn declared_budget(&self) -> Option<crate::engine::Budget> {
        None
    }
}

/// What a local algorithm did for one insertion, in label terms.
#[derive(Debug, Clone, PartialEq, Eq)]
struct LocalAnswer {
    new_color: Option<Color>,
    recolored: Vec<(usize, Color)>,
    outside: bool,
}

struct Driver<'a> {
    engine: &'a mut dyn ColoringEngine,
    ops: Vec<UpdateOp>,
    reports: Vec<UpdateReport>,
    intervals: BTreeMap<IntervalId, Interval>,
    next_id: IntervalId,
    violation: Option<StopReason>,
    audit: Option<BTreeMap<Signature, LocalAnswer>>,
    audit_failures: usize,
}

impl<'a> Driver<'a> {
    fn new(engine: &'a mut dyn ColoringEngine, audit: bool) -> Self {
        Driver {
            engine,
            ops: Vec::new(),
            reports: Vec::new(),
            intervals: BTreeMap::new(),
            next_id: 0,
            violation: None,
            audit: audit.then(BTreeMap::new),
            audit_failures: 0,
        }
    }

    /// Inserts `[l, r]`; returns its id, or `None` after a violation.
    fn insert(&mut self, l: f64, r: f64) -> Result<Option<IntervalId>> {
        let iv = Interval::new(self.next_id, l, r)?;
        self.next_id += 1;
        let sig = self.audit.as_ref().map(|_| {
            let comp = component_of(self.engine.live(), &iv);
            let members: BTreeSet<IntervalId> = comp.iter().map(|i| i.id).collect();
            let (sig, by_label) = signature(&comp, &iv, |id| self.engine.color_of(id));
            (sig, by_label, members)
        });
        let report = self.engine.insert(iv)?;
        self.intervals.insert(iv.id, iv);
        self.ops.push(UpdateOp::Insert(iv));
        if let Some((sig, by_label, members)) = sig {
            let label_of: BTreeMap<IntervalId, usize> = by_label
                .iter()
                .enumerate()
                .map(|(k, &id)| (id, k + 1))
                .collect();
            let mut recolored = Vec::new();
            let mut outside = false;
            for ev in &report.events {
                if ev.id == iv.id {
                    continue;
                }
                match label_of.get(&ev.id) {
                    Some(&l) if members.contains(&ev.id) => recolored.push((l, ev.color)),
                    _ => outside = true,
                }
            }
            recolored.sort();
            let answer = LocalAnswer {
                new_color: self.engine.color_of(iv.id),
                recolored,
                outside,
            };
            if answer.outside {
                self.audit_failures += 1;
            }
            let seen = self.audit.as_mut().unwrap();
            match seen.get(&sig) {
                Some(prev) if *prev != answer => self.audit_failures += 1,
                Some(_) => {}
                None => {
                    seen.insert(sig, answer);
                }
            }
        }
        self.reports.push(report);
        if let crate::oracle::Verdict::Violation { witness } = self.engine.verify()? {
            self.violation = Some(StopReason::Violation {
                op: self.ops.len() - 1,
                witness,
            });
            return Ok(None);
        }
        Ok(Some(iv.id))
    }

    fn colors(&self) -> BTreeMap<IntervalId, Color> {
        self.engine.coloring().assignment().clone()
    }

    fn finish(
        self,
        kind: AdversaryKind,
        n: usize,
        r: usize,
        rounds: Vec<Round>,
        stop: StopReason,
    ) -> Transcript {
        let ledger = self.engine.coloring().ledger();
        Transcript {
            kind,
            n,
            r,
            engine: self.engine.name(),
            final_colors: self.engine.coloring().assignment().clone(),
            c_obs: self.engine.coloring().colors_ever().len(),
            r_obs: ledger.max_per_update(),
            ops: self.ops,
            reports: self.reports,
            intervals: self.intervals,
            rounds,
            stop: self.violation.unwrap_or(stop),
            audit_failures: self.audit_failures,
        }
    }
}

/// Most frequent color among `ids` outside `exclude`, ties to the smaller
/// color.
fn most_frequent(
    ids: &[IntervalId],
    colors: &BTreeMap<IntervalId, Color>,
    exclude: &BTreeSet<Color>,
) -> Option<Color> {
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for id in ids {
        if let Some(&c) = colors.get(id) {
            if !c.is_dummy() && !exclude.contains(&c) {
                *counts.entry(c).or_default() += 1;
            }
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(c, _)| c)
}

/// One run of the general construction sized for recoloring budget `r`.
pub fn run_general(engine: &mut dyn ColoringEngine, n: usize, r: usize) -> Result<Transcript> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "adversary needs n >= 2, got {n}"
        )));
    }
    let r = r.max(1);
    let mut d = Driver::new(engine, false);
    let mut rounds: Vec<Round> = Vec::new();
    let mut used: BTreeSet<Color> = BTreeSet::new();

    let mut first = Vec::new();
    for k in 0..n / 2 {
        match d.insert(2.0 * k as f64, 2.0 * k as f64 + 1.0)? {
            Some(id) => first.push(id),
            None => {
                return Ok(d.finish(AdversaryKind::General, n, r, rounds, StopReason::Exhausted))
            }
        }
    }
    let colors = d.colors();
    let c1 = most_frequent(&first, &colors, &used);
    let survivors = first
        .iter()
        .copied()
        .filter(|id| c1.is_some() && colors.get(id).copied() == c1)
        .collect();
    rounds.push(Round {
        inserted: first,
        designated: c1,
        survivors,
    });
    let Some(c1) = c1 else {
        return Ok(d.finish(
            AdversaryKind::General,
            n,
            r,
            rounds,
            StopReason::NoEligibleColor,
        ));
    };
    used.insert(c1);

    loop {
        let prev = &rounds.last().unwrap().survivors;
        if prev.len() < 4 * r {
            return Ok(d.finish(AdversaryKind::General, n, r, rounds, StopReason::Exhausted));
        }
        let eps = quarter_gap(&d.intervals);
        let groups: Vec<(f64, f64)> = prev
            .chunks_exact(4 * r)
            .map(|g| (d.intervals[&g[0]].left, d.intervals[&g[2 * r]].left - eps))
            .collect();
        let mut inserted = Vec::new();
        for (l, rr) in groups {
            match d.insert(l, rr)? {
                Some(id) => inserted.push(id),
                None => {
                    return Ok(d.finish(
                        AdversaryKind::General,
                        n,
                        r,
                        rounds,
                        StopReason::Exhausted,
                    ))
                }
            }
        }
        let colors = d.colors();
        let lower_alive = living_levels(&rounds, &d.intervals, &colors);
        let support = supported(
            &rounds.last().unwrap().inserted,
            lower_alive.last().unwrap(),
            &inserted,
            &d.intervals,
        );
        let backed: Vec<IntervalId> = inserted
            .iter()
            .zip(&support)
            .filter(|(_, &s)| s)
            .map(|(&id, _)| id)
            .collect();
        let candidates: BTreeSet<Color> = inserted
            .iter()
            .filter_map(|id| colors.get(id).copied())
            .filter(|c| !c.is_dummy() && !used.contains(c))
            .collect();
        if candidates.is_empty() {
            rounds.push(Round {
                inserted,
                designated: None,
                survivors: Vec::new(),
            });
            return Ok(d.finish(
                AdversaryKind::General,
                n,
                r,
                rounds,
                StopReason::NoEligibleColor,
            ));
        }
        let ci = most_frequent(&backed, &colors, &used).unwrap_or(*candidates.first().unwrap());
        used.insert(ci);
        let survivors = backed
            .into_iter()
            .filter(|id| colors.get(id) == Some(&ci))
            .collect();
        rounds.push(Round {
            inserted,
            designated: Some(ci),
            survivors,
        });
    }
}

/// Runs the general construction, starting from budget `r0` and re-running
/// with a fresh engine at the observed per-insertion maximum until the
/// engine stays within the budget it was sized for.
pub fn run_general_adaptive(
    factory: &dyn Fn() -> Result<Box<dyn ColoringEngine>>,
    n: usize,
    r0: usize,
) -> Result<Transcript> {
    let mut r = r0.max(1);
    for _ in 0..16 {
        let mut engine = factory()?;
        let t = run_general(engine.as_mut(), n, r)?;
        if t.r_obs <= r || !t.conflict_free() {
            return Ok(t);
        }
        r = t.r_obs;
    }
    let mut engine = factory()?;
    run_general(engine.as_mut(), n, r)
}

/// The local construction with groups of `r + 2`, plus the signature audit.
pub fn run_local(engine: &mut dyn ColoringEngine, n: usize, r: usize) -> Result<Transcript> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "adversary needs n >= 2, got {n}"
        )));
    }
    let mut d = Driver::new(engine, true);
    let mut rounds: Vec<Round> = Vec::new();
    let round_color = |ids: &[IntervalId], colors: &BTreeMap<IntervalId, Color>| {
        let set: BTreeSet<Option<Color>> = ids.iter().map(|id| colors.get(id).copied()).collect();
        match set.into_iter().collect::<Vec<_>>().as_slice() {
            [Some(c)] => Some(*c),
            _ => None,
        }
    };

    let mut current = Vec::new();
    for k in 0..n / 2 {
        match d.insert(2.0 * k as f64, 2.0 * k as f64 + 1.0)? {
            Some(id) => current.push(id),
            None => return Ok(d.finish(AdversaryKind::Local, n, r, rounds, StopReason::Exhausted)),
        }
    }
    loop {
        let colors = d.colors();
        let designated = round_color(&current, &colors);
        rounds.push(Round {
            inserted: current.clone(),
            designated,
            survivors: current.clone(),
        });
        if designated.is_none() {
            return Ok(d.finish(AdversaryKind::Local, n, r, rounds, StopReason::NotLocal));
        }
        let last = rounds.last().unwrap();
        if last.inserted.len() < r + 1 {
            return Ok(d.finish(AdversaryKind::Local, n, r, rounds, StopReason::Exhausted));
        }
        if last.inserted.len() == r + 1 {
            let left = d.intervals[&last.inserted[0]].left;
            let right = d
                .intervals
                .values()
                .map(|i| i.right)
                .fold(f64::NEG_INFINITY, f64::max);
            let stop = match d.insert(left, right)? {
                Some(id) => {
                    let colors = d.colors();
                    rounds.push(Round {
                        inserted: vec![id],
                        designated: colors.get(&id).copied(),
                        survivors: vec![id],
                    });
                    StopReason::FinalSpanning
                }
                None => StopReason::Exhausted,
            };
            return Ok(d.finish(AdversaryKind::Local, n, r, rounds, stop));
        }
        let eps = quarter_gap(&d.intervals);
        let groups: Vec<(f64, f64)> = last
            .inserted
            .chunks_exact(r + 2)
            .map(|g| (d.intervals[&g[0]].left, d.intervals[&g[r + 1]].left - eps))
            .collect();
        if groups.is_empty() {
            return Ok(d.finish(AdversaryKind::Local, n, r, rounds, StopReason::Exhausted));
        }
        current.clear();
        for (l, rr) in groups {
            match d.insert(l, rr)? {
                Some(id) => current.push(id),
                None => {
                    return Ok(d.finish(AdversaryKind::Local, n, r, rounds, StopReason::Exhausted))
                }
            }
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::Exhausted => f.write_str("exhausted"),
            StopReason::NoEligibleColor => f.write_str("no-eligible-color"),
            StopReason::FinalSpanning => f.write_str("final-spanning"),
            StopReason::Violation { op, witness } => write!(f, "violation(op={op},at={witness})"),
            StopReason::NotLocal => f.write_str("not-local"),
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdversaryKind::General => "general",
            AdversaryKind::Local => "local",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::TrivialEngine;

    fn iv(id: u64, l: f64, r: f64) -> Interval {
        Interval::new(id, l, r).unwrap()
    }

    #[test]
    fn tradeoff_arithmetic() {
        assert_eq!(
            check_tradeoff(256, 8, 1, AdversaryKind::General),
            Some(true)
        );
        assert_eq!(
            check_tradeoff(1_000_000, 2, 1, AdversaryKind::General),
            Some(false)
        );
        assert_eq!(check_tradeoff(16, 2, 0, AdversaryKind::General), None);
        assert_eq!(check_tradeoff(81, 2, 1, AdversaryKind::Local), Some(true));
        assert_eq!(
            check_tradeoff(1 << 20, 2, 1, AdversaryKind::Local),
            Some(false)
        );
    }

    #[test]
    fn figure_signature() {
        let red = Color::palette(0, 0);
        let blue = Color::palette(0, 1);
        let green = Color::palette(0, 2);
        let comp = [iv(1, 0., 4.), iv(2, 1., 3.), iv(4, 5., 8.), iv(5, 7., 10.)];
        let new = iv(3, 2., 6.);
        let colors: BTreeMap<u64, Color> = [(1, red), (2, blue), (4, blue), (5, green)].into();
        let (sig, by_label) = signature(&comp, &new, |id| colors.get(&id).copied());
        assert_eq!(sig.labels, vec![2, 1, 3, 4, 5]);
        assert_eq!(
            sig.colors,
            vec![Some(red), Some(blue), None, Some(blue), Some(green)]
        );
        assert_eq!(by_label, vec![1, 2, 3, 4, 5]);
        let name = |c: Color| match c {
            c if c == red => "red".to_string(),
            c if c == blue => "blue".to_string(),
            _ => "green".to_string(),
        };
        assert_eq!(sig.render(name), "⟨2,1,3,4,5,red,blue,NIL,blue,green⟩");
    }

    #[test]
    fn proper_colorer_stops_after_first_round() {
        let mut e = TrivialEngine::new();
        let t = run_general(&mut e, 64, 1).unwrap();
        assert_eq!(t.rounds.len(), 1);
        assert_eq!(t.rounds[0].survivors.len(), 1);
        assert_eq!(t.stop, StopReason::Exhausted);
        assert!(t.conflict_free());
    }

    #[test]
    fn fresh_local_round_colors() {
        let mut e = FreshColorLocal::new();
        let t = run_local(&mut e, 256, 1).unwrap();
        assert_eq!(t.audit_failures, 0);
        assert!(t.designated_distinct());
        assert!(t.rounds.len() >= 4);
        assert!(t.conflict_free());
    }

    #[test]
    fn component_lookup() {
        let live: BTreeMap<u64, Interval> =
            [(0, iv(0, 0., 1.)), (1, iv(1, 3., 4.)), (2, iv(2, 5., 6.))].into();
        let comp = component_of(&live, &iv(9, 0.5, 3.5));
        let ids: Vec<u64> = comp.iter().map(|i| i.id).collect();
        assert_eq!(ids, vec![0, 1]);
    }
}
