//! Kinetic maintenance of a four-color conflict-free coloring for intervals
//! whose endpoints move linearly, plus the crossing-gadget lower bound.
//!
//! The state is combinatorial: the order of all endpoints. Events are swaps
//! of adjacent endpoints, scheduled from the linear trajectories. A chain of
//! intervals is kept such that
//!
//! * (C1) chain members only meet their chain neighbours,
//! * (C2) every other interval is covered by the chain,
//! * (C3) no chain member is contained in another interval,
//!
//! and chain members carry one of three colors, different from their
//! successor's, while everything else is dummy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::chain::build_chain;
use crate::coloring::{ColorEvent, ColoringState, UpdateReport};
use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};
use crate::oracle;

/// Number type used for event times.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn zero() -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn zero() -> Self {
        0.0
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite coordinate")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn zero() -> Self {
        Zero::zero()
    }
}

/// Exact event times.
pub type Exact = BigRational;

pub const CHAIN_COLORS: [Color; 3] = [
    Color::palette(0, 0),
    Color::palette(0, 1),
    Color::palette(0, 2),
];

/// `left(t) = a0 + va·t`, `right(t) = b0 + vb·t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub id: IntervalId,
    pub a0: f64,
    pub va: f64,
    pub b0: f64,
    pub vb: f64,
}

impl Trajectory {
    pub fn left_at(&self, t: f64) -> f64 {
        self.a0 + self.va * t
    }

    pub fn right_at(&self, t: f64) -> f64 {
        self.b0 + self.vb * t
    }

    pub fn at(&self, t: f64) -> Result<Interval> {
        Interval::new(self.id, self.left_at(t), self.right_at(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Endpoint {
    /// Dense index of the interval.
    iv: usize,
    side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Two right endpoints cross.
    RR,
    /// Two left endpoints cross.
    LL,
    /// A right endpoint passes a left endpoint: the intervals start meeting.
    RLMeet,
    /// A left endpoint passes a right endpoint: the intervals separate.
    RLSeparate,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::RR => "RR",
            EventKind::LL => "LL",
            EventKind::RLMeet => "RL-meet",
            EventKind::RLSeparate => "RL-separate",
        })
    }
}

/// Which rule handled an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticEvent<S> {
    pub time: S,
    pub kind: EventKind,
    /// Interval owning the endpoint that was first before the swap.
    pub first: IntervalId,
    pub second: IntervalId,
    /// Position of `first`'s endpoint in the endpoint order.
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventOutcome {
    pub time: f64,
    pub kind: EventKind,
    pub first: IntervalId,
    pub second: IntervalId,
    pub case: Case,
    pub added: Vec<IntervalId>,
    pub removed: Vec<IntervalId>,
    pub report: UpdateReport,
}

#[derive(Debug, Clone)]
pub struct KineticState<S: Scalar> {
    traj: Vec<Trajectory>,
    p0: Vec<[S; 2]>,
    vel: Vec<[S; 2]>,
    order: Vec<Endpoint>,
    rank: Vec<[usize; 2]>,
    /// Chain members by dense index, in left-endpoint order.
    chain: Vec<usize>,
    in_chain: Vec<bool>,
    state: ColoringState,
    now: S,
}

fn side_ix(s: Side) -> usize {
    match s {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl<S: Scalar> KineticState<S> {
    /// Orders the endpoints at `t0`, builds the greedy chain and colors it
    /// alternately with the first two chain colors.
    pub fn initialize(scenario: &[Trajectory], t0: f64) -> Result<Self> {
        let ids: BTreeSet<IntervalId> = scenario.iter().map(|t| t.id).collect();
        if ids.len() != scenario.len() {
            return Err(Error::InvalidParameter("duplicate trajectory id".into()));
        }
        let snapshot: Vec<Interval> = scenario.iter().map(|t| t.at(t0)).collect::<Result<_>>()?;
        let mut pts: Vec<(f64, Endpoint)> = Vec::with_capacity(2 * scenario.len());
        for (k, iv) in snapshot.iter().enumerate() {
            pts.push((
                iv.left,
                Endpoint {
                    iv: k,
                    side: Side::Left,
                },
            ));
            pts.push((
                iv.right,
                Endpoint {
                    iv: k,
                    side: Side::Right,
                },
            ));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter(format!(
                "endpoints of intervals {} and {} coincide at t0",
                scenario[w[0].1.iv].id, scenario[w[1].1.iv].id
            )));
        }
        let order: Vec<Endpoint> = pts.into_iter().map(|p| p.1).collect();
        let mut rank = vec![[0; 2]; scenario.len()];
        for (r, e) in order.iter().enumerate() {
            rank[e.iv][side_ix(e.side)] = r;
        }
        let p0 = scenario
            .iter()
            .map(|t| [S::from_f64(t.a0), S::from_f64(t.b0)])
            .collect();
        let vel = scenario
            .iter()
            .map(|t| [S::from_f64(t.va), S::from_f64(t.vb)])
            .collect();
        let mut s = KineticState {
            traj: scenario.to_vec(),
            p0,
            vel,
            order,
            rank,
            chain: Vec::new(),
            in_chain: vec![false; scenario.len()],
            state: ColoringState::new(),
            now: S::from_f64(t0),
        };
        let ranked: Vec<Interval> = (0..scenario.len()).map(|k| s.rank_interval(k)).collect();
        let chain = build_chain(&ranked);
        s.chain = chain.members.iter().map(|&k| k as usize).collect();
        for &k in &s.chain {
            s.in_chain[k] = true;
        }
        for k in 0..scenario.len() {
            let c = match s.chain.iter().position(|&m| m == k) {
                Some(p) => CHAIN_COLORS[p % 2],
                None => Color::Dummy,
            };
            s.state.set(s.traj[k].id, c);
        }
        s.state.commit(false);
        s.check_invariants()?;
        Ok(s)
    }

    pub fn now(&self) -> &S {
        &self.now
    }

    pub fn coloring(&self) -> &ColoringState {
        &self.state
    }

    pub fn chain_ids(&self) -> Vec<IntervalId> {
        self.chain.iter().map(|&k| self.traj[k].id).collect()
    }

    pub fn len(&self) -> usize {
        self.traj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traj.is_empty()
    }

    /// Interval `k` in rank coordinates, with id = dense index.
    fn rank_interval(&self, k: usize) -> Interval {
        let [l, r] = self.rank[k];
        Interval::new(k as IntervalId, l as f64, r as f64).expect("left rank below right rank")
    }

    /// All intervals in rank coordinates with their real ids.
    pub fn rank_snapshot(&self) -> Vec<Interval> {
        (0..self.traj.len())
            .map(|k| {
                let [l, r] = self.rank[k];
                Interval::new(self.traj[k].id, l as f64, r as f64).expect("proper ranks")
            })
            .collect()
    }

    fn pos_of(&self, e: Endpoint) -> (&S, &S) {
        let s = side_ix(e.side);
        (&self.p0[e.iv][s], &self.vel[e.iv][s])
    }

    /// Earliest adjacent swap, ties broken by interval ids then position.
    pub fn next_event(&self) -> Option<KineticEvent<S>> {
        let mut best: Option<(S, (IntervalId, IntervalId), usize)> = None;
        for k in 0..self.order.len().saturating_sub(1) {
            let (x, y) = (self.order[k], self.order[k + 1]);
            if x.iv == y.iv {
                continue;
            }
            let (px, vx) = self.pos_of(x);
            let (py, vy) = self.pos_of(y);
            if vx.partial_cmp(vy) != Some(std::cmp::Ordering::Greater) {
                continue;
            }
            let mut t = (py.clone() - px.clone()) / (vx.clone() - vy.clone());
            if t < self.now {
                t = self.now.clone();
            }
            let (a, b) = (self.traj[x.iv].id, self.traj[y.iv].id);
            let key = (a.min(b), a.max(b));
            let better = match &best {
                None => true,
                Some((bt, bk, _)) => t < *bt || (t == *bt && key < *bk),
            };
            if better {
                best = Some((t, key, k));
            }
        }
        best.map(|(time, _, k)| {
            let (x, y) = (self.order[k], self.order[k + 1]);
            let kind = match (x.side, y.side) {
                (Side::Right, Side::Right) => EventKind::RR,
                (Side::Left, Side::Left) => EventKind::LL,
                (Side::Right, Side::Left) => EventKind::RLMeet,
                (Side::Left, Side::Right) => EventKind::RLSeparate,
            };
            KineticEvent {
                time,
                kind,
                first: self.traj[x.iv].id,
                second: self.traj[y.iv].id,
                pos: k,
            }
        })
    }

    fn l(&self, k: usize) -> usize {
        self.rank[k][0]
    }

    fn r(&self, k: usize) -> usize {
        self.rank[k][1]
    }

    fn meets(&self, a: usize, b: usize) -> bool {
        self.l(a) < self.r(b) && self.l(b) < self.r(a)
    }

    fn chain_pos(&self, k: usize) -> Option<usize> {
        self.chain.iter().position(|&m| m == k)
    }

    fn pred(&self, k: usize) -> Option<usize> {
        let p = self.chain_pos(k)?;
        p.checked_sub(1).map(|q| self.chain[q])
    }

    fn succ(&self, k: usize) -> Option<usize> {
        let p = self.chain_pos(k)?;
        self.chain.get(p + 1).copied()
    }

    /// Whether interval `k` lies inside the union of the chain.
    fn covered(&self, k: usize) -> bool {
        let (lo, hi) = (self.l(k), self.r(k));
        let mut reach: Option<(usize, usize)> = None;
        for &m in &self.chain {
            let (ml, mr) = (self.l(m), self.r(m));
            reach = match reach {
                Some((a, b)) if ml <= b => Some((a, b.max(mr))),
                _ => Some((ml, mr)),
            };
            let (a, b) = reach.unwrap();
            if a <= lo && hi <= b {
                return true;
            }
        }
        false
    }

    fn add(&mut self, k: usize, added: &mut Vec<usize>) {
        debug_assert!(!self.in_chain[k]);
        self.in_chain[k] = true;
        self.chain.push(k);
        added.push(k);
    }

    fn remove(&mut self, k: usize, removed: &mut Vec<usize>) {
        debug_assert!(self.in_chain[k]);
        self.in_chain[k] = false;
        self.chain.retain(|&m| m != k);
        removed.push(k);
    }

    /// Case A and, mirrored, case B. `i` is contained in `j` before the
    /// event iff `contained_before`; `toward` walks the chain towards the
    /// side where `j` sticks out.
    fn containment_case(
        &mut self,
        i: usize,
        j: usize,
        contained_before: bool,
        mirrored: bool,
        added: &mut Vec<usize>,
        removed: &mut Vec<usize>,
    ) -> Result<()> {
        let toward = |s: &Self, k: usize| if mirrored { s.succ(k) } else { s.pred(k) };
        if contained_before {
            if self.in_chain[i] {
                return Err(Error::Internal(format!(
                    "contained interval {} was a chain member",
                    self.traj[i].id
                )));
            }
            if self.covered(i) {
                return Ok(());
            }
            if !self.in_chain[j] {
                return Err(Error::Internal(format!(
                    "uncovered {} but container {} is off the chain",
                    self.traj[i].id, self.traj[j].id
                )));
            }
            let beyond = toward(self, j);
            self.add(i, added);
            if beyond.is_some_and(|b| self.meets(i, b)) {
                self.remove(j, removed);
            }
        } else {
            if !self.in_chain[i] {
                return Ok(());
            }
            let p = toward(self, i);
            let pp = p.and_then(|p| toward(self, p));
            self.remove(i, removed);
            if self.in_chain[j] {
                return Ok(());
            }
            self.add(j, added);
            if let (Some(p), Some(pp)) = (p, pp) {
                if self.meets(pp, j) {
                    self.remove(p, removed);
                }
            }
        }
        Ok(())
    }

    fn sort_chain(&mut self) {
        let rank = &self.rank;
        self.chain.sort_by_key(|&k| rank[k][0]);
    }

    fn color(&self, k: usize) -> Color {
        self.state.get(self.traj[k].id).unwrap_or(Color::Dummy)
    }

    fn pick(&self, avoid: &[Option<Color>]) -> Color {
        *CHAIN_COLORS
            .iter()
            .find(|c| !avoid.contains(&Some(**c)))
            .expect("three chain colors leave one free")
    }

    /// Removed members go dummy, adjacent equal colors are split by
    /// recoloring the left member, added members get a color unlike both
    /// neighbours.
    fn repair_colors(&mut self, added: &[usize], removed: &[usize]) {
        for &k in removed {
            if !self.in_chain[k] {
                self.state.set(self.traj[k].id, Color::Dummy);
            }
        }
        let fresh = |k: usize| added.contains(&k);
        for p in 0..self.chain.len().saturating_sub(1) {
            let (x, y) = (self.chain[p], self.chain[p + 1]);
            if fresh(x) || fresh(y) || self.color(x) != self.color(y) {
                continue;
            }
            let before = p
                .checked_sub(1)
                .map(|q| self.chain[q])
                .filter(|&q| !fresh(q))
                .map(|q| self.color(q));
            let c = self.pick(&[before, Some(self.color(y))]);
            self.state.set(self.traj[x].id, c);
        }
        for &k in added {
            let p = self.pred(k).map(|q| self.color(q));
            let s = self.succ(k).map(|q| self.color(q));
            let c = self.pick(&[p, s]);
            self.state.set(self.traj[k].id, c);
        }
    }

    /// Applies the queue head: swaps the two endpoints, repairs the chain
    /// and its colors.
    pub fn handle_event(&mut self, ev: &KineticEvent<S>) -> Result<EventOutcome> {
        let k = ev.pos;
        let (x, y) = (self.order[k], self.order[k + 1]);
        if self.traj[x.iv].id != ev.first || self.traj[y.iv].id != ev.second {
            return Err(Error::Internal("stale kinetic event".into()));
        }
        self.order.swap(k, k + 1);
        self.rank[x.iv][side_ix(x.side)] = k + 1;
        self.rank[y.iv][side_ix(y.side)] = k;
        self.now = ev.time.clone();

        let mut added = Vec::new();
        let mut removed = Vec::new();
        let case = match ev.kind {
            EventKind::RR => {
                // the interval with the later left endpoint is the inner one
                let (i, j) = if self.l(x.iv) > self.l(y.iv) {
                    (x.iv, y.iv)
                } else {
                    (y.iv, x.iv)
                };
                let before = i == x.iv;
                self.containment_case(i, j, before, false, &mut added, &mut removed)?;
                if before {
                    Case::A1
                } else {
                    Case::A2
                }
            }
            EventKind::LL => {
                let (i, j) = if self.r(x.iv) < self.r(y.iv) {
                    (x.iv, y.iv)
                } else {
                    (y.iv, x.iv)
                };
                let before = i == y.iv;
                self.containment_case(i, j, before, true, &mut added, &mut removed)?;
                if before {
                    Case::B1
                } else {
                    Case::B2
                }
            }
            EventKind::RLMeet => {
                let (i, j) = (x.iv, y.iv);
                if self.in_chain[i] && self.in_chain[j] {
                    if let Some(mid) = self.succ(i).filter(|&m| self.succ(m) == Some(j)) {
                        self.remove(mid, &mut removed);
                    }
                }
                Case::C1
            }
            EventKind::RLSeparate => {
                let (i, j) = (y.iv, x.iv);
                if self.in_chain[i] && self.in_chain[j] {
                    let bridge = (0..self.traj.len())
                        .filter(|&m| {
                            !self.in_chain[m] && self.l(m) < self.r(i) && self.r(m) > self.l(j)
                        })
                        .min_by_key(|&m| self.l(m));
                    if let Some(b) = bridge {
                        let p = self.pred(i);
                        let s = self.succ(j);
                        self.add(b, &mut added);
                        if p.is_some_and(|p| self.meets(b, p)) {
                            self.remove(i, &mut removed);
                        }
                        if s.is_some_and(|s| self.meets(b, s)) {
                            self.remove(j, &mut removed);
                        }
                    }
                }
                Case::C2
            }
        };
        self.sort_chain();
        if added.len() > 1 || removed.len() > 2 {
            return Err(Error::Internal(format!(
                "event changed the chain by +{} -{}",
                added.len(),
                removed.len()
            )));
        }
        self.repair_colors(&added, &removed);
        let report = self.state.commit(false);
        if report.recolorings > 3 {
            return Err(Error::Internal(format!(
                "event needed {} recolorings",
                report.recolorings
            )));
        }
        let ids = |v: &[usize]| v.iter().map(|&k| self.traj[k].id).collect();
        Ok(EventOutcome {
            time: ev.time.to_f64(),
            kind: ev.kind,
            first: ev.first,
            second: ev.second,
            case,
            added: ids(&added),
            removed: ids(&removed),
            report,
        })
    }

    /// (C1)–(C3), the color invariant, and the oracle on rank coordinates.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(m));
        let n = self.traj.len();
        let id = |k: usize| self.traj[k].id;
        for w in self.chain.windows(2) {
            if self.l(w[0]) >= self.l(w[1]) {
                return fail("chain out of order".into());
            }
        }
        for w in self.chain.windows(3) {
            if self.meets(w[0], w[2]) {
                return fail(format!(
                    "C1: chain members {} and {} meet",
                    id(w[0]),
                    id(w[2])
                ));
            }
        }
        let mut segments: Vec<(usize, usize)> = Vec::new();
        for &m in &self.chain {
            match segments.last_mut() {
                Some(seg) if self.l(m) <= seg.1 => seg.1 = seg.1.max(self.r(m)),
                _ => segments.push((self.l(m), self.r(m))),
            }
        }
        for k in (0..n).filter(|&k| !self.in_chain[k]) {
            let at = segments.partition_point(|s| s.0 <= self.l(k));
            let ok = at > 0 && segments[at - 1].1 >= self.r(k);
            if !ok {
                return fail(format!("C2: interval {} not covered by the chain", id(k)));
            }
        }
        let mut by_left: Vec<usize> = (0..n).collect();
        by_left.sort_by_key(|&k| self.l(k));
        let mut max_right: Option<usize> = None;
        for &k in &by_left {
            if self.in_chain[k] && max_right.is_some_and(|r| r > self.r(k)) {
                return fail(format!(
                    "C3: chain member {} is contained in another interval",
                    id(k)
                ));
            }
            max_right = Some(max_right.map_or(self.r(k), |r| r.max(self.r(k))));
        }
        for k in 0..n {
            let c = self.color(k);
            if self.in_chain[k] {
                if !CHAIN_COLORS.contains(&c) {
                    return fail(format!("chain member {} has color {c:?}", id(k)));
                }
                if self.succ(k).is_some_and(|s| self.color(s) == c) {
                    return fail(format!(
                        "chain member {} shares its successor's color",
                        id(k)
                    ));
                }
            } else if c != Color::Dummy {
                return fail(format!("non-chain interval {} is not dummy", id(k)));
            }
        }
        if !oracle::is_conflict_free(&self.rank_snapshot(), self.state.assignment())?.is_ok() {
            return fail("coloring is not conflict-free".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Audit {
    Every,
    Final,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticRun {
    pub events: Vec<EventOutcome>,
    pub initial: Vec<ColorEvent>,
    pub total_recolorings: u64,
    pub max_recolorings: usize,
    /// Distinct colors ever used, dummy included.
    pub colors_ever: usize,
}

/// Every trajectory must stay a proper interval on `[t0, until]`.
pub fn validate(scenario: &[Trajectory], t0: f64, until: f64) -> Result<()> {
    for t in scenario {
        for at in [t0, until] {
            if t.left_at(at).partial_cmp(&t.right_at(at)) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidInterval {
                    id: t.id,
                    left: t.left_at(at),
                    right: t.right_at(at),
                });
            }
        }
    }
    Ok(())
}

/// Simulates from `t0` through every event up to `until`.
pub fn simulate<S: Scalar>(
    scenario: &[Trajectory],
    t0: f64,
    until: f64,
    audit: Audit,
) -> Result<KineticRun> {
    validate(scenario, t0, until)?;
    let mut s = KineticState::<S>::initialize(scenario, t0)?;
    let initial = s
        .coloring()
        .assignment()
        .iter()
        .map(|(&id, &color)| ColorEvent { id, color })
        .collect();
    let limit = S::from_f64(until);
    let mut events = Vec::new();
    while let Some(ev) = s.next_event() {
        if ev.time > limit {
            break;
        }
        let out = s.handle_event(&ev)?;
        if audit == Audit::Every {
            s.check_invariants()?;
        }
        events.push(out);
    }
    s.check_invariants()?;
    let ledger = s.coloring().ledger();
    Ok(KineticRun {
        total_recolorings: ledger.total(),
        max_recolorings: ledger.max_per_update(),
        colors_ever: s.coloring().colors_ever().len(),
        initial,
        events,
    })
}

/// Relative endpoints of the four gadget intervals.
pub const GADGET: [(f64, f64); 4] = [(0.0, 0.55), (0.1, 0.5), (0.2, 0.9), (0.3, 0.8)];

/// Overlap sets realized inside one gadget, as gadget indices.
pub const GADGET_SETS: [&[usize]; 7] = [
    &[0],
    &[0, 1],
    &[0, 1, 2],
    &[0, 1, 2, 3],
    &[0, 2, 3],
    &[2, 3],
    &[2],
];

/// Four rigid intervals at `offset`, all moving at `speed`, with ids
/// `first_id..first_id + 4`.
pub fn gadget(first_id: IntervalId, offset: f64, speed: f64) -> [Trajectory; 4] {
    let mut out = [Trajectory {
        id: 0,
        a0: 0.0,
        va: 0.0,
        b0: 0.0,
        vb: 0.0,
    }; 4];
    for (k, (a, b)) in GADGET.iter().enumerate() {
        out[k] = Trajectory {
            id: first_id + k as IntervalId,
            a0: offset + a,
            va: speed,
            b0: offset + b,
            vb: speed,
        };
    }
    out
}

/// `n` unit-speed gadgets with period 3 to the left of `n` stationary
/// gadgets with period `3n + 1`; ids `4g..4g+4` for gadget `g`, movers
/// first.
pub fn lowerbound_scenario(n: usize) -> Vec<Trajectory> {
    let mut out = Vec::with_capacity(8 * n);
    for k in 0..n {
        out.extend(gadget(
            4 * k as IntervalId,
            3.0 * k as f64 - 3.0 * n as f64,
            1.0,
        ));
    }
    for j in 0..n {
        let id = 4 * (n + j) as IntervalId;
        out.extend(gadget(id, j as f64 * (3 * n + 1) as f64, 0.0));
    }
    out
}

/// Time by which every mover has passed every stationary gadget.
pub fn lowerbound_until(n: usize) -> f64 {
    ((n - 1) * (3 * n + 1) + 3 * n + 2) as f64
}

/// Gadget of an interval id in [`lowerbound_scenario`].
pub fn gadget_of(id: IntervalId) -> usize {
    (id / 4) as usize
}

fn has_unique(colors: &[u8], members: impl Iterator<Item = usize>) -> bool {
    let mut count = [0u8; 16];
    for m in members {
        count[colors[m] as usize] += 1;
    }
    count.contains(&1)
}

/// Searches plain colorings with `k` colors of one gadget (`two = false`,
/// intervals 0..4) or two gadgets (intervals 0..8) in which every overlap
/// set, and with two gadgets every union `G_i ∪ H_j`, has a unique color.
pub fn gadget_coloring(k: u8, two: bool) -> Option<Vec<u8>> {
    assert!((1..=16).contains(&k), "color count out of range");
    let m = if two { 8 } else { 4 };
    let total = (k as u64).pow(m as u32);
    let mut colors = vec![0u8; m];
    'next: for code in 0..total {
        let mut c = code;
        for slot in colors.iter_mut() {
            *slot = (c % k as u64) as u8;
            c /= k as u64;
        }
        for g in GADGET_SETS {
            if !has_unique(&colors, g.iter().copied()) {
                continue 'next;
            }
            if two && !has_unique(&colors, g.iter().map(|x| x + 4)) {
                continue 'next;
            }
        }
        if two {
            for g in GADGET_SETS {
                for h in GADGET_SETS {
                    if !has_unique(&colors, g.iter().copied().chain(h.iter().map(|x| x + 4))) {
                        continue 'next;
                    }
                }
            }
        }
        return Some(colors);
    }
    None
}

/// True iff no four-coloring of two gadgets serves all overlap sets.
pub fn verify_gadget_lemma() -> bool {
    gadget_coloring(4, true).is_none()
}

pub fn parse_scenario(text: &str) -> Result<Vec<Trajectory>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: n + 1,
            message,
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 || f[0] != "K" {
            return Err(err(format!("expected `K id a0 va b0 vb`, got `{line}`")));
        }
        let id = f[1]
            .parse()
            .map_err(|_| err(format!("bad id `{}`", f[1])))?;
        let mut nums = [0.0; 4];
        for (slot, s) in nums.iter_mut().zip(&f[2..]) {
            *slot = s
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(format!("bad number `{s}`")))?;
        }
        out.push(Trajectory {
            id,
            a0: nums[0],
            va: nums[1],
            b0: nums[2],
            vb: nums[3],
        });
    }
    Ok(out)
}

pub fn format_scenario(scenario: &[Trajectory]) -> String {
    use crate::trace::fmt_coord;
    scenario
        .iter()
        .map(|t| {
            format!(
                "K {} {} {} {} {}\n",
                t.id,
                fmt_coord(t.a0),
                fmt_coord(t.va),
                fmt_coord(t.b0),
                fmt_coord(t.vb)
            )
        })
        .collect()
}

/// `n` intervals on `[0, span]` with lengths in `[1, 10]` and speeds in
/// `[-1, 1]`; each length changes by at most half over `[0, horizon]`.
/// Endpoints are pairwise distinct at time 0.
pub fn random_scenario(rng: &mut impl Rng, n: usize, span: f64, horizon: f64) -> Vec<Trajectory> {
    let mut taken: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a0: f64 = rng.gen_range(0.0..span);
        let len: f64 = rng.gen_range(1.0..10.0);
        let va: f64 = rng.gen_range(-1.0..1.0);
        let drift = len / (2.0 * horizon);
        let vb = va + rng.gen_range(-drift..drift);
        let b0 = a0 + len;
        if taken.contains(&a0.to_bits()) || taken.contains(&b0.to_bits()) {
            continue;
        }
        taken.extend([a0.to_bits(), b0.to_bits()]);
        out.push(Trajectory {
            id: out.len() as IntervalId,
            a0,
            va,
            b0,
            vb,
        });
    }
    out
}

/// Gadget pairs `(mover, stationary)` with at least one event between them.
pub fn crossing_pairs(events: &[EventOutcome], n: usize) -> BTreeSet<(usize, usize)> {
    events
        .iter()
        .filter_map(|e| {
            let (a, b) = (gadget_of(e.first), gadget_of(e.second));
            let (m, s) = (a.min(b), a.max(b));
            (m < n && s >= n).then_some((m, s))
        })
        .collect()
}

/// Recolorings per gadget pair, charged to the pair whose event caused them.
pub fn recolorings_by_pair(events: &[EventOutcome], n: usize) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for e in events {
        let (a, b) = (gadget_of(e.first), gadget_of(e.second));
        let (m, s) = (a.min(b), a.max(b));
        if m < n && s >= n {
            *out.entry((m, s)).or_default() += e.report.recolorings;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn still(id: u64, a: f64, b: f64) -> Trajectory {
        Trajectory {
            id,
            a0: a,
            va: 0.0,
            b0: b,
            vb: 0.0,
        }
    }

    #[test]
    fn single_static_interval() {
        let s = KineticState::<f64>::initialize(&[still(0, 0., 1.)], 0.0).unwrap();
        assert_eq!(s.chain_ids(), vec![0]);
        assert_eq!(s.coloring().get(0), Some(CHAIN_COLORS[0]));
        assert!(s.next_event().is_none());
    }

    #[test]
    fn linear_solve() {
        let mover = Trajectory {
            id: 0,
            a0: 0.0,
            va: 1.0,
            b0: 1.0,
            vb: 1.0,
        };
        let s = KineticState::<f64>::initialize(&[mover, still(1, 5.0, 6.0)], 0.0).unwrap();
        let ev = s.next_event().unwrap();
        assert_eq!(ev.kind, EventKind::RLMeet);
        assert_eq!(ev.time, 4.0);
        let ex =
            KineticState::<BigRational>::initialize(&[mover, still(1, 5.0, 6.0)], 0.0).unwrap();
        assert_eq!(ex.next_event().unwrap().time, BigRational::from_f64(4.0));
    }

    #[test]
    fn three_link_layout() {
        let set = [
            still(0, 0., 3.),
            still(1, 1., 2.),
            still(2, 2.2, 6.),
            still(3, 2.5, 5.),
            still(4, 5.5, 9.),
        ];
        let s = KineticState::<f64>::initialize(&set, 0.0).unwrap();
        assert_eq!(s.chain_ids(), vec![0, 2, 4]);
        let colors: Vec<Color> = [0, 2, 4]
            .iter()
            .map(|&i| s.coloring().get(i).unwrap())
            .collect();
        assert_eq!(
            colors,
            vec![CHAIN_COLORS[0], CHAIN_COLORS[1], CHAIN_COLORS[0]]
        );
    }

    #[test]
    fn coincident_endpoints_rejected() {
        assert!(
            KineticState::<f64>::initialize(&[still(0, 0., 1.), still(1, 1., 2.)], 0.0).is_err()
        );
    }

    #[test]
    fn gadget_sets_realized() {
        let g: Vec<Interval> = gadget(0, 0.0, 0.0)
            .iter()
            .map(|t| t.at(0.0).unwrap())
            .collect();
        let mut seen = BTreeSet::new();
        for q in oracle::elementary_regions(&g) {
            seen.insert(oracle::stabbing_set(&g, q));
        }
        for set in GADGET_SETS {
            let ids: BTreeSet<IntervalId> = set.iter().map(|&k| k as IntervalId).collect();
            assert!(seen.contains(&ids), "missing overlap set {ids:?}");
        }
        let moved = gadget(0, 0.0, 2.0);
        assert_eq!(moved[0].left_at(1.0), 2.0);
    }

    #[test]
    fn lemma_and_relaxations() {
        assert!(verify_gadget_lemma());
        assert!(gadget_coloring(5, true).is_some());
        assert!(gadget_coloring(4, false).is_some());
    }

    #[test]
    fn scenario_roundtrip() {
        let sc = lowerbound_scenario(2);
        assert_eq!(sc.len(), 16);
        assert_eq!(parse_scenario(&format_scenario(&sc)).unwrap(), sc);
        assert!(parse_scenario("K 1 2 3").is_err());
    }

    #[test]
    fn three_gadget_crossings() {
        let n = 3;
        let run = simulate::<f64>(
            &lowerbound_scenario(n),
            0.0,
            lowerbound_until(n),
            Audit::Every,
        )
        .unwrap();
        assert_eq!(crossing_pairs(&run.events, n).len(), 9);
        assert!(run.max_recolorings <= 3);
        assert!(run.colors_ever <= 4);
    }
}
