//! Seeded random update traces.

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interval::{Interval, IntervalId};
use crate::trace::UpdateOp;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Where interval endpoints are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// Endpoints on the half-integer grid of `[0, span]`, lengths up to
    /// `max_len`.
    Free { span: f64, max_len: f64 },
    /// Integer endpoints in `{0, …, u-1}`, lengths in `[1, max_len]`.
    Universe { u: u64, max_len: u64 },
    /// Quarter-grid endpoints in `[0, span]`, lengths in `[1, l)`.
    BoundedLength { l: u64, span: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSpec {
    pub ops: usize,
    /// Probability that an op is a delete while something is live.
    pub delete_prob: f64,
    /// Live-set cap; at the cap every op is a delete.
    pub max_live: usize,
    pub shape: Shape,
}

impl TraceSpec {
    pub fn new(ops: usize, shape: Shape) -> Self {
        TraceSpec {
            ops,
            delete_prob: 0.4,
            max_live: usize::MAX,
            shape,
        }
    }

    pub fn delete_prob(mut self, p: f64) -> Self {
        self.delete_prob = p;
        self
    }

    pub fn max_live(mut self, m: usize) -> Self {
        self.max_live = m;
        self
    }
}

pub fn random_interval(rng: &mut impl Rng, id: IntervalId, shape: Shape) -> Interval {
    let (l, r) = match shape {
        Shape::Free { span, max_len } => {
            let l = (rng.gen_range(0.0..span) * 2.0).floor() / 2.0;
            let len = ((rng.gen_range(0.0..max_len) * 2.0).floor() / 2.0).max(0.5);
            (l, l + len)
        }
        Shape::Universe { u, max_len } => {
            let u = u.max(2);
            let l = rng.gen_range(0..u - 1);
            let len = rng.gen_range(1..=max_len.max(1));
            (l as f64, (l + len).min(u - 1) as f64)
        }
        Shape::BoundedLength { l, span } => {
            let left = (rng.gen_range(0.0..span) * 4.0).floor() / 4.0;
            let steps = 4 * (l - 1);
            let len = 1.0 + rng.gen_range(0..steps) as f64 / 4.0;
            (left, left + len)
        }
    };
    Interval::new(id, l, r).expect("generated interval is valid")
}

pub fn random_trace(spec: &TraceSpec, seed: u64) -> Vec<UpdateOp> {
    let mut rng = rng(seed);
    let mut live: Vec<IntervalId> = Vec::new();
    let mut next: IntervalId = 0;
    let mut out = Vec::with_capacity(spec.ops);
    for _ in 0..spec.ops {
        let delete =
            !live.is_empty() && (live.len() >= spec.max_live || rng.gen_bool(spec.delete_prob));
        if delete {
            let at = (0..live.len()).choose(&mut rng).unwrap();
            out.push(UpdateOp::Delete(live.swap_remove(at)));
        } else {
            out.push(UpdateOp::Insert(random_interval(
                &mut rng, next, spec.shape,
            )));
            live.push(next);
            next += 1;
        }
    }
    out
}

/// `n` insertions with no deletes.
pub fn random_insertions(n: usize, shape: Shape, seed: u64) -> Vec<Interval> {
    let mut rng = rng(seed);
    (0..n as IntervalId)
        .map(|id| random_interval(&mut rng, id, shape))
        .collect()
}
