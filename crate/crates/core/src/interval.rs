//! Closed intervals on the real line and the colors assigned to them.

use std::fmt;

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};

pub type IntervalId = u64;

/// Totally ordered coordinate used as a map key.
pub type Coord = OrderedFloat<f64>;

/// A closed interval `[left, right]` with a caller-chosen identifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub id: IntervalId,
    pub left: f64,
    pub right: f64,
}

impl Interval {
    /// Builds an interval, rejecting degenerate or non-finite input.
    pub fn new(id: IntervalId, left: f64, right: f64) -> Result<Self> {
        if !(left.is_finite() && right.is_finite() && left < right) {
            return Err(Error::InvalidInterval { id, left, right });
        }
        Ok(Interval { id, left, right })
    }

    pub fn contains_point(&self, q: f64) -> bool {
        self.left <= q && q <= self.right
    }

    /// Closed intersection test: touching endpoints count as overlap.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

/// A color: either the universal dummy or a palette color `(level, index)`.
///
/// The dummy color never serves as the unique color at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Dummy,
    Palette { level: u32, index: u32 },
}

impl Color {
    pub const fn palette(level: u32, index: u32) -> Self {
        Color::Palette { level, index }
    }

    pub fn is_dummy(&self) -> bool {
        matches!(self, Color::Dummy)
    }

    pub fn level(&self) -> Option<u32> {
        match self {
            Color::Dummy => None,
            Color::Palette { level, .. } => Some(*level),
        }
    }
}

/// Formats as `dummy` or `<level> <index>`, the token layout of `R` lines.
impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Dummy => write!(f, "dummy"),
            Color::Palette { level, index } => write!(f, "{level} {index}"),
        }
    }
}
