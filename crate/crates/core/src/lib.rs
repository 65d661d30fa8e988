//! Conflict-free coloring of dynamic and kinetic interval sets.

pub mod adversary;
pub mod btree_layout;
pub mod chain;
pub mod coloring;
pub mod dynamic;
pub mod engine;
pub mod error;
pub mod fixed;
pub mod framework;
pub mod grid;
pub mod interval;
pub mod kinetic;
pub mod method;
pub mod online;
pub mod oracle;
pub mod trace;
pub mod workload;

pub use coloring::{ColorEvent, ColoringState, RecolorLedger, UpdateReport};
pub use engine::{Budget, ColoringEngine, TrivialEngine};
pub use error::{Error, Result};
pub use interval::{Color, Coord, Interval, IntervalId};
pub use method::MethodSpec;
pub use oracle::Verdict;
