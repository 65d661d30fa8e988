//! Engine selection by name: `name[:key=value,...]`.
//!
//! ```text
//! trivial
//! fixed-distinct:universe=1024,t=2
//! fixed-chain:universe=4096,t=8
//! dynamic:t=2
//! eps:eps=0.5
//! grid:L=8,inner=trivial
//! greedy-nested
//! fresh-local
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::adversary::FreshColorLocal;
use crate::dynamic::DynamicEngine;
use crate::engine::{ColoringEngine, TrivialEngine};
use crate::error::{Error, Result};
use crate::fixed::{FixedEngine, FixedScheme};
use crate::grid::{EngineFactory, GridEngine};
use crate::online::GreedyNested;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inner {
    Trivial,
    Dynamic,
    Eps,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    Trivial,
    FixedDistinct {
        universe: u64,
        t: usize,
    },
    FixedChain {
        universe: u64,
        t: usize,
    },
    Dynamic {
        t: usize,
    },
    Eps {
        eps: f64,
    },
    Grid {
        l: u64,
        inner: Inner,
        t: usize,
        eps: f64,
    },
    GreedyNested,
    FreshLocal,
}

pub const METHOD_NAMES: [&str; 8] = [
    "trivial",
    "fixed-distinct",
    "fixed-chain",
    "dynamic",
    "eps",
    "grid",
    "greedy-nested",
    "fresh-local",
];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

struct Params<'a> {
    method: &'a str,
    map: BTreeMap<String, String>,
}

impl Params<'_> {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("{}: bad value `{v}` for {key}", self.method))),
        }
    }

    fn need<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?
            .ok_or_else(|| bad(format!("{} requires {key}", self.method)))
    }

    fn done(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(bad(format!("{} does not take {k}", self.method))),
        }
    }
}

impl MethodSpec {
    /// Builds a spec from a method name and `key=value` parameters.
    pub fn from_parts(name: &str, params: BTreeMap<String, String>) -> Result<Self> {
        let mut p = Params {
            method: name,
            map: params,
        };
        let spec = match name {
            "trivial" => MethodSpec::Trivial,
            "fixed-distinct" | "fixed-chain" => {
                let universe = p.need("universe")?;
                let t = p.take("t")?.unwrap_or(2);
                if name == "fixed-distinct" {
                    MethodSpec::FixedDistinct { universe, t }
                } else {
                    MethodSpec::FixedChain { universe, t }
                }
            }
            "dynamic" => MethodSpec::Dynamic {
                t: p.take("t")?.unwrap_or(2),
            },
            "eps" => MethodSpec::Eps {
                eps: p.take("eps")?.unwrap_or(0.5),
            },
            "grid" => {
                let l = p.need("L")?;
                let inner = match p.take::<String>("inner")?.as_deref() {
                    None | Some("trivial") => Inner::Trivial,
                    Some("dynamic") => Inner::Dynamic,
                    Some("eps") => Inner::Eps,
                    Some(other) => return Err(bad(format!("grid: unknown inner `{other}`"))),
                };
                MethodSpec::Grid {
                    l,
                    inner,
                    t: p.take("t")?.unwrap_or(2),
                    eps: p.take("eps")?.unwrap_or(0.5),
                }
            }
            "greedy-nested" => MethodSpec::GreedyNested,
            "fresh-local" => MethodSpec::FreshLocal,
            other => return Err(bad(format!("unknown method `{other}`"))),
        };
        p.done()?;
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Trivial => "trivial",
            MethodSpec::FixedDistinct { .. } => "fixed-distinct",
            MethodSpec::FixedChain { .. } => "fixed-chain",
            MethodSpec::Dynamic { .. } => "dynamic",
            MethodSpec::Eps { .. } => "eps",
            MethodSpec::Grid { .. } => "grid",
            MethodSpec::GreedyNested => "greedy-nested",
            MethodSpec::FreshLocal => "fresh-local",
        }
    }

    /// Parameters in canonical `k=v` form, `;`-separated (CSV safe).
    pub fn params(&self) -> String {
        match self {
            MethodSpec::FixedDistinct { universe, t } | MethodSpec::FixedChain { universe, t } => {
                format!("universe={universe};t={t}")
            }
            MethodSpec::Dynamic { t } => format!("t={t}"),
            MethodSpec::Eps { eps } => format!("eps={eps}"),
            MethodSpec::Grid { l, inner, t, eps } => match inner {
                Inner::Trivial => format!("L={l};inner=trivial"),
                Inner::Dynamic => format!("L={l};inner=dynamic;t={t}"),
                Inner::Eps => format!("L={l};inner=eps;eps={eps}"),
            },
            _ => String::new(),
        }
    }

    pub fn build(&self) -> Result<Box<dyn ColoringEngine>> {
        Ok(match *self {
            MethodSpec::Trivial => Box::new(TrivialEngine::new()),
            MethodSpec::FixedDistinct { universe, t } => {
                Box::new(FixedEngine::new(universe, t, FixedScheme::DistinctColors)?)
            }
            MethodSpec::FixedChain { universe, t } => {
                Box::new(FixedEngine::new(universe, t, FixedScheme::ChainPerNode)?)
            }
            MethodSpec::Dynamic { t } => Box::new(DynamicEngine::with_t(t)?),
            MethodSpec::Eps { eps } => Box::new(DynamicEngine::with_eps(eps)?),
            MethodSpec::Grid { l, inner, t, eps } => {
                let inner_spec = match inner {
                    Inner::Trivial => MethodSpec::Trivial,
                    Inner::Dynamic => MethodSpec::Dynamic { t },
                    Inner::Eps => MethodSpec::Eps { eps },
                };
                inner_spec.build()?;
                Box::new(GridEngine::new(l, inner_spec.factory())?)
            }
            MethodSpec::GreedyNested => Box::new(GreedyNested::new()),
            MethodSpec::FreshLocal => Box::new(FreshColorLocal::new()),
        })
    }

    pub fn factory(&self) -> EngineFactory {
        let spec = self.clone();
        Box::new(move || spec.build())
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split([',', ';']).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
            if params
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(bad(format!("parameter {k} given twice")));
            }
        }
        MethodSpec::from_parts(name.trim(), params)
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params().replace(';', ",");
        if p.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}:{p}", self.name())
        }
    }
}
