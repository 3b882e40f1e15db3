//! Value census over all labelled graphs of small order.
//!
//! Counts are over labelled graphs; isomorphic copies are counted separately.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::to_graph6;
use crate::generate::{graph_from_mask, pair_count, EnumerationError, DEFAULT_ENUMERATION_CAP};
use crate::graph::VertexClass;
use crate::solver::{GrundyValue, SolveError, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CensusKey {
    pub value: GrundyValue,
    pub n: usize,
    pub edges: usize,
    pub bipartite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    #[serde(flatten)]
    pub key: CensusKey,
    pub count: u64,
}

/// First graph of a value in (order, size, edge mask) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalExample {
    pub value: GrundyValue,
    pub n: usize,
    pub edges: usize,
    pub mask: u64,
    pub graph6: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusTable {
    pub max_n: usize,
    pub rule: VertexClass,
    pub rows: Vec<CensusRow>,
    pub minimal: Vec<MinimalExample>,
    /// Set when the census stopped early; rows then cover orders below `max_n` only.
    pub partial: bool,
}

impl CensusTable {
    pub fn minimal_for(&self, value: GrundyValue) -> Option<&MinimalExample> {
        self.minimal.iter().find(|m| m.value == value)
    }

    /// Number of labelled graphs of order `n` with the given value.
    pub fn count(&self, value: GrundyValue, n: usize) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.key.value == value && r.key.n == n)
            .map(|r| r.count)
            .sum()
    }

    pub fn values(&self) -> Vec<GrundyValue> {
        let mut v: Vec<_> = self.rows.iter().map(|r| r.key.value).collect();
        v.dedup();
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "census of labelled graphs, {} rule, orders 0..={}{}\n",
            self.rule,
            self.max_n,
            if self.partial { " (PARTIAL)" } else { "" }
        );
        out.push_str("value      n  edges  bipartite  count\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:>5}  {:>5}  {:>5}  {:>9}  {:>5}\n",
                r.key.value.value(),
                r.key.n,
                r.key.edges,
                if r.key.bipartite { "yes" } else { "no" },
                r.count
            ));
        }
        out.push_str("minimal examples (order, size, edge mask):\n");
        for m in &self.minimal {
            out.push_str(&format!(
                "  value {}: n={} |E|={} mask={} graph6={}\n",
                m.value, m.n, m.edges, m.mask, m.graph6
            ));
        }
        out
    }

    /// One JSON line per row followed by one per minimal example.
    pub fn to_records(&self) -> Vec<String> {
        let rows = self.rows.iter().map(|r| {
            let mut v = serde_json::to_value(r).unwrap();
            v["kind"] = "row".into();
            v.to_string()
        });
        let mins = self.minimal.iter().map(|m| {
            let mut v = serde_json::to_value(m).unwrap();
            v["kind"] = "minimal".into();
            v.to_string()
        });
        let mut out: Vec<String> = rows.chain(mins).collect();
        out.push(
            serde_json::json!({"kind": "summary", "max_n": self.max_n, "rule": self.rule, "partial": self.partial})
                .to_string(),
        );
        out
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("{source}; census truncated")]
    Budget {
        partial: Box<CensusTable>,
        source: SolveError,
    },
}

#[derive(Default)]
struct Level {
    counts: BTreeMap<CensusKey, u64>,
    minimal: BTreeMap<GrundyValue, (usize, u64)>,
}

impl Level {
    fn merge(mut self, other: Level) -> Level {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        for (v, cand) in other.minimal {
            let e = self.minimal.entry(v).or_insert(cand);
            *e = (*e).min(cand);
        }
        self
    }
}

/// Solves every labelled graph of order `0..=max_n` under `rule`.
pub fn census(max_n: usize, rule: VertexClass, budget: Option<u64>) -> Result<CensusTable, CensusError> {
    if max_n > DEFAULT_ENUMERATION_CAP {
        return Err(EnumerationError {
            n: max_n,
            cap: DEFAULT_ENUMERATION_CAP,
        }
        .into());
    }
    let mut total = Level::default();
    let mut minimal: BTreeMap<GrundyValue, MinimalExample> = BTreeMap::new();
    for n in 0..=max_n {
        let level = (0..1u64 << pair_count(n))
            .into_par_iter()
            .map(|mask| {
                let g = graph_from_mask(n, mask);
                let value = Solver::with_budget(&g, rule, budget).value(g.vertices())?;
                let key = CensusKey {
                    value,
                    n,
                    edges: g.edge_count(),
                    bipartite: g.is_bipartite(),
                };
                let mut l = Level::default();
                l.counts.insert(key, 1);
                l.minimal.insert(value, (key.edges, mask));
                Ok(l)
            })
            .try_reduce(Level::default, |a, b| Ok(a.merge(b)));
        let level = match level {
            Ok(l) => l,
            Err(source) => {
                return Err(CensusError::Budget {
                    partial: Box::new(assemble(max_n, rule, total, minimal, true)),
                    source,
                })
            }
        };
        for (&value, &(edges, mask)) in &level.minimal {
            minimal.entry(value).or_insert_with(|| MinimalExample {
                value,
                n,
                edges,
                mask,
                graph6: to_graph6(&graph_from_mask(n, mask)),
            });
        }
        total = total.merge(Level {
            counts: level.counts,
            minimal: BTreeMap::new(),
        });
    }
    Ok(assemble(max_n, rule, total, minimal, false))
}

fn assemble(
    max_n: usize,
    rule: VertexClass,
    total: Level,
    minimal: BTreeMap<GrundyValue, MinimalExample>,
    partial: bool,
) -> CensusTable {
    CensusTable {
        max_n,
        rule,
        rows: total
            .counts
            .into_iter()
            .map(|(key, count)| CensusRow { key, count })
            .collect(),
        minimal: minimal.into_values().collect(),
        partial,
    }
}
