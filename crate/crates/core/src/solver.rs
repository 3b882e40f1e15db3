//! Exact Grundy values by memoized search.
//!
//! A position is split into connected components at every level of the
//! recursion; components are independent subgames, so the value of a
//! position is the nim-sum of its components' values. A single component
//! is valued as the mex over its children.

use std::fmt;
use std::ops::BitXor;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{component_of, movable_in, Graph, Position, VertexClass};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Host graphs up to this order get a flat memo array of `2^n` slots.
const DENSE_MEMO_MAX_ORDER: usize = 16;
const VACANT: u16 = u16::MAX;

/// A nimber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct GrundyValue(u16);

impl GrundyValue {
    pub const ZERO: GrundyValue = GrundyValue(0);
    pub const ONE: GrundyValue = GrundyValue(1);

    /// Panics if `value >= 2^16`.
    pub fn new(value: u32) -> Self {
        assert!(value < 1 << 16, "Grundy value {value} out of range");
        GrundyValue(value as u16)
    }

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn from_parity(odd: bool) -> Self {
        GrundyValue(odd as u16)
    }
}

impl From<u16> for GrundyValue {
    fn from(v: u16) -> Self {
        GrundyValue(v)
    }
}

impl BitXor for GrundyValue {
    type Output = GrundyValue;

    fn bitxor(self, rhs: GrundyValue) -> GrundyValue {
        GrundyValue(self.0 ^ rhs.0)
    }
}

impl fmt::Display for GrundyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Smallest nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = GrundyValue>>(values: I) -> GrundyValue {
    let values: Vec<u16> = values.into_iter().map(|v| v.0).collect();
    // mex of k values is at most k
    let mut present = vec![false; values.len() + 1];
    for v in values {
        if let Some(slot) = present.get_mut(v as usize) {
            *slot = true;
        }
    }
    let m = present.iter().position(|&p| !p).unwrap();
    GrundyValue::new(m as u32)
}

#[inline]
pub fn nim_sum(a: GrundyValue, b: GrundyValue) -> GrundyValue {
    a ^ b
}

/// Closed form for the even/even game: `|V| mod 2`.
pub fn grundy_even_even(g: &Graph) -> GrundyValue {
    GrundyValue::from_parity(g.vertex_count() % 2 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("node budget of {budget} exhausted after visiting {nodes_visited} positions")]
    Budget { nodes_visited: u64, budget: u64 },
    #[error("position does not belong to the solver's host graph")]
    ForeignPosition,
}

enum Store {
    Dense(Vec<u16>),
    Sparse(FxHashMap<u64, u16>),
}

/// Grundy values of alive-vertex subsets of one host graph.
pub struct MemoTable {
    store: Store,
    len: usize,
    nodes_visited: u64,
    node_budget: Option<u64>,
}

impl MemoTable {
    pub fn new(order: usize, node_budget: Option<u64>) -> Self {
        let store = if order <= DENSE_MEMO_MAX_ORDER {
            Store::Dense(vec![VACANT; 1 << order])
        } else {
            Store::Sparse(FxHashMap::default())
        };
        MemoTable {
            store,
            len: 0,
            nodes_visited: 0,
            node_budget,
        }
    }

    #[inline]
    pub fn get(&self, key: VertexSet) -> Option<GrundyValue> {
        match &self.store {
            Store::Dense(slots) => match slots[key.bits() as usize] {
                VACANT => None,
                v => Some(GrundyValue(v)),
            },
            Store::Sparse(map) => map.get(&key.bits()).map(|&v| GrundyValue(v)),
        }
    }

    /// Records a value. Rewriting a key with a different value is a logic
    /// error and panics.
    #[inline]
    pub fn insert(&mut self, key: VertexSet, value: GrundyValue) {
        assert!(value.0 != VACANT);
        let previous = match &mut self.store {
            Store::Dense(slots) => {
                let slot = &mut slots[key.bits() as usize];
                let old = *slot;
                *slot = value.0;
                (old != VACANT).then_some(old)
            }
            Store::Sparse(map) => map.insert(key.bits(), value.0),
        };
        match previous {
            None => self.len += 1,
            Some(old) => assert_eq!(old, value.0, "memo entry {key:?} overwritten"),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    pub fn node_budget(&self) -> Option<u64> {
        self.node_budget
    }

    pub fn set_node_budget(&mut self, budget: Option<u64>) {
        self.node_budget = budget;
    }

    #[inline]
    fn visit(&mut self) -> Result<(), SolveError> {
        if let Some(budget) = self.node_budget {
            if self.nodes_visited >= budget {
                return Err(SolveError::Budget {
                    nodes_visited: self.nodes_visited,
                    budget,
                });
            }
        }
        self.nodes_visited += 1;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub grundy: GrundyValue,
    /// Positions expanded during this solve (memo hits excluded).
    pub nodes_visited: u64,
    /// Entries in the memo table after the solve.
    pub distinct_positions: usize,
    /// Lowest-index move to a zero position; `None` when the value is 0.
    pub optimal_move: Option<usize>,
}

/// Memoized solver bound to one host graph and one move rule.
pub struct Solver<'g> {
    graph: &'g Graph,
    rule: VertexClass,
    memo: MemoTable,
}

impl<'g> Solver<'g> {
    /// Solver with the default node budget.
    pub fn new(graph: &'g Graph, rule: VertexClass) -> Self {
        Self::with_budget(graph, rule, Some(DEFAULT_NODE_BUDGET))
    }

    pub fn with_budget(graph: &'g Graph, rule: VertexClass, budget: Option<u64>) -> Self {
        Solver {
            graph,
            rule,
            memo: MemoTable::new(graph.vertex_count(), budget),
        }
    }

    /// Reuses an existing memo; it must come from a solver on the same
    /// graph and rule.
    pub fn with_memo(graph: &'g Graph, rule: VertexClass, memo: MemoTable) -> Self {
        Solver { graph, rule, memo }
    }

    pub fn into_memo(self) -> MemoTable {
        self.memo
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    pub fn memo_mut(&mut self) -> &mut MemoTable {
        &mut self.memo
    }

    pub fn rule(&self) -> VertexClass {
        self.rule
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Value of the whole host graph.
    pub fn solve_root(&mut self) -> Result<SolveReport, SolveError> {
        self.solve_set(self.graph.vertices())
    }

    pub fn solve(&mut self, p: &Position<'_>) -> Result<SolveReport, SolveError> {
        if !std::ptr::eq(p.graph(), self.graph) && p.graph() != self.graph {
            return Err(SolveError::ForeignPosition);
        }
        self.solve_set(p.alive())
    }

    fn solve_set(&mut self, alive: VertexSet) -> Result<SolveReport, SolveError> {
        let before = self.memo.nodes_visited;
        let grundy = self.value(alive)?;
        let optimal_move = if grundy == GrundyValue::ZERO {
            None
        } else {
            self.first_winning_move(alive)?
        };
        Ok(SolveReport {
            grundy,
            nodes_visited: self.memo.nodes_visited - before,
            distinct_positions: self.memo.len(),
            optimal_move,
        })
    }

    fn first_winning_move(&mut self, alive: VertexSet) -> Result<Option<usize>, SolveError> {
        for v in movable_in(self.graph, alive, self.rule) {
            if self.value(alive.without(v))? == GrundyValue::ZERO {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// Grundy value of the position on `alive`.
    pub fn value(&mut self, alive: VertexSet) -> Result<GrundyValue, SolveError> {
        if let Some(v) = self.memo.get(alive) {
            return Ok(v);
        }
        let Some(first) = alive.first() else {
            return Ok(GrundyValue::ZERO);
        };
        let head = component_of(self.graph, alive, first);
        if head == alive {
            return self.component_value(alive);
        }
        let mut total = self.component_value(head)?;
        let mut rest = alive.difference(head);
        while let Some(v) = rest.first() {
            let comp = component_of(self.graph, rest, v);
            total = total ^ self.component_value(comp)?;
            rest = rest.difference(comp);
        }
        self.memo.insert(alive, total);
        Ok(total)
    }

    fn component_value(&mut self, comp: VertexSet) -> Result<GrundyValue, SolveError> {
        if let Some(v) = self.memo.get(comp) {
            return Ok(v);
        }
        self.memo.visit()?;
        let movable = movable_in(self.graph, comp, self.rule);
        // children are at most 63, so their mex fits one word
        let mut present = 0u64;
        for v in movable {
            let child = self.value(comp.without(v))?.0 as u32;
            if child < 64 {
                present |= 1 << child;
            }
        }
        let result = GrundyValue(present.trailing_ones() as u16);
        self.memo.insert(comp, result);
        Ok(result)
    }
}

/// Value of a whole graph under the default budget.
pub fn grundy(g: &Graph, rule: VertexClass) -> Result<GrundyValue, SolveError> {
    Solver::new(g, rule).value(g.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Position;

    fn gv(v: u16) -> GrundyValue {
        GrundyValue(v)
    }

    #[test]
    fn mex_examples() {
        assert_eq!(mex([]), gv(0));
        assert_eq!(mex([gv(0), gv(1), gv(3)]), gv(2));
        assert_eq!(mex([gv(1), gv(2)]), gv(0));
        assert_eq!(mex([gv(0), gv(0), gv(2), gv(5), gv(1)]), gv(3));
    }

    #[test]
    fn nim_sum_examples() {
        assert_eq!(nim_sum(gv(1), gv(1)), gv(0));
        assert_eq!(nim_sum(gv(2), gv(1)), gv(3));
        for k in 0..20 {
            assert_eq!(nim_sum(gv(0), gv(k)), gv(k));
        }
    }

    #[test]
    #[should_panic]
    fn grundy_value_is_bounded() {
        GrundyValue::new(1 << 16);
    }

    #[test]
    fn closed_form_examples() {
        let odd = VertexClass::OddRule;
        assert_eq!(grundy(&Graph::path(4), odd), Ok(gv(1)));
        assert_eq!(grundy(&Graph::complete(5), odd), Ok(gv(0)));
        assert_eq!(grundy(&Graph::complete_bipartite(3, 3), odd), Ok(gv(1)));
        assert_eq!(grundy(&Graph::complete_bipartite(2, 3), odd), Ok(gv(0)));
    }

    #[test]
    fn paw_has_value_two() {
        // triangle 0-1-2 with pendant 3 on vertex 0
        let paw = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let report = Solver::new(&paw, VertexClass::OddRule).solve_root().unwrap();
        assert_eq!(report.grundy, gv(2));
        // removing 0 leaves K2 + K1 (value 1), removing 3 leaves a triangle (0)
        assert_eq!(report.optimal_move, Some(3));
    }

    #[test]
    fn even_even_examples() {
        assert_eq!(grundy_even_even(&Graph::complete(4)), gv(0));
        assert_eq!(grundy_even_even(&Graph::path(5)), gv(1));
        assert_eq!(grundy_even_even(&Graph::empty(0).unwrap()), gv(0));
        let even = VertexClass::EvenRule;
        assert_eq!(grundy(&Graph::complete(4), even), Ok(gv(0)));
        assert_eq!(grundy(&Graph::path(5), even), Ok(gv(1)));
    }

    #[test]
    fn terminal_position_report() {
        let c4 = Graph::cycle(4);
        let report = Solver::new(&c4, VertexClass::OddRule).solve_root().unwrap();
        assert_eq!(report.grundy, gv(0));
        assert_eq!(report.optimal_move, None);
        assert_eq!(report.nodes_visited, 1);
    }

    #[test]
    fn budget_is_explicit() {
        let k = Graph::complete(10);
        let mut s = Solver::with_budget(&k, VertexClass::OddRule, Some(5));
        assert_eq!(
            s.solve_root(),
            Err(SolveError::Budget { nodes_visited: 5, budget: 5 })
        );
        assert!(s.memo().nodes_visited() <= 5);
        // partial entries are sound, so a retry with more room completes
        s.memo_mut().set_node_budget(None);
        assert_eq!(s.solve_root().unwrap().grundy, gv(1));
    }

    #[test]
    fn foreign_positions_are_rejected() {
        let a = Graph::path(3);
        let b = Graph::path(4);
        let mut s = Solver::new(&a, VertexClass::OddRule);
        assert_eq!(s.solve(&b.position()), Err(SolveError::ForeignPosition));
        let p = Position::new(&a, VertexSet::from_bits(0b011)).unwrap();
        assert_eq!(s.solve(&p).unwrap().grundy, gv(1));
    }

    #[test]
    fn sparse_memo_matches_dense() {
        let g = Graph::path(17).disjoint_union(&Graph::complete(3)).unwrap();
        assert_eq!(grundy(&g, VertexClass::OddRule), Ok(gv(0)));
        let h = Graph::path(18).disjoint_union(&Graph::path(2)).unwrap();
        assert_eq!(grundy(&h, VertexClass::OddRule), Ok(gv(0)));
    }
}
