//! Closed Eulerian trails by Hierholzer's algorithm.
//!
//! This is a constructive route to the Euler condition that never looks at
//! degree parity: a trail is built and then checked edge by edge.

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::graph::{component_of, Position};

/// Working storage for [`EulerScratch::find`], reusable across calls.
pub struct EulerScratch {
    unused: [VertexSet; MAX_VERTICES],
    used: [VertexSet; MAX_VERTICES],
    stack: Vec<usize>,
    trail: Vec<usize>,
}

impl Default for EulerScratch {
    fn default() -> Self {
        EulerScratch {
            unused: [VertexSet::EMPTY; MAX_VERTICES],
            used: [VertexSet::EMPTY; MAX_VERTICES],
            stack: Vec::new(),
            trail: Vec::new(),
        }
    }
}

impl EulerScratch {
    /// Builds a closed trail through every edge of component `comp` of `p`;
    /// on success it is left in [`EulerScratch::trail`].
    pub fn find(&mut self, p: &Position<'_>, comp: VertexSet) -> bool {
        let Some(start) = comp.first() else {
            return false;
        };
        let g = p.graph();
        let mut edges = 0;
        for v in comp {
            self.unused[v] = g.neighbors(v).intersection(comp);
            self.used[v] = VertexSet::EMPTY;
            edges += self.unused[v].len();
        }
        let edges = edges / 2;

        self.stack.clear();
        self.trail.clear();
        self.stack.push(start);
        while let Some(&u) = self.stack.last() {
            match self.unused[u].first() {
                Some(w) => {
                    self.unused[u].remove(w);
                    self.unused[w].remove(u);
                    self.stack.push(w);
                }
                None => {
                    self.trail.push(u);
                    self.stack.pop();
                }
            }
        }
        self.trail.reverse();

        let closed = self.trail.len() == edges + 1 && self.trail.first() == self.trail.last();
        closed && self.is_trail(p)
    }

    pub fn trail(&self) -> &[usize] {
        &self.trail
    }

    /// Consecutive entries are adjacent and no edge repeats. Hierholzer's
    /// pop order can jump between non-adjacent vertices when odd vertices exist.
    fn is_trail(&mut self, p: &Position<'_>) -> bool {
        let g = p.graph();
        for i in 1..self.trail.len() {
            let (a, b) = (self.trail[i - 1], self.trail[i]);
            if !g.has_edge(a, b) || self.used[a].contains(b) {
                return false;
            }
            self.used[a].insert(b);
            self.used[b].insert(a);
        }
        true
    }

    /// Every component of `p` admits a closed Eulerian trail.
    pub fn all_components(&mut self, p: &Position<'_>) -> bool {
        let mut rest = p.alive();
        while let Some(v) = rest.first() {
            let comp = component_of(p.graph(), p.alive(), v);
            if !self.find(p, comp) {
                return false;
            }
            rest = rest.difference(comp);
        }
        true
    }
}

/// A closed trail through every edge of the component `comp` of `p`, as a
/// vertex sequence whose first and last entries coincide. A single vertex
/// yields the one-element trail `[v]`. `None` if no such trail exists.
pub fn closed_eulerian_trail(p: &Position<'_>, comp: VertexSet) -> Option<Vec<usize>> {
    let mut scratch = EulerScratch::default();
    scratch.find(p, comp).then(|| scratch.trail)
}

pub fn all_components_eulerian(p: &Position<'_>) -> bool {
    EulerScratch::default().all_components(p)
}
