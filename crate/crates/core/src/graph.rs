//! Simple undirected graphs, game positions on them, and the structural
//! predicates the games depend on.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::bitset::{VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, the supported maximum is {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} is not alive in this position")]
    VertexNotAlive(usize),
    #[error("alive set {0:#x} is not a subset of the host graph's vertices")]
    AliveOutOfRange(u64),
}

/// Which degree parity a player may remove.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum VertexClass {
    /// Only odd-degree vertices are removable (the odd/odd game).
    #[serde(rename = "odd")]
    OddRule,
    /// Only even-degree vertices are removable; isolated vertices count as even.
    #[serde(rename = "even")]
    EvenRule,
}

impl VertexClass {
    #[inline]
    pub fn admits(self, degree: usize) -> bool {
        match self {
            VertexClass::OddRule => degree % 2 == 1,
            VertexClass::EvenRule => degree % 2 == 0,
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::OddRule => "odd",
            VertexClass::EvenRule => "even",
        })
    }
}

/// An immutable simple undirected graph on at most [`MAX_VERTICES`] vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            adj: vec![VertexSet::EMPTY; n],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, repeats and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u].contains(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Degree in the whole graph.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn position(&self) -> Position<'_> {
        Position {
            graph: self,
            alive: self.vertices(),
        }
    }

    /// Breadth-first two-colouring; `None` when an odd cycle exists.
    /// Colour 0 is given to the smallest vertex of every component.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color: Vec<Option<u8>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(0);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for w in self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    pub fn is_connected(&self) -> bool {
        self.position().connected_components().len() <= 1
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// Vertices of odd degree in the whole graph.
    pub fn odd_vertices(&self) -> VertexSet {
        self.position().odd_vertices()
    }

    /// The subgraph induced by `set`, relabelled to `0..set.len()` in
    /// ascending order of the original indices.
    pub fn induced(&self, set: VertexSet) -> Graph {
        let index: Vec<usize> = set.iter().collect();
        let mut relabel = [usize::MAX; MAX_VERTICES];
        for (new, &old) in index.iter().enumerate() {
            relabel[old] = new;
        }
        let adj = index
            .iter()
            .map(|&old| {
                self.adj[old]
                    .intersection(set)
                    .iter()
                    .map(|w| relabel[w])
                    .collect()
            })
            .collect();
        Graph {
            n: index.len(),
            adj,
        }
    }

    /// Disjoint union; `other`'s vertices are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let shift = self.n;
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|a| VertexSet::from_bits(a.bits() << shift)),
        );
        Ok(Graph { n, adj })
    }

    /// Path on `n` vertices, `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Graph {
        Self::family(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::family(n, (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)]))
    }

    pub fn complete(n: usize) -> Graph {
        Self::family(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Star on `n` vertices in total: centre 0 joined to leaves `1..n`.
    pub fn star(n: usize) -> Graph {
        Self::family(n, (1..n).map(|v| (0, v)))
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Self::family(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// `rows x cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Self::family(rows * cols, edges)
    }

    fn family<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Graph {
        Graph::from_edges(n, edges).expect("graph family exceeds the vertex limit")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// The induced subgraph of a host graph on its still-alive vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position<'g> {
    graph: &'g Graph,
    alive: VertexSet,
}

impl<'g> Position<'g> {
    pub fn new(graph: &'g Graph, alive: VertexSet) -> Result<Self, GraphError> {
        if !alive.is_subset(graph.vertices()) {
            return Err(GraphError::AliveOutOfRange(alive.bits()));
        }
        Ok(Position { graph, alive })
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn alive(&self) -> VertexSet {
        self.alive
    }

    /// Number of alive neighbours of an alive vertex.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        if !self.alive.contains(v) {
            return Err(GraphError::VertexNotAlive(v));
        }
        Ok(self.degree_of(v))
    }

    #[inline]
    pub(crate) fn degree_of(&self, v: usize) -> usize {
        self.graph.adj[v].intersection(self.alive).len()
    }

    pub fn movable_vertices(&self, rule: VertexClass) -> VertexSet {
        movable_in(self.graph, self.alive, rule)
    }

    pub fn odd_vertices(&self) -> VertexSet {
        self.movable_vertices(VertexClass::OddRule)
    }

    pub fn remove_vertex(&self, v: usize) -> Result<Position<'g>, GraphError> {
        if !self.alive.contains(v) {
            return Err(GraphError::VertexNotAlive(v));
        }
        Ok(Position {
            graph: self.graph,
            alive: self.alive.without(v),
        })
    }

    pub fn edge_count(&self) -> usize {
        self.alive.iter().map(|v| self.degree_of(v)).sum::<usize>() / 2
    }

    /// Maximal connected vertex sets, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut rest = self.alive;
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let comp = component_of(self.graph, self.alive, v);
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_terminal(&self, rule: VertexClass) -> bool {
        self.movable_vertices(rule).is_empty()
    }

    /// Whether every component carries a closed Eulerian trail, the
    /// single-vertex component counting via its empty trail. For a
    /// component this is exactly "all degrees even".
    pub fn has_eulerian_components(&self) -> bool {
        self.alive.iter().all(|v| self.degree_of(v) % 2 == 0)
    }

    /// The alive part as a standalone graph.
    pub fn to_graph(&self) -> Graph {
        self.graph.induced(self.alive)
    }
}

impl fmt::Debug for Position<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Position")
            .field("n", &self.graph.n)
            .field("alive", &self.alive)
            .finish()
    }
}

#[inline]
pub(crate) fn movable_in(graph: &Graph, alive: VertexSet, rule: VertexClass) -> VertexSet {
    let mut out = VertexSet::EMPTY;
    for v in alive {
        if rule.admits(graph.adj[v].intersection(alive).len()) {
            out.insert(v);
        }
    }
    out
}

/// Connected component of `v` within `alive`, by frontier expansion.
#[inline]
pub(crate) fn component_of(graph: &Graph, alive: VertexSet, v: usize) -> VertexSet {
    let mut comp = VertexSet::singleton(v);
    let mut frontier = comp;
    while !frontier.is_empty() {
        let mut reach = VertexSet::EMPTY;
        for u in frontier {
            reach = reach.union(graph.adj[u]);
        }
        frontier = reach.intersection(alive).difference(comp);
        comp = comp.union(frontier);
    }
    comp
}
