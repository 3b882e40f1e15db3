//! Connected graphs of every Grundy value.
//!
//! Given connected parts `G_0..G_K` with `g(G_i) = i`, each with at least two
//! odd vertices, the next graph is their disjoint union plus one apex per
//! part joined to every odd vertex of that part, with the apexes forming a
//! clique. A `P_3` part (value 0) pads the family when `K` is even so that the
//! number of apexes is even. In the result every original vertex has even
//! degree and every apex odd degree, so the only moves are apex removals;
//! removing apex `v_i` freezes everything except `G_i`, and the root value is
//! `mex{g(G_i)} = K + 1`.

use serde::Serialize;
use thiserror::Error;

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::format::to_graph6;
use crate::graph::{Graph, GraphError, Position, VertexClass};
use crate::solver::{mex, GrundyValue, SolveError, Solver};

/// Index of the padding part in a recipe.
pub const PADDING_INDEX: i32 = -1;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("at least one part is required")]
    NoParts,
    #[error("part {index} has no odd-degree vertices")]
    NoOddVertices { index: i32 },
    #[error("part {index} is not connected")]
    Disconnected { index: i32 },
    #[error("witness for value {k} needs {vertices} vertices, more than {MAX_VERTICES}; the largest constructible value is {max_k}")]
    TooLarge { k: u32, vertices: u64, max_k: u32 },
    #[error("construction postcondition violated: {0}")]
    Postcondition(String),
    #[error("witness solved to {got} but the recipe claims {}", recipe.k)]
    Unsound {
        recipe: Box<ConstructionRecipe>,
        got: GrundyValue,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One part of the construction and where it landed in the output graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPart {
    /// `-1` for the padding `P_3`, otherwise the part's claimed value.
    pub index: i32,
    #[serde(serialize_with = "graph6_field")]
    pub graph: Graph,
    pub claimed: GrundyValue,
    /// First output vertex of this part; the part occupies `offset..offset + n`.
    pub offset: usize,
    pub apex: usize,
}

impl ComponentPart {
    pub fn vertex_set(&self) -> VertexSet {
        (self.offset..self.offset + self.graph.vertex_count()).collect()
    }
}

fn graph6_field<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_graph6(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionRecipe {
    pub k: GrundyValue,
    /// Parts in output order, padding first when present.
    pub components: Vec<ComponentPart>,
    pub padding_used: bool,
    /// `(apex, attached odd vertex)`, grouped by part, ascending.
    pub apex_edges: Vec<(usize, usize)>,
    pub clique_edges: Vec<(usize, usize)>,
}

impl ConstructionRecipe {
    pub fn apexes(&self) -> VertexSet {
        self.components.iter().map(|c| c.apex).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub graph: Graph,
    pub recipe: ConstructionRecipe,
    pub certified: bool,
}

impl Witness {
    /// Sidecar record describing the construction.
    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.recipe.k,
            "vertices": self.graph.vertex_count(),
            "edges": self.graph.edge_count(),
            "certified": self.certified,
            "padding_used": self.recipe.padding_used,
            "apex_vertices": self.recipe.apexes().iter().collect::<Vec<_>>(),
            "components": self.recipe.components,
            "apex_edges": self.recipe.apex_edges,
            "clique_edges": self.recipe.clique_edges,
        })
    }
}

/// Builds the graph of value `K + 1` from parts `G_0..G_K`, part `i` being
/// trusted to have value `i`.
pub fn construct_next(parts: &[Graph]) -> Result<Witness, ConstructError> {
    if parts.is_empty() {
        return Err(ConstructError::NoParts);
    }
    for (i, part) in parts.iter().enumerate() {
        let index = i as i32;
        if !part.is_connected() {
            return Err(ConstructError::Disconnected { index });
        }
        if part.odd_vertices().is_empty() {
            return Err(ConstructError::NoOddVertices { index });
        }
    }

    let top = parts.len() - 1;
    let padding_used = top % 2 == 0;
    let padding = Graph::path(3);
    let mut family: Vec<(i32, &Graph)> = Vec::with_capacity(parts.len() + 1);
    if padding_used {
        family.push((PADDING_INDEX, &padding));
    }
    family.extend(parts.iter().enumerate().map(|(i, g)| (i as i32, g)));

    let part_vertices: usize = family.iter().map(|(_, g)| g.vertex_count()).sum();
    let n = part_vertices + family.len();
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }

    let mut edges = Vec::new();
    let mut components = Vec::with_capacity(family.len());
    let mut apex_edges = Vec::new();
    let mut offset = 0;
    for (slot, &(index, g)) in family.iter().enumerate() {
        let apex = part_vertices + slot;
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        apex_edges.extend(g.odd_vertices().iter().map(|u| (apex, u + offset)));
        components.push(ComponentPart {
            index,
            graph: g.clone(),
            claimed: GrundyValue::new(index.max(0) as u32),
            offset,
            apex,
        });
        offset += g.vertex_count();
    }
    let clique_edges: Vec<_> = (part_vertices..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    edges.extend(apex_edges.iter().copied());
    edges.extend(clique_edges.iter().copied());
    let graph = Graph::from_edges(n, edges)?;

    let recipe = ConstructionRecipe {
        k: GrundyValue::new(parts.len() as u32),
        components,
        padding_used,
        apex_edges,
        clique_edges,
    };
    check_structure(&graph, &recipe)?;
    Ok(Witness {
        graph,
        recipe,
        certified: false,
    })
}

fn check_structure(g: &Graph, recipe: &ConstructionRecipe) -> Result<(), ConstructError> {
    let fail = |msg: String| Err(ConstructError::Postcondition(msg));
    let apexes = recipe.apexes();
    if recipe.components.len() % 2 != 0 {
        return fail(format!("{} apexes, expected an even count", apexes.len()));
    }
    for v in 0..g.vertex_count() {
        let odd = g.degree(v) % 2 == 1;
        if odd != apexes.contains(v) {
            return fail(format!("vertex {v} has degree {}", g.degree(v)));
        }
    }
    if g.position().movable_vertices(VertexClass::OddRule) != apexes {
        return fail("root moves differ from the apex set".into());
    }
    for c in &recipe.components {
        let attached = recipe.apex_edges.iter().filter(|e| e.0 == c.apex).count();
        if attached < 2 {
            return fail(format!("apex {} has {attached} attachments", c.apex));
        }
    }
    if !g.is_connected() {
        return fail("output is disconnected".into());
    }
    Ok(())
}

/// Vertex counts of the tower witnesses `W_0..=W_k`, saturating; stops
/// early once the counts saturate.
fn tower_orders(k: u32) -> Vec<u64> {
    let mut orders: Vec<u64> = vec![3, 2];
    let mut parts: u64 = 5;
    for j in 2..=k as u64 {
        if parts == u64::MAX {
            break;
        }
        let padding = if (j - 1) % 2 == 0 { 3 + 1 } else { 0 };
        let order = parts.saturating_add(j).saturating_add(padding);
        orders.push(order);
        parts = parts.saturating_add(order);
    }
    orders.truncate(k as usize + 1);
    orders
}

/// Largest `k` whose tower witness fits in [`MAX_VERTICES`].
pub fn max_constructible() -> u32 {
    let orders = tower_orders(64);
    orders.iter().take_while(|&&n| n <= MAX_VERTICES as u64).count() as u32 - 1
}

/// The canonical witness of value `k`: `W_0 = P_3`, `W_1 = K_2` and
/// `W_k = construct_next([W_0, ..., W_{k-1}])`. Not certified.
pub fn witness(k: u32) -> Result<Witness, ConstructError> {
    let order = *tower_orders(k).last().unwrap();
    if order > MAX_VERTICES as u64 {
        return Err(ConstructError::TooLarge {
            k,
            vertices: order,
            max_k: max_constructible(),
        });
    }
    let mut tower = vec![Graph::path(3), Graph::complete(2)];
    if k <= 1 {
        return Ok(base_witness(k, tower.swap_remove(k as usize)));
    }
    for _ in 2..k {
        let next = construct_next(&tower)?.graph;
        tower.push(next);
    }
    construct_next(&tower)
}

fn base_witness(k: u32, graph: Graph) -> Witness {
    let recipe = ConstructionRecipe {
        k: GrundyValue::new(k),
        components: Vec::new(),
        padding_used: false,
        apex_edges: Vec::new(),
        clique_edges: Vec::new(),
    };
    Witness {
        graph,
        recipe,
        certified: false,
    }
}

/// Solves the witness and marks it certified when the value matches.
pub fn certify(mut w: Witness, budget: Option<u64>) -> Result<Witness, ConstructError> {
    let mut solver = Solver::with_budget(&w.graph, VertexClass::OddRule, budget);
    let got = solver.value(w.graph.vertices())?;
    if got != w.recipe.k {
        return Err(ConstructError::Unsound {
            recipe: Box::new(w.recipe),
            got,
        });
    }
    w.certified = true;
    Ok(w)
}

/// What removing one apex does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApexChild {
    pub index: i32,
    pub apex: usize,
    pub value: GrundyValue,
    /// The part survives as its own component, isomorphic by identity of labels.
    pub part_isolated: bool,
    /// Everything outside the part is an all-even (terminal) remainder.
    pub remainder_frozen: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessAudit {
    pub children: Vec<ApexChild>,
    pub root_mex: GrundyValue,
}

impl WitnessAudit {
    /// Child values match the part indices (padding counts as 0) and the
    /// root value is their mex.
    pub fn is_consistent(&self, k: GrundyValue) -> bool {
        self.root_mex == k
            && self.children.iter().all(|c| {
                c.part_isolated
                    && c.remainder_frozen
                    && c.value == GrundyValue::new(c.index.max(0) as u32)
            })
    }
}

/// Solves every child `G - v_i` of a constructed witness.
pub fn audit(w: &Witness, budget: Option<u64>) -> Result<WitnessAudit, ConstructError> {
    let g = &w.graph;
    let all = g.vertices();
    let mut solver = Solver::with_budget(g, VertexClass::OddRule, budget);
    let mut children = Vec::with_capacity(w.recipe.components.len());
    for part in &w.recipe.components {
        let alive = all.without(part.apex);
        let value = solver.value(alive)?;
        let child = Position::new(g, alive)?;
        let part_set = part.vertex_set();
        let comps = child.connected_components();
        let part_isolated = comps.contains(&part_set) && g.induced(part_set) == part.graph;
        let rest = Position::new(g, alive.difference(part_set))?;
        children.push(ApexChild {
            index: part.index,
            apex: part.apex,
            value,
            part_isolated,
            remainder_frozen: rest.is_terminal(VertexClass::OddRule),
        });
    }
    let root_mex = mex(children.iter().map(|c| c.value));
    Ok(WitnessAudit { children, root_mex })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_from_p3_and_k2() {
        let w = construct_next(&[Graph::path(3), Graph::complete(2)]).unwrap();
        assert_eq!(w.graph.vertex_count(), 7);
        assert_eq!(w.graph.edge_count(), 8);
        assert!(!w.recipe.padding_used);
        assert_eq!(w.recipe.apexes().iter().collect::<Vec<_>>(), vec![5, 6]);
        assert_eq!(w.graph.degree(5), 3);
        assert_eq!(w.graph.degree(6), 3);
        assert_eq!(w.recipe.apex_edges, vec![(5, 0), (5, 2), (6, 3), (6, 4)]);
        assert_eq!(w.recipe.clique_edges, vec![(5, 6)]);
        let w = certify(w, None).unwrap();
        assert!(w.certified);
    }

    #[test]
    fn padding_when_top_index_is_even() {
        let w = construct_next(&[Graph::path(3)]).unwrap();
        assert!(w.recipe.padding_used);
        assert_eq!(w.graph.vertex_count(), 8);
        assert_eq!(w.recipe.components[0].index, PADDING_INDEX);
        assert_eq!(w.recipe.k, GrundyValue::ONE);
        assert!(certify(w, None).unwrap().certified);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(construct_next(&[]), Err(ConstructError::NoParts)));
        assert!(matches!(
            construct_next(&[Graph::path(3), Graph::cycle(4)]),
            Err(ConstructError::NoOddVertices { index: 1 })
        ));
        let split = Graph::complete(2).disjoint_union(&Graph::complete(2)).unwrap();
        assert!(matches!(
            construct_next(&[split]),
            Err(ConstructError::Disconnected { index: 0 })
        ));
    }

    #[test]
    fn tower_orders_and_cap() {
        assert_eq!(tower_orders(5), vec![3, 2, 7, 19, 35, 75]);
        assert_eq!(max_constructible(), 4);
        match witness(30) {
            Err(ConstructError::TooLarge { k: 30, max_k: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(witness(5), Err(ConstructError::TooLarge { k: 5, vertices: 75, .. })));
    }

    #[test]
    fn base_witnesses() {
        assert_eq!(witness(0).unwrap().graph, Graph::path(3));
        assert_eq!(witness(1).unwrap().graph, Graph::complete(2));
        assert!(certify(witness(0).unwrap(), None).unwrap().certified);
        assert!(certify(witness(1).unwrap(), None).unwrap().certified);
    }

    #[test]
    fn unsound_claims_are_reported() {
        // P3 and P3 claim values 0 and 1, but both are 0: root mex is 1, not 2
        let w = construct_next(&[Graph::path(3), Graph::path(3)]).unwrap();
        match certify(w, None) {
            Err(ConstructError::Unsound { got, .. }) => assert_eq!(got, GrundyValue::ONE),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sidecar_record_lists_boundaries() {
        let w = witness(3).unwrap();
        let rec = w.record();
        assert_eq!(rec["vertices"], 19);
        assert_eq!(rec["padding_used"], true);
        assert_eq!(rec["apex_vertices"], serde_json::json!([15, 16, 17, 18]));
        assert_eq!(rec["components"][0]["index"], -1);
        assert_eq!(rec["components"][0]["graph"], "Bg");
        assert_eq!(rec["components"][3]["offset"], 8);
    }
}
