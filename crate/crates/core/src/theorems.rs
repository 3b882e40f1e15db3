//! Closed-form values for the odd/odd game and the suites that check each
//! closed form, law and construction against the search engine.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::constructor::{self, ConstructError};
use crate::euler::EulerScratch;
use crate::format::to_graph6;
use crate::generate::{
    graph_from_mask, pair_count, random_bipartite_graph, random_graph, EnumerationError,
    DEFAULT_ENUMERATION_CAP,
};
use crate::graph::{movable_in, Graph, GraphError, Position, VertexClass};
use crate::solver::{grundy_even_even, GrundyValue, SolveError, Solver, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("closed form needs at least one vertex")]
    EmptyGraph,
    #[error("complete bipartite closed form needs both sides non-empty, got ({0}, {1})")]
    EmptySide(usize, usize),
    #[error("graph is not bipartite")]
    NotBipartite,
}

fn parity(odd: bool) -> GrundyValue {
    GrundyValue::from_parity(odd)
}

pub fn closed_form_path(n: usize) -> Result<GrundyValue, DomainError> {
    if n == 0 {
        return Err(DomainError::EmptyGraph);
    }
    Ok(parity(n % 2 == 0))
}

pub fn closed_form_complete(n: usize) -> Result<GrundyValue, DomainError> {
    closed_form_path(n)
}

/// `n` counts all vertices of the star, centre included.
pub fn closed_form_star(n: usize) -> Result<GrundyValue, DomainError> {
    closed_form_path(n)
}

pub fn closed_form_complete_bipartite(n: usize, m: usize) -> Result<GrundyValue, DomainError> {
    if n == 0 || m == 0 {
        return Err(DomainError::EmptySide(n, m));
    }
    Ok(parity(n % 2 == 1 && m % 2 == 1))
}

/// Value of a bipartite graph: the parity of its edge count.
pub fn grundy_bipartite_fast(g: &Graph) -> Result<GrundyValue, DomainError> {
    if !g.is_bipartite() {
        return Err(DomainError::NotBipartite);
    }
    Ok(parity(g.edge_count() % 2 == 1))
}

/// Replaces every isolated vertex `v` by a path `v - a - b` on two fresh
/// vertices appended after the existing ones.
pub fn replace_isolated_with_p3(g: &Graph) -> Result<Graph, GraphError> {
    let isolated = g.isolated_vertices();
    let n = g.vertex_count();
    let mut edges: Vec<_> = g.edges().collect();
    for (i, v) in isolated.iter().enumerate() {
        let a = n + 2 * i;
        edges.push((v, a));
        edges.push((a, a + 1));
    }
    Graph::from_edges(n + 2 * isolated.len(), edges)
}

/// Theorems and laws with a verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    NimSum,
    EvenEven,
    ClosedForms,
    EulerTerminal,
    BipartiteParity,
    BipartiteTerminalParity,
    LollemmaSubstitution,
    WitnessConstruction,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::NimSum,
        TheoremId::EvenEven,
        TheoremId::ClosedForms,
        TheoremId::EulerTerminal,
        TheoremId::BipartiteParity,
        TheoremId::BipartiteTerminalParity,
        TheoremId::LollemmaSubstitution,
        TheoremId::WitnessConstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::NimSum => "nim-sum",
            TheoremId::EvenEven => "even-even",
            TheoremId::ClosedForms => "closed-forms",
            TheoremId::EulerTerminal => "euler-terminal",
            TheoremId::BipartiteParity => "bipartite-parity",
            TheoremId::BipartiteTerminalParity => "bipartite-terminal-parity",
            TheoremId::LollemmaSubstitution => "substitution",
            TheoremId::WitnessConstruction => "witness",
        }
    }

    /// Scale each suite runs at when not overridden.
    pub fn default_scale(self) -> VerifyScale {
        let (max_n, samples) = match self {
            TheoremId::NimSum => (9, 500),
            TheoremId::EvenEven => (DEFAULT_ENUMERATION_CAP, 0),
            TheoremId::ClosedForms => (12, 0),
            TheoremId::EulerTerminal => (DEFAULT_ENUMERATION_CAP, 0),
            TheoremId::BipartiteParity => (DEFAULT_ENUMERATION_CAP, 0),
            TheoremId::BipartiteTerminalParity => (6, 0),
            TheoremId::LollemmaSubstitution => (8, 1000),
            TheoremId::WitnessConstruction => (4, 0),
        };
        VerifyScale {
            max_n,
            samples,
            seed: 0,
            budget: Some(DEFAULT_NODE_BUDGET),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for TheoremId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theorem id {0:?}")]
pub struct UnknownTheorem(pub String);

impl FromStr for TheoremId {
    type Err = UnknownTheorem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| UnknownTheorem(s.to_string()))
    }
}

/// How far a suite goes. `max_n` is the largest order (or, for the witness
/// suite, the largest value `k`); `samples` the number of random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyScale {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Node budget for each individual solve.
    pub budget: Option<u64>,
}

/// A concrete counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// graph6 encoding of the offending graph.
    pub graph: String,
    pub check: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    fn new(g: &Graph, check: &str, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        Failure {
            graph: to_graph6(g),
            check: check.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheckResult {
    pub theorem: TheoremId,
    pub scale: VerifyScale,
    pub instances_checked: u64,
    pub failures: Vec<Failure>,
}

impl TheoremCheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances_checked > 0
    }

    /// One JSON object on a single line.
    pub fn to_record(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = self.passed().into();
        v.to_string()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} instances, max_n {}, samples {}, seed {}, {} failures)\n",
            self.theorem,
            if self.passed() { "PASS" } else { "FAIL" },
            self.instances_checked,
            self.scale.max_n,
            self.scale.samples,
            self.scale.seed,
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!(
                "  counterexample {} [{}]: expected {}, got {}\n",
                f.graph, f.check, f.expected, f.got
            ));
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{source}; partial result covers {} instances", partial.instances_checked)]
    Budget {
        partial: Box<TheoremCheckResult>,
        source: SolveError,
    },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Construction(#[from] ConstructError),
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.checked += 1;
        if !ok {
            self.failures.push(failure());
        }
    }
}

/// Runs one suite, collecting every failure rather than stopping at the first.
pub fn verify_theorem(id: TheoremId, scale: VerifyScale) -> Result<TheoremCheckResult, VerifyError> {
    let mut tally = Tally::default();
    let outcome = match id {
        TheoremId::NimSum => nim_sum_suite(&scale, &mut tally),
        TheoremId::EvenEven => exhaustive(&scale, &mut tally, |g| even_even_check(g, scale.budget)),
        TheoremId::ClosedForms => closed_forms_suite(&scale, &mut tally),
        TheoremId::EulerTerminal => exhaustive(&scale, &mut tally, |g| Ok(euler_check(g))),
        TheoremId::BipartiteParity => bipartite_suite(&scale, &mut tally),
        TheoremId::BipartiteTerminalParity => {
            exhaustive(&scale, &mut tally, |g| Ok(terminal_parity_check(g)))
        }
        TheoremId::LollemmaSubstitution => substitution_suite(&scale, &mut tally),
        TheoremId::WitnessConstruction => return witness_suite(scale),
    };
    let result = TheoremCheckResult {
        theorem: id,
        scale,
        instances_checked: tally.checked,
        failures: tally.failures,
    };
    match outcome {
        Ok(()) => Ok(result),
        Err(Stop::Budget(source)) => Err(VerifyError::Budget {
            partial: Box::new(result),
            source,
        }),
        Err(Stop::Enumeration(e)) => Err(e.into()),
    }
}

enum Stop {
    Budget(SolveError),
    Enumeration(EnumerationError),
}

impl From<SolveError> for Stop {
    fn from(e: SolveError) -> Self {
        Stop::Budget(e)
    }
}

fn solve(g: &Graph, rule: VertexClass, budget: Option<u64>) -> Result<GrundyValue, SolveError> {
    Solver::with_budget(g, rule, budget).value(g.vertices())
}

/// Applies `check` to every labelled graph of order `0..=max_n`, in
/// parallel, merging tallies in enumeration order.
fn exhaustive<F>(scale: &VerifyScale, tally: &mut Tally, check: F) -> Result<(), Stop>
where
    F: Fn(&Graph) -> Result<Tally, SolveError> + Sync,
{
    if scale.max_n > DEFAULT_ENUMERATION_CAP {
        return Err(Stop::Enumeration(EnumerationError {
            n: scale.max_n,
            cap: DEFAULT_ENUMERATION_CAP,
        }));
    }
    for n in 0..=scale.max_n {
        let level = (0..1u64 << pair_count(n))
            .into_par_iter()
            .map(|mask| check(&graph_from_mask(n, mask)))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        *tally = std::mem::take(tally).merge(level);
    }
    Ok(())
}

fn even_even_check(g: &Graph, budget: Option<u64>) -> Result<Tally, SolveError> {
    let mut t = Tally::default();
    let engine = solve(g, VertexClass::EvenRule, budget)?;
    let formula = grundy_even_even(g);
    let expected = GrundyValue::from_parity(g.vertex_count() % 2 == 1);
    t.check(engine == expected && formula == expected, || {
        Failure::new(g, "even/even engine vs |V| mod 2", expected, engine)
    });
    Ok(t)
}

/// Every position of `g`: no odd move ⇔ all degrees even ⇔ every component
/// has a closed Eulerian trail (constructed).
fn euler_check(g: &Graph) -> Tally {
    let mut t = Tally::default();
    let mut scratch = EulerScratch::default();
    for bits in 0..1u64 << g.vertex_count() {
        let p = Position::new(g, VertexSet::from_bits(bits)).expect("subset of host");
        let terminal = p.is_terminal(VertexClass::OddRule);
        let all_even = p.has_eulerian_components();
        let circuits = scratch.all_components(&p);
        t.check(terminal == all_even && all_even == circuits, || {
            Failure::new(
                &p.to_graph(),
                "terminal / all-even / Euler circuits",
                format!("{terminal}/{terminal}/{terminal}"),
                format!("{terminal}/{all_even}/{circuits}"),
            )
        });
    }
    t
}

fn bipartite_check(g: &Graph, budget: Option<u64>) -> Result<Tally, SolveError> {
    let mut t = Tally::default();
    let Ok(fast) = grundy_bipartite_fast(g) else {
        return Ok(t);
    };
    let engine = solve(g, VertexClass::OddRule, budget)?;
    let expected = GrundyValue::from_parity(g.edge_count() % 2 == 1);
    t.check(engine == expected && fast == expected, || {
        Failure::new(g, "bipartite engine vs |E| mod 2", expected, engine)
    });
    Ok(t)
}

fn bipartite_suite(scale: &VerifyScale, tally: &mut Tally) -> Result<(), Stop> {
    exhaustive(scale, tally, |g| bipartite_check(g, scale.budget))?;
    let mut rng = ChaCha8Rng::seed_from_u64(scale.seed);
    let graphs: Vec<Graph> = (0..scale.samples)
        .map(|_| {
            let n = rng.random_range(0..=12);
            random_bipartite_graph(&mut rng, n)
        })
        .collect();
    let random = graphs
        .par_iter()
        .map(|g| bipartite_check(g, scale.budget))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    *tally = std::mem::take(tally).merge(random);
    Ok(())
}

/// Odd-rule terminal positions reachable from the whole graph, found by a
/// depth-first walk over alive subsets.
pub fn reachable_terminals(g: &Graph) -> Vec<VertexSet> {
    let mut seen = FxHashSet::default();
    let mut stack = vec![g.vertices()];
    let mut terminals = Vec::new();
    seen.insert(g.vertices());
    while let Some(alive) = stack.pop() {
        let moves = movable_in(g, alive, VertexClass::OddRule);
        if moves.is_empty() {
            terminals.push(alive);
        }
        for v in moves {
            let child = alive.without(v);
            if seen.insert(child) {
                stack.push(child);
            }
        }
    }
    terminals.sort();
    terminals
}

fn terminal_parity_check(g: &Graph) -> Tally {
    let mut t = Tally::default();
    if !g.is_bipartite() {
        return t;
    }
    let bad = reachable_terminals(g).into_iter().find(|&alive| {
        Position::new(g, alive).expect("subset of host").edge_count() % 2 == 1
    });
    t.check(bad.is_none(), || {
        let p = Position::new(g, bad.unwrap()).unwrap();
        Failure::new(g, "reachable terminal edge parity", "even", p.edge_count())
    });
    t
}

fn closed_forms_suite(scale: &VerifyScale, tally: &mut Tally) -> Result<(), Stop> {
    let mut cases: Vec<(String, Graph, GrundyValue)> = Vec::new();
    for n in 1..=scale.max_n {
        cases.push((format!("P_{n}"), Graph::path(n), closed_form_path(n).unwrap()));
        cases.push((format!("K_{n}"), Graph::complete(n), closed_form_complete(n).unwrap()));
        cases.push((format!("S_{n}"), Graph::star(n), closed_form_star(n).unwrap()));
    }
    let side = scale.max_n.min(5);
    for a in 1..=side {
        for b in 1..=side {
            let expected = closed_form_complete_bipartite(a, b).unwrap();
            cases.push((format!("K_{a},{b}"), Graph::complete_bipartite(a, b), expected));
        }
    }
    for (r, c) in [(2, 2), (2, 3), (3, 3)] {
        let g = Graph::grid(r, c);
        let expected = grundy_bipartite_fast(&g).expect("grids are bipartite");
        cases.push((format!("grid {r}x{c}"), g, expected));
    }
    let checked = cases
        .par_iter()
        .map(|(name, g, expected)| {
            let got = solve(g, VertexClass::OddRule, scale.budget)?;
            let mut t = Tally::default();
            t.check(got == *expected, || Failure::new(g, name, expected, got));
            Ok::<_, SolveError>(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    *tally = std::mem::take(tally).merge(checked);
    Ok(())
}

fn nim_sum_suite(scale: &VerifyScale, tally: &mut Tally) -> Result<(), Stop> {
    let mut rng = ChaCha8Rng::seed_from_u64(scale.seed);
    let pairs: Vec<(Graph, Graph)> = (0..scale.samples)
        .map(|_| {
            let a = rng.random_range(0..=scale.max_n);
            let g = random_graph(&mut rng, a);
            let b = rng.random_range(0..=scale.max_n);
            (g, random_graph(&mut rng, b))
        })
        .collect();
    let checked = pairs
        .par_iter()
        .map(|(g, h)| {
            let sum = g.disjoint_union(h).expect("pair fits the vertex limit");
            let parts = solve(g, VertexClass::OddRule, scale.budget)?
                ^ solve(h, VertexClass::OddRule, scale.budget)?;
            let whole = solve(&sum, VertexClass::OddRule, scale.budget)?;
            let mut t = Tally::default();
            t.check(whole == parts, || Failure::new(&sum, "g(G+H) vs g(G) xor g(H)", parts, whole));
            Ok::<_, SolveError>(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    *tally = std::mem::take(tally).merge(checked);
    Ok(())
}

fn substitution_suite(scale: &VerifyScale, tally: &mut Tally) -> Result<(), Stop> {
    let mut rng = ChaCha8Rng::seed_from_u64(scale.seed);
    let graphs: Vec<Graph> = (0..scale.samples)
        .map(|_| {
            let n = rng.random_range(0..=scale.max_n);
            let base = random_graph(&mut rng, n);
            let isolated = rng.random_range(0..=3);
            base.disjoint_union(&Graph::empty(isolated).unwrap())
                .expect("fits the vertex limit")
        })
        .collect();
    let checked = graphs
        .par_iter()
        .map(|g| {
            let replaced = replace_isolated_with_p3(g).expect("fits the vertex limit");
            let before = solve(g, VertexClass::OddRule, scale.budget)?;
            let after = solve(&replaced, VertexClass::OddRule, scale.budget)?;
            let mut t = Tally::default();
            t.check(before == after && replaced.isolated_vertices().is_empty(), || {
                Failure::new(g, "isolated vertex -> P_3", before, after)
            });
            Ok::<_, SolveError>(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    *tally = std::mem::take(tally).merge(checked);
    Ok(())
}

fn witness_suite(scale: VerifyScale) -> Result<TheoremCheckResult, VerifyError> {
    let mut tally = Tally::default();
    for k in 0..=scale.max_n as u32 {
        let w = constructor::witness(k)?;
        let expected = w.recipe.k;
        let certified = match constructor::certify(w.clone(), scale.budget) {
            Ok(w) => w.certified,
            Err(ConstructError::Unsound { got, .. }) => {
                tally.check(false, || Failure::new(&w.graph, "certify", expected, got));
                continue;
            }
            Err(ConstructError::Solve(source)) => {
                return Err(VerifyError::Budget {
                    partial: Box::new(TheoremCheckResult {
                        theorem: TheoremId::WitnessConstruction,
                        scale,
                        instances_checked: tally.checked,
                        failures: tally.failures,
                    }),
                    source,
                })
            }
            Err(e) => return Err(e.into()),
        };
        tally.check(certified && w.graph.is_connected(), || {
            Failure::new(&w.graph, "certified and connected", "true", "false")
        });
        if k >= 2 {
            let audit = constructor::audit(&w, scale.budget)?;
            tally.check(audit.is_consistent(expected), || {
                let children: Vec<_> = audit.children.iter().map(|c| c.value.to_string()).collect();
                Failure::new(
                    &w.graph,
                    "apex children and root mex",
                    format!("mex {expected}"),
                    format!("mex {} over [{}]", audit.root_mex, children.join(",")),
                )
            });
        }
    }
    Ok(TheoremCheckResult {
        theorem: TheoremId::WitnessConstruction,
        scale,
        instances_checked: tally.checked,
        failures: tally.failures,
    })
}
