//! Acceptance gate: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p vertex-removal --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use vertex_removal::census::census;
use vertex_removal::constructor::{audit, certify, witness};
use vertex_removal::solver::DEFAULT_NODE_BUDGET;
use vertex_removal::theorems::{verify_theorem, TheoremCheckResult, TheoremId, VerifyScale};
use vertex_removal::{GrundyValue, Solver, VertexClass};

const SEED: u64 = 2012;

/// Labelled bipartite graphs on 0..=7 vertices: 1+1+2+7+41+376+5177+103237.
const BIPARTITE_LABELLED_UP_TO_7: u64 = 108_842;

/// (order, size, edge mask) of the smallest labelled graph of value 2.
const MIN_VALUE_TWO: (usize, usize, u64) = (4, 4, 15);
const MIN_VALUE_TWO_GRAPH6: &str = "C{";

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(id: TheoremId, max_n: usize, samples: usize) -> Result<TheoremCheckResult, String> {
    let scale = VerifyScale {
        max_n,
        samples,
        seed: SEED,
        budget: Some(DEFAULT_NODE_BUDGET),
    };
    verify_theorem(id, scale).map_err(|e| e.to_string())
}

fn from_suite(r: Result<TheoremCheckResult, String>, extra: impl FnOnce(&TheoremCheckResult) -> Option<String>) -> Outcome {
    match r {
        Err(e) => Outcome { ok: false, detail: e },
        Ok(r) => {
            let problem = extra(&r);
            let ok = r.passed() && problem.is_none();
            let mut detail = format!("{} instances, {} failures", r.instances_checked, r.failures.len());
            if let Some(f) = r.failures.first() {
                detail.push_str(&format!("; first counterexample {} ({})", f.graph, f.check));
            }
            if let Some(p) = problem {
                detail.push_str(&format!("; {p}"));
            }
            Outcome { ok, detail }
        }
    }
}

fn closed_forms() -> Outcome {
    // P_n, K_n, S_n for n = 1..12, K_{n,m} for 1 <= n,m <= 5, three grids
    from_suite(suite(TheoremId::ClosedForms, 12, 0), |r| {
        (r.instances_checked != 36 + 25 + 3).then(|| format!("expected 64 instances"))
    })
}

fn bipartite_parity() -> Outcome {
    from_suite(suite(TheoremId::BipartiteParity, 7, 0), |r| {
        (r.instances_checked != BIPARTITE_LABELLED_UP_TO_7)
            .then(|| format!("expected {BIPARTITE_LABELLED_UP_TO_7} bipartite graphs"))
    })
}

fn euler_terminal() -> Outcome {
    // every alive subset of every labelled graph on n <= 7 vertices
    let positions: u64 = (0..=7u64).map(|n| (1u64 << (n * n.saturating_sub(1) / 2)) << n).sum();
    from_suite(suite(TheoremId::EulerTerminal, 7, 0), |r| {
        (r.instances_checked != positions).then(|| format!("expected {positions} positions"))
    })
}

fn even_even() -> Outcome {
    let graphs: u64 = (0..=7u64).map(|n| 1u64 << (n * n.saturating_sub(1) / 2)).sum();
    from_suite(suite(TheoremId::EvenEven, 7, 0), |r| {
        (r.instances_checked != graphs).then(|| format!("expected {graphs} graphs"))
    })
}

fn sum_law() -> Outcome {
    from_suite(suite(TheoremId::NimSum, 9, 500), |r| {
        (r.instances_checked != 500).then(|| "expected 500 pairs".to_string())
    })
}

fn substitution() -> Outcome {
    from_suite(suite(TheoremId::LollemmaSubstitution, 8, 1000), |r| {
        (r.instances_checked != 1000).then(|| "expected 1000 graphs".to_string())
    })
}

fn construction() -> Outcome {
    let suite_outcome = from_suite(suite(TheoremId::WitnessConstruction, 4, 0), |_| None);
    if !suite_outcome.ok {
        return suite_outcome;
    }
    let mut notes = vec![suite_outcome.detail];
    for k in 0..=4u32 {
        let w = match witness(k).and_then(|w| certify(w, Some(DEFAULT_NODE_BUDGET))) {
            Ok(w) => w,
            Err(e) => return Outcome { ok: false, detail: format!("witness({k}): {e}") },
        };
        let mut solver = Solver::with_budget(&w.graph, VertexClass::OddRule, Some(DEFAULT_NODE_BUDGET));
        let report = solver.solve_root().expect("within budget");
        if report.grundy != GrundyValue::new(k) || !w.graph.is_connected() {
            return Outcome { ok: false, detail: format!("witness({k}) solved to {}", report.grundy) };
        }
        if k >= 2 {
            let a = audit(&w, Some(DEFAULT_NODE_BUDGET)).expect("within budget");
            let children_ok = a.children.iter().all(|c| c.value == GrundyValue::new(c.index.max(0) as u32));
            if !children_ok || a.root_mex != GrundyValue::new(k) {
                return Outcome { ok: false, detail: format!("witness({k}) audit {a:?}") };
            }
        }
        notes.push(format!("k={k}: n={} nodes={}", w.graph.vertex_count(), report.nodes_visited));
    }
    Outcome { ok: true, detail: notes.join(", ") }
}

fn terminal_parity() -> Outcome {
    let bipartite_up_to_6 = 1 + 1 + 2 + 7 + 41 + 376 + 5177;
    from_suite(suite(TheoremId::BipartiteTerminalParity, 6, 0), |r| {
        (r.instances_checked != bipartite_up_to_6).then(|| format!("expected {bipartite_up_to_6} graphs"))
    })
}

fn census_fixture() -> Outcome {
    let two = GrundyValue::new(2);
    let mut seen = Vec::new();
    for n in [4, 4, 6] {
        let t = match census(n, VertexClass::OddRule, Some(DEFAULT_NODE_BUDGET)) {
            Ok(t) => t,
            Err(e) => return Outcome { ok: false, detail: e.to_string() },
        };
        match t.minimal_for(two) {
            Some(m) => seen.push((m.n, m.edges, m.mask, m.graph6.clone())),
            None => return Outcome { ok: false, detail: format!("no value-2 graph up to order {n}") },
        }
    }
    let expected = (MIN_VALUE_TWO.0, MIN_VALUE_TWO.1, MIN_VALUE_TWO.2, MIN_VALUE_TWO_GRAPH6.to_string());
    let ok = seen.iter().all(|s| *s == expected);
    Outcome {
        ok,
        detail: format!("minimal value-2 graph n={} |E|={} mask={} graph6={} over {} census runs", seen[0].0, seen[0].1, seen[0].2, seen[0].3, seen.len()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("closed forms for paths, complete graphs, stars, K_{n,m}", closed_forms, Duration::from_secs(60)),
        ("bipartite value = |E| mod 2, all graphs n <= 7", bipartite_parity, Duration::from_secs(30 * 60)),
        ("terminal <=> all-even <=> Eulerian components, n <= 7", euler_terminal, Duration::from_secs(30 * 60)),
        ("even/even value = |V| mod 2, n <= 7", even_even, Duration::from_secs(30 * 60)),
        ("sum law on 500 random pairs, n <= 9", sum_law, Duration::from_secs(30 * 60)),
        ("isolated vertex -> P_3 on 1000 random graphs, n <= 8", substitution, Duration::from_secs(30 * 60)),
        ("witness(k) certified for k = 0..4 with child and mex checks", construction, Duration::from_secs(120)),
        ("reachable terminals of bipartite graphs have even size, n <= 6", terminal_parity, Duration::from_secs(30 * 60)),
        ("census fixture for the minimal value-2 graph", census_fixture, Duration::from_secs(30 * 60)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > *limit {
            outcome.ok = false;
            outcome.detail.push_str(&format!("; exceeded {limit:?}"));
        }
        println!(
            "criterion {} [{}] {name}: {} ({:.2?})",
            i + 1,
            if outcome.ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed
        );
        if !outcome.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
