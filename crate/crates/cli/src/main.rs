use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use vertex_removal::census::{census, CensusError, CensusTable};
use vertex_removal::constructor::{certify, witness, ConstructError, Witness};
use vertex_removal::format::{parse_any, to_edge_list, to_graph6};
use vertex_removal::solver::{grundy_even_even, DEFAULT_NODE_BUDGET};
use vertex_removal::theorems::{
    grundy_bipartite_fast, verify_theorem, TheoremCheckResult, TheoremId, VerifyError,
};
use vertex_removal::{Graph, GrundyValue, SolveError, SolveReport, Solver, VertexClass};

#[derive(Parser)]
#[command(name = "vrgame", version, about = "Parity vertex-removal games: solve, generate, verify, census")]
struct Cli {
    /// Emit line-delimited JSON records instead of text.
    #[arg(long, global = true)]
    records: bool,

    /// Maximum positions expanded per solve.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Odd,
    Even,
}

impl From<Rule> for VertexClass {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Odd => VertexClass::OddRule,
            Rule::Even => VertexClass::EvenRule,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Edges,
}

#[derive(Subcommand)]
enum Command {
    /// Grundy value of a graph (edge list or graph6).
    Solve {
        /// Input file, or "-" for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "odd")]
        rule: Rule,
        /// Also run the exhaustive search when a closed form applies.
        #[arg(long)]
        verify: bool,
    },
    /// Connected graph with Grundy value K.
    Generate {
        k: u32,
        /// Edge-list output; the recipe goes to <OUTPUT>.recipe.json.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a theorem against exhaustive search.
    Verify {
        /// One of: nim-sum, even-even, closed-forms, euler-terminal,
        /// bipartite-parity, bipartite-terminal-parity, substitution, witness.
        theorem: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Value counts over all labelled graphs up to an order (not isomorphism-reduced).
    Census {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "odd")]
        rule: Rule,
    },
    /// Convert between edge-list and graph6.
    Convert {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum)]
        to: Format,
    },
}

/// Exit codes: 1 check failure, 2 usage or input error, 3 budget exhausted.
enum Failure {
    Check(String),
    Input(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Input(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Budget(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Solve { ref input, rule, verify } => solve(&cli, &mut out, input, rule.into(), verify),
        Command::Generate { k, ref output } => generate(&cli, &mut out, k, output.as_ref()),
        Command::Verify {
            ref theorem,
            max_n,
            samples,
            seed,
        } => run_verify(&cli, &mut out, theorem, max_n, samples, seed),
        Command::Census { max_n, rule } => run_census(&cli, &mut out, max_n, rule.into()),
        Command::Convert { ref input, to } => convert(&mut out, input, to),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("vrgame: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_graph(input: &str) -> Result<Graph, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?
    };
    parse_any(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))
}

fn emit(out: &mut impl Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("write failed: {e}")))
}

/// Closed-form value with the lowest-index move, when one applies. Every
/// move from a value-1 position of these classes reaches value 0.
fn fast_path(g: &Graph, rule: VertexClass) -> Option<(&'static str, SolveReport)> {
    let (method, grundy) = match rule {
        VertexClass::OddRule => ("bipartite parity", grundy_bipartite_fast(g).ok()?),
        VertexClass::EvenRule => ("vertex parity", grundy_even_even(g)),
    };
    let optimal_move = (grundy != GrundyValue::ZERO)
        .then(|| g.position().movable_vertices(rule).first())
        .flatten();
    Some((
        method,
        SolveReport {
            grundy,
            nodes_visited: 0,
            distinct_positions: 0,
            optimal_move,
        },
    ))
}

fn solve(cli: &Cli, out: &mut impl Write, input: &str, rule: VertexClass, verify: bool) -> Outcome {
    let g = read_graph(input)?;
    let search = |g: &Graph| Solver::with_budget(g, rule, Some(cli.budget)).solve_root();
    let (method, report, verified) = match fast_path(&g, rule) {
        Some((method, report)) if verify => {
            let brute = search(&g)?;
            if brute.grundy != report.grundy || brute.optimal_move != report.optimal_move {
                return Err(Failure::Check(format!(
                    "{method} gives {} but search gives {} on {}",
                    report.grundy,
                    brute.grundy,
                    to_graph6(&g)
                )));
            }
            (method, brute, Some(true))
        }
        Some((method, report)) => (method, report, None),
        None => ("search", search(&g)?, None),
    };
    let terminal = g.position().is_terminal(rule);
    if cli.records {
        let rec = json!({
            "command": "solve",
            "rule": rule,
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "method": method,
            "grundy": report.grundy,
            "terminal": terminal,
            "nodes_visited": report.nodes_visited,
            "distinct_positions": report.distinct_positions,
            "optimal_move": report.optimal_move,
            "verified": verified,
        });
        return emit(out, &format!("{rec}\n"));
    }
    let mut text = format!(
        "grundy: {}\nrule: {rule}\nvertices: {}\nedges: {}\nmethod: {method}\nterminal: {}\nnodes visited: {}\ndistinct positions: {}\n",
        report.grundy,
        g.vertex_count(),
        g.edge_count(),
        if terminal { "yes" } else { "no" },
        report.nodes_visited,
        report.distinct_positions,
    );
    match report.optimal_move {
        Some(v) => text.push_str(&format!("optimal move: {v}\n")),
        None => text.push_str("optimal move: none\n"),
    }
    if verified.is_some() {
        text.push_str("verified: yes\n");
    }
    emit(out, &text)
}

fn generate(cli: &Cli, out: &mut impl Write, k: u32, output: Option<&PathBuf>) -> Outcome {
    let w = match witness(k) {
        Ok(w) => w,
        Err(e @ ConstructError::TooLarge { .. }) => return Err(Failure::Budget(e.to_string())),
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    let (w, budget_note) = match certify(w.clone(), Some(cli.budget)) {
        Ok(w) => (w, None),
        Err(ConstructError::Solve(e)) => (w, Some(e.to_string())),
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    let record = w.record();
    match output {
        Some(path) => {
            let sidecar = sidecar_path(path);
            fs::write(path, to_edge_list(&w.graph))
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            fs::write(&sidecar, format!("{record}\n"))
                .map_err(|e| Failure::Input(format!("{}: {e}", sidecar.display())))?;
            if cli.records {
                let rec = json!({
                    "command": "generate",
                    "k": k,
                    "graph": path.display().to_string(),
                    "recipe": sidecar.display().to_string(),
                    "vertices": w.graph.vertex_count(),
                    "edges": w.graph.edge_count(),
                    "certified": w.certified,
                });
                emit(out, &format!("{rec}\n"))?;
            } else {
                emit(out, &summary(&w))?;
                emit(out, &format!("wrote {} and {}\n", path.display(), sidecar.display()))?;
            }
        }
        None if cli.records => {
            let rec = json!({
                "command": "generate",
                "graph6": to_graph6(&w.graph),
                "recipe": record,
            });
            emit(out, &format!("{rec}\n"))?;
        }
        None => {
            let comments: String = summary(&w).lines().map(|l| format!("# {l}\n")).collect();
            emit(out, &comments)?;
            emit(out, &to_edge_list(&w.graph))?;
        }
    }
    match budget_note {
        Some(note) => Err(Failure::Budget(format!("witness written uncertified: {note}"))),
        None => Ok(()),
    }
}

fn sidecar_path(path: &PathBuf) -> PathBuf {
    let mut s = path.clone().into_os_string();
    s.push(".recipe.json");
    PathBuf::from(s)
}

fn summary(w: &Witness) -> String {
    format!(
        "witness for value {}: {} vertices, {} edges, padding {}, {}\n",
        w.recipe.k,
        w.graph.vertex_count(),
        w.graph.edge_count(),
        if w.recipe.padding_used { "used" } else { "unused" },
        if w.certified { "certified" } else { "not certified" }
    )
}

fn run_verify(
    cli: &Cli,
    out: &mut impl Write,
    theorem: &str,
    max_n: Option<usize>,
    samples: Option<usize>,
    seed: u64,
) -> Outcome {
    let id: TheoremId = theorem.parse().map_err(|e| {
        let known: Vec<_> = TheoremId::ALL.iter().map(|t| t.name()).collect();
        Failure::Input(format!("{e}; expected one of {}", known.join(", ")))
    })?;
    let mut scale = id.default_scale();
    scale.max_n = max_n.unwrap_or(scale.max_n);
    scale.samples = samples.unwrap_or(scale.samples);
    scale.seed = seed;
    scale.budget = Some(cli.budget);

    let show = |out: &mut dyn Write, r: &TheoremCheckResult| {
        let text = if cli.records {
            format!("{}\n", r.to_record())
        } else {
            r.to_text()
        };
        out.write_all(text.as_bytes())
    };
    match verify_theorem(id, scale) {
        Ok(r) => {
            show(out, &r).map_err(|e| Failure::Input(e.to_string()))?;
            if r.passed() {
                Ok(())
            } else {
                Err(Failure::Check(format!("{id}: {} counterexamples", r.failures.len())))
            }
        }
        Err(VerifyError::Budget { partial, source }) => {
            show(out, &partial).map_err(|e| Failure::Input(e.to_string()))?;
            Err(Failure::Budget(format!("{id}: {source}; result above is partial")))
        }
        Err(VerifyError::Enumeration(e)) => Err(Failure::Input(e.to_string())),
        Err(VerifyError::Construction(e)) => Err(Failure::Check(e.to_string())),
    }
}

fn run_census(cli: &Cli, out: &mut impl Write, max_n: usize, rule: VertexClass) -> Outcome {
    let show = |out: &mut dyn Write, t: &CensusTable| {
        let text = if cli.records {
            t.to_records().into_iter().map(|l| l + "\n").collect()
        } else {
            t.to_text()
        };
        out.write_all(text.as_bytes())
    };
    match census(max_n, rule, Some(cli.budget)) {
        Ok(t) => show(out, &t).map_err(|e| Failure::Input(e.to_string())),
        Err(CensusError::Budget { partial, source }) => {
            show(out, &partial).map_err(|e| Failure::Input(e.to_string()))?;
            Err(Failure::Budget(format!("{source}; table above is partial")))
        }
        Err(CensusError::Enumeration(e)) => Err(Failure::Input(e.to_string())),
    }
}

fn convert(out: &mut impl Write, input: &str, to: Format) -> Outcome {
    let g = read_graph(input)?;
    let text = match to {
        Format::Graph6 => format!("{}\n", to_graph6(&g)),
        Format::Edges => to_edge_list(&g),
    };
    emit(out, &text)
}
