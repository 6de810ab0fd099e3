//! `sortmatch`: command-line front end for the puzzle engine.
//!
//! Exit status: 0 on success, 1 when a solution is required but none
//! exists (or a checked grid is invalid), 2 on input errors, 3 when a search
//! budget runs out.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sortmatch_core::budget::DEFAULT_NODE_BUDGET;
use sortmatch_core::{
    board_violations, boustrophedon, build_graph_permutation, build_reduction, construct_solution,
    count_solutions_with, count_solvable_puzzles, enumerate_solutions_with, forbidden_witness,
    is_unique, nearest_solvable, solve_by_toposort, validate_grid, Budget, Digraph, Error,
    ForbiddenWitness, Grid, LabelWord, PermutationPuzzle, PuzzleDocument, SortingPuzzle,
};
use sortmatch_service::{ServiceConfig, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "sortmatch", version, about = "Sorting match puzzle engine")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide solvability, or validate the grid in the input with --grid.
    Check {
        #[command(flatten)]
        input: PuzzleInput,
        /// Validate the grid that follows the labels instead.
        #[arg(long)]
        grid: bool,
    },
    /// Print the puzzle with one solution grid.
    Solve {
        #[command(flatten)]
        input: PuzzleInput,
    },
    /// Count all solutions.
    Count {
        #[command(flatten)]
        input: PuzzleInput,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// List solutions in lexicographic order of their row-major values.
    Enumerate {
        #[command(flatten)]
        input: PuzzleInput,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Report whether the solution is unique and print it if so.
    Unique {
        #[command(flatten)]
        input: PuzzleInput,
    },
    /// Nearest solvable labelling by number of flipped labels.
    Repair {
        #[command(flatten)]
        input: PuzzleInput,
    },
    /// Solve a permutation puzzle given as JSON {"n", "rho", "gamma"}.
    PermutationSolve {
        /// Input file; standard input when absent or "-".
        file: Option<PathBuf>,
    },
    /// Build the grid acyclification instance for a digraph.
    Reduce {
        /// Digraph JSON {"n", "edges"}; standard input when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the structural guarantees and include the report.
        #[arg(long)]
        verify: bool,
    },
    /// Number of solvable puzzles of order n.
    Census { n: u64 },
    /// Run the local HTTP service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

#[derive(Args)]
struct PuzzleInput {
    /// Puzzle file (text or JSON); standard input when absent or "-".
    file: Option<PathBuf>,
    /// Row labels given inline, e.g. ADD.
    #[arg(long, requires = "cols", conflicts_with = "file")]
    rows: Option<String>,
    /// Column labels given inline.
    #[arg(long, requires = "rows")]
    cols: Option<String>,
}

#[derive(Args)]
struct BudgetArg {
    /// Node cap for exhaustive searches.
    #[arg(long, env = "SORTMATCH_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

/// Outcome of a verb: what to print and how to exit.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::Cancelled | Error::TooLarge(_) => {
                Failure::Budget(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_source(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

impl PuzzleInput {
    fn document(&self) -> Result<PuzzleDocument, Failure> {
        if let (Some(r), Some(c)) = (&self.rows, &self.cols) {
            let rows: LabelWord = r.parse()?;
            let cols: LabelWord = c.parse()?;
            return Ok(PuzzleDocument {
                puzzle: SortingPuzzle::new(rows, cols)?,
                grid: None,
            });
        }
        Ok(PuzzleDocument::parse(&read_source(self.file.as_deref())?)?)
    }

    fn puzzle(&self) -> Result<SortingPuzzle, Failure> {
        Ok(self.document()?.puzzle)
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn witness_text(w: &ForbiddenWitness) -> String {
    format!("witness: rows {} {}, columns {} {}\n", w.i, w.j, w.p, w.q)
}

fn check(input: &PuzzleInput, grid: bool, json: bool) -> Result<Outcome, Failure> {
    let doc = input.document()?;
    let p = &doc.puzzle;
    if grid {
        let g = doc
            .grid
            .as_ref()
            .ok_or_else(|| Failure::Input("input has no grid".into()))?;
        let valid = validate_grid(p, g)?;
        let board: Vec<Vec<Option<u32>>> = g
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(Some).collect())
            .collect();
        let violations = board_violations(p, &board)?;
        let stdout = if json {
            to_json(&json!({ "valid": valid, "violations": violations }))
        } else {
            let mut s = String::from(if valid { "VALID\n" } else { "INVALID\n" });
            for v in &violations {
                let cells: Vec<String> = v
                    .positions
                    .iter()
                    .map(|c| format!("({},{})", c.row, c.col))
                    .collect();
                let line = v
                    .line
                    .as_ref()
                    .map(|l| format!("{:?} {}", l.axis, l.index).to_lowercase())
                    .unwrap_or_else(|| "grid".into());
                let kind = serde_json::to_value(v.kind).expect("kind serializes");
                let _ = writeln!(
                    s,
                    "{line}: {} at {}",
                    kind.as_str().unwrap_or(""),
                    cells.join(" ")
                );
            }
            s
        };
        return Ok(Outcome {
            stdout,
            code: if valid { 0 } else { 1 },
        });
    }
    let witness = forbidden_witness(p);
    let stdout = match (json, &witness) {
        (true, Some(w)) => to_json(&json!({ "solvable": false, "witness": w })),
        (true, None) => to_json(&json!({ "solvable": true })),
        (false, Some(w)) => format!("UNSOLVABLE\n{}", witness_text(w)),
        (false, None) => "SOLVABLE\n".into(),
    };
    Ok(Outcome {
        stdout,
        code: if witness.is_some() { 1 } else { 0 },
    })
}

fn unsolvable(p: &SortingPuzzle, json: bool) -> Outcome {
    let w = forbidden_witness(p);
    let stdout = if json {
        to_json(&json!({ "solvable": false, "witness": w }))
    } else {
        format!(
            "UNSOLVABLE\n{}",
            w.map(|w| witness_text(&w)).unwrap_or_default()
        )
    };
    Outcome { stdout, code: 1 }
}

fn solve(input: &PuzzleInput, json: bool) -> Result<Outcome, Failure> {
    let p = input.puzzle()?;
    match construct_solution(&p) {
        Ok(grid) => {
            let doc = PuzzleDocument {
                puzzle: p,
                grid: Some(grid),
            };
            Ok(Outcome::ok(if json {
                to_json(&doc.to_json())
            } else {
                doc.to_text()
            }))
        }
        Err(Error::Unsolvable) => Ok(unsolvable(&p, json)),
        Err(e) => Err(e.into()),
    }
}

fn count(input: &PuzzleInput, budget: u64, json: bool) -> Result<Outcome, Failure> {
    let p = input.puzzle()?;
    let r = count_solutions_with(&p, &Budget::new(budget))?;
    Ok(Outcome::ok(if json {
        to_json(&json!({ "count": r.value.to_string(), "method": r.method }))
    } else {
        format!("{} ({})\n", r.value, r.method)
    }))
}

fn enumerate(
    input: &PuzzleInput,
    limit: usize,
    budget: u64,
    json: bool,
) -> Result<Outcome, Failure> {
    let p = input.puzzle()?;
    let grids = enumerate_solutions_with(&p, limit, &Budget::new(budget))?;
    Ok(Outcome::ok(if json {
        to_json(&json!({ "grids": grids }))
    } else {
        grids
            .iter()
            .map(Grid::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    }))
}

fn unique(input: &PuzzleInput, json: bool) -> Result<Outcome, Failure> {
    let p = input.puzzle()?;
    let grid = if is_unique(&p) {
        Some(boustrophedon(&p)?)
    } else {
        None
    };
    Ok(Outcome::ok(match (json, grid) {
        (true, g) => to_json(&json!({ "unique": g.is_some(), "grid": g })),
        (false, Some(g)) => format!("UNIQUE\n{g}"),
        (false, None) => "NOT UNIQUE\n".into(),
    }))
}

fn repair(input: &PuzzleInput, json: bool) -> Result<Outcome, Failure> {
    let p = input.puzzle()?;
    let r = nearest_solvable(&p);
    Ok(Outcome::ok(if json {
        to_json(&json!({ "cost": r.cost, "strategy": r.strategy, "target": r.target }))
    } else {
        format!(
            "cost: {}\nstrategy: {}\ntarget: {} {}\n",
            r.cost,
            r.strategy,
            r.target.rows(),
            r.target.cols()
        )
    }))
}

fn permutation_solve(file: Option<&Path>, json: bool) -> Result<Outcome, Failure> {
    let text = read_source(file)?;
    let pp: PermutationPuzzle =
        serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string()))?;
    match solve_by_toposort(&build_graph_permutation(&pp)) {
        Ok(grid) => Ok(Outcome::ok(if json {
            to_json(&json!({ "grid": grid }))
        } else {
            grid.to_string()
        })),
        Err(Error::Cyclic(cycle)) => {
            let stdout = if json {
                to_json(&json!({ "solvable": false, "cycle": cycle }))
            } else {
                let cells: Vec<String> = cycle
                    .iter()
                    .map(|c| format!("({},{})", c.row, c.col))
                    .collect();
                format!("UNSOLVABLE\ncycle: {}\n", cells.join(" -> "))
            };
            Ok(Outcome { stdout, code: 1 })
        }
        Err(e) => Err(e.into()),
    }
}

fn reduce(input: Option<&Path>, out: Option<&Path>, verify: bool) -> Result<Outcome, Failure> {
    let h = Digraph::from_json(&read_source(input)?)?;
    let g = build_reduction(&h)?;
    let mut doc = g.to_json();
    let mut code = 0;
    let mut summary = String::new();
    if verify {
        let report = sortmatch_core::verify_reduction(&g);
        if !report.passed() {
            code = 1;
        }
        let _ = writeln!(
            summary,
            "verification {}: N = {}, at most {} active cells per line",
            if report.passed() { "passed" } else { "FAILED" },
            g.size(),
            report.max_active_per_line
        );
        for v in &report.violations {
            let _ = writeln!(summary, "  {v}");
        }
        doc["verification"] = serde_json::to_value(&report).expect("report serializes");
    }
    let mut text = serde_json::to_string(&doc).expect("json values serialize");
    text.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(Outcome {
                stdout: summary,
                code,
            })
        }
        None => {
            eprint!("{summary}");
            Ok(Outcome { stdout: text, code })
        }
    }
}

fn census(n: u64, json: bool) -> Result<Outcome, Failure> {
    if n == 0 {
        return Err(Failure::Input("order must be at least 1".into()));
    }
    let c = count_solvable_puzzles(n);
    Ok(Outcome::ok(if json {
        to_json(&json!({ "n": n, "count": c.to_string() }))
    } else {
        format!("{c}\n")
    }))
}

fn serve(port: u16, budget: u64) -> Result<Outcome, Failure> {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Input(e.to_string()))?;
    eprintln!("listening on http://127.0.0.1:{port}");
    runtime
        .block_on(sortmatch_service::serve(
            port,
            ServiceConfig { max_nodes: budget },
        ))
        .map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Outcome::ok(String::new()))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Check { input, grid } => check(input, *grid, json),
        Command::Solve { input } => solve(input, json),
        Command::Count { input, budget } => count(input, budget.budget, json),
        Command::Enumerate {
            input,
            limit,
            budget,
        } => enumerate(input, *limit, budget.budget, json),
        Command::Unique { input } => unique(input, json),
        Command::Repair { input } => repair(input, json),
        Command::PermutationSolve { file } => permutation_solve(file.as_deref(), json),
        Command::Reduce { input, out, verify } => reduce(input.as_deref(), out.as_deref(), *verify),
        Command::Census { n } => census(*n, json),
        Command::Serve { port, budget } => serve(*port, budget.budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
