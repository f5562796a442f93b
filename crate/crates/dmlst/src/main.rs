use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmlst::corpus::run_corpus;
use dmlst::generate::generate_random;
use dmlst::io::{parse_graph, write_graph, ParseError};
use dmlst::report::Report;
use dmlst::table_io::{read_table, write_table};
use dmlst_core::memo::MemoTable;
use dmlst_core::oracle;
use dmlst_core::solver::{self, SolveError, SolverConfig, Variant};
use dmlst_core::{DiGraph, VertexId};

const EXIT_SOLVED: u8 = 0;
const EXIT_OTHER: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "dmlst", version, about = "Exact directed maximum leaf spanning tree solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance.
    Solve(SolveArgs),
    /// Brute-force reference answer (small graphs only).
    Oracle(OracleArgs),
    /// Print a random instance in the edge-list format.
    Generate {
        /// n,p,seed
        #[arg(long, value_parser = parse_random)]
        random: RandomSpec,
    },
    /// Build or inspect a memo table file.
    #[command(subcommand)]
    Table(TableCommand),
    /// Compare all variants with the oracle on random instances.
    Corpus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Edge-list file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Random instance: n,p,seed
    #[arg(long, value_parser = parse_random)]
    random: Option<RandomSpec>,
}

#[derive(Args)]
struct RootChoice {
    /// 1-indexed root; all roots are tried when omitted.
    #[arg(long, conflicts_with = "all_roots")]
    root: Option<usize>,
    #[arg(long)]
    all_roots: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    root: RootChoice,
    #[arg(long, value_enum, default_value_t = VariantArg::Branch)]
    variant: VariantArg,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    /// Audit every branching node against the running-time analysis.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Prebuilt memo table (memo variant only).
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    root: RootChoice,
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Fill every entry and write the table.
    Build {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        /// Maximum number of entries.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a table's header and entries.
    Dump {
        file: PathBuf,
        /// Also list every entry.
        #[arg(long)]
        entries: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Branch,
    Naive,
    Memo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy)]
struct RandomSpec {
    n: usize,
    p: f64,
    seed: u64,
}

fn parse_random(s: &str) -> Result<RandomSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [n, p, seed] = parts.as_slice() else {
        return Err("expected n,p,seed".into());
    };
    let spec = RandomSpec {
        n: n.trim().parse().map_err(|e| format!("n: {e}"))?,
        p: p.trim().parse().map_err(|e| format!("p: {e}"))?,
        seed: seed.trim().parse().map_err(|e| format!("seed: {e}"))?,
    };
    if !(0.0..=1.0).contains(&spec.p) {
        return Err("p must lie in [0, 1]".into());
    }
    Ok(spec)
}

enum Failure {
    Parse(ParseError),
    Other(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Parse(e) => {
                eprintln!("parse error: {e}");
                ExitCode::from(EXIT_PARSE)
            }
            Failure::Other(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_OTHER)
            }
        }
    }
}

fn load(input: &Input) -> Result<DiGraph, Failure> {
    match (&input.input, input.random) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            parse_graph(&text).map_err(Failure::Parse)
        }
        (None, Some(r)) => Ok(generate_random(r.n, r.p, r.seed)),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn root_of(choice: &RootChoice, g: &DiGraph) -> Result<Option<VertexId>, Failure> {
    match choice.root {
        None => Ok(None),
        Some(r) if r >= 1 && r <= g.capacity() => Ok(Some(VertexId::from(r - 1))),
        Some(r) => Err(Failure::Other(format!("root {r} outside 1..={}", g.capacity()))),
    }
}

fn run_solve(a: SolveArgs) -> Result<u8, Failure> {
    let g = load(&a.input)?;
    let variant = match a.variant {
        VariantArg::Branch => Variant::BranchReduce,
        VariantArg::Naive => Variant::NaiveBn,
        VariantArg::Memo => Variant::Memoized,
    };
    let mut cfg = SolverConfig { audit: a.audit, variant, node_limit: a.node_limit, alpha: a.alpha };
    let root = root_of(&a.root, &g)?;
    let mut table = match &a.table {
        Some(path) => {
            let mut f = fs::File::open(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            let t = read_table(&mut f).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            if t.graph() != &g {
                return Err(Failure::Other("table was built for a different graph".into()));
            }
            Some(t)
        }
        None => None,
    };
    if let Some(t) = &table {
        cfg.alpha = t.alpha();
        cfg.variant = Variant::Memoized;
    }
    let outcome = match (root, table.as_mut()) {
        (Some(r), Some(t)) => solver::solve_rooted_with_table(&g, r, cfg, t),
        (Some(r), None) => solver::solve_rooted(&g, r, cfg),
        (None, Some(t)) => solver::solve_with_table(&g, cfg, t),
        (None, None) => solver::solve(&g, cfg),
    };
    let res = match outcome {
        Ok(res) => res,
        Err(SolveError::Timeout { nodes }) => {
            eprintln!("timeout after {nodes} nodes");
            return Ok(EXIT_TIMEOUT);
        }
        Err(e) => return Err(Failure::Other(e.to_string())),
    };
    let report = Report::new(&res, a.audit && cfg.variant == Variant::BranchReduce);
    match a.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(if res.is_feasible() { EXIT_SOLVED } else { EXIT_INFEASIBLE })
}

fn run_oracle(a: OracleArgs) -> Result<u8, Failure> {
    let g = load(&a.input)?;
    let roots: Vec<VertexId> = match root_of(&a.root, &g)? {
        Some(r) => vec![r],
        None => g.vertices().collect(),
    };
    let mut best = None;
    for r in roots {
        let v = oracle::solve_unconstrained_capped(&g, r, a.cap).map_err(|e| Failure::Other(e.to_string()))?;
        best = best.max(v);
    }
    match best {
        Some(k) => {
            println!("leafCount: {k}");
            Ok(EXIT_SOLVED)
        }
        None => {
            println!("infeasible");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn run_table(cmd: TableCommand) -> Result<u8, Failure> {
    match cmd {
        TableCommand::Build { input, alpha, budget, out } => {
            let g = load(&input)?;
            let t = MemoTable::build(g, alpha, budget).map_err(|e| Failure::Other(e.to_string()))?;
            let mut f = fs::File::create(&out).map_err(|e| Failure::Other(format!("{}: {e}", out.display())))?;
            write_table(&mut f, &t).map_err(|e| Failure::Other(e.to_string()))?;
            println!("entries: {}\nthreshold: {}", t.len(), t.threshold());
        }
        TableCommand::Dump { file, entries } => {
            let mut f = fs::File::open(&file).map_err(|e| Failure::Other(format!("{}: {e}", file.display())))?;
            let t = read_table(&mut f).map_err(|e| Failure::Other(format!("{}: {e}", file.display())))?;
            let filled = t.iter().filter(|(_, e)| e.is_some()).count();
            println!("alpha: {}", t.alpha());
            println!("vertices: {}", t.graph().capacity());
            println!("arcs: {}", t.graph().arc_count());
            println!("threshold: {}", t.threshold());
            println!("entries: {} ({} nonempty)", t.len(), filled);
            if entries {
                let ids = |xs: &[VertexId]| xs.iter().map(|v| (v.index() + 1).to_string()).collect::<Vec<_>>().join(",");
                let mut out = io::stdout().lock();
                for (k, e) in t.iter() {
                    let value = e.as_ref().map_or("empty".to_string(), |e| format!("{} leaves", e.leaves));
                    // stop quietly when the reader goes away (e.g. piped into head)
                    if writeln!(out, "{{{}}} bn={{{}}} fl={{{}}}: {value}", ids(&k.vertices), ids(&k.bn), ids(&k.fl))
                        .is_err()
                    {
                        break;
                    }
                }
            }
        }
    }
    Ok(EXIT_SOLVED)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_OTHER } else { EXIT_SOLVED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Generate { random } => {
            print!("{}", write_graph(&generate_random(random.n, random.p, random.seed)));
            Ok(EXIT_SOLVED)
        }
        Command::Table(cmd) => run_table(cmd),
        Command::Corpus { n, count, p, seed, alpha } => {
            let s = run_corpus(n, count, p, seed, alpha);
            print!("{}", s.render());
            Ok(if s.mismatches == 0 && s.invalid_witnesses == 0 { EXIT_SOLVED } else { EXIT_OTHER })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => f.report(),
    }
}
