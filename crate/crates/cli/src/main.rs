//! `antimagic`: build, export and verify the local antimagic graph families.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antimagic_core::io::{
    graph_from_json, graph_to_dot, graph_to_graph6, graph_to_json, matrix_to_csv, matrix_to_json,
    Certificate,
};
use antimagic_core::oracle::{self, book, single_edge, triangle};
use antimagic_core::sweep::{crossed_grid, merged_grid, run_sweep};
use antimagic_core::*;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "antimagic", version, about = "Local antimagic 3-colorings of tripartite graph families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the label matrix of a family.
    Matrix {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
        format: MatrixFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a graph, optionally applying swaps from a move file.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = StageArg::Crossed)]
        stage: StageArg,
        /// JSON list of swaps, applied in order to the merged graph.
        #[arg(long)]
        swaps: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        /// With graph6, labels go to `<out>.labels`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a labeled JSON graph and write its certificate.
    Verify {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and check every instance on a parameter grid.
    Sweep {
        #[arg(short = 'n', default_value = "1..6", value_parser = parse_range)]
        n: RangeInclusive<u32>,
        #[arg(short = 'k', default_value = "1..8", value_parser = parse_range)]
        k: RangeInclusive<u32>,
        /// Sweep merged graphs over every `r, s` in this range instead.
        #[arg(long, value_parser = parse_range)]
        rs: Option<RangeInclusive<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive χ_la of a tiny graph.
    Oracle {
        /// k3, p2 or book (with `a=<paths> m=<leaves>`).
        #[arg(long, conflicts_with = "graph")]
        preset: Option<String>,
        /// `key=value` arguments for the preset.
        #[arg(requires = "preset")]
        preset_args: Vec<String>,
        #[arg(long, required_unless_present = "preset")]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = oracle::DEFAULT_EDGE_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the swaps that join two components of a merged graph.
    Swaps {
        #[command(flatten)]
        params: ParamArgs,
        /// Swaps to apply before listing.
        #[arg(long)]
        swaps: Option<PathBuf>,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(short = 'n')]
    n: u32,
    /// Defaults to `2rs + r + s` when `-r` and `-s` are given.
    #[arg(short = 'k')]
    k: Option<u32>,
    #[arg(short = 'r', requires = "s")]
    r: Option<u32>,
    #[arg(short = 's', requires = "r")]
    s: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    M2,
    M3,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Base,
    Crossed,
    Merged,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
    Graph6,
}

/// A failed command and its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn rejected(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

type CmdResult = Result<(), Failure>;

/// `a..b` (inclusive), `a..=b` or a single value.
fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => num(s)?..=num(s)?,
    };
    if range.is_empty() {
        return Err(format!("empty range {s}"));
    }
    if *range.start() == 0 {
        return Err("parameters start at 1".into());
    }
    if *range.end() > 64 {
        return Err("sweep bounds are capped at 64".into());
    }
    Ok(range)
}

impl ParamArgs {
    fn resolve(&self) -> Result<FamilyParams, Failure> {
        let family = match self.family {
            FamilyArg::M2 => Family::M2,
            FamilyArg::M3 => Family::M3,
        };
        let params = match (self.k, self.r, self.s) {
            (Some(k), Some(r), Some(s)) => FamilyParams::new(family, self.n, k).and_then(|p| p.with_factorization(r, s)),
            (None, Some(r), Some(s)) => FamilyParams::merged(family, self.n, r, s),
            (Some(k), _, _) => FamilyParams::new(family, self.n, k),
            (None, _, _) => return Err(usage("-k is required unless -r and -s are given")),
        };
        params.map_err(usage)
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// A move file: a JSON list of swaps, or an object with a `swaps` list.
fn read_swaps(path: &Path) -> Result<Vec<SwapSpec>, Failure> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum MoveFile {
        List(Vec<SwapSpec>),
        Wrapped { swaps: Vec<SwapSpec> },
    }
    let text = read(path)?;
    match serde_json::from_str(&text) {
        Ok(MoveFile::List(swaps) | MoveFile::Wrapped { swaps }) => Ok(swaps),
        Err(e) => Err(usage(format!("{}: not a swap list: {e}", path.display()))),
    }
}

/// The graph for `params` at `stage`, with any swaps from `swaps` applied.
fn build_graph(params: FamilyParams, stage: Stage, swaps: Option<&Path>) -> Result<LabeledGraph, Failure> {
    let Some(path) = swaps else {
        return build_family(params, stage).map_err(usage);
    };
    if stage != Stage::Merged {
        return Err(usage("swaps apply to the merged stage"));
    }
    let sequence = SwapSequence { params, swaps: read_swaps(path)? };
    sequence.build().map_err(|(idx, e)| match idx {
        Some(i) => usage(format!("swap {i} in {}: {e}", path.display())),
        None => usage(e),
    })
}

fn cmd_matrix(params: &ParamArgs, format: MatrixFormat, out: Option<&Path>) -> CmdResult {
    let mat = build_matrix(params.resolve()?).map_err(usage)?;
    let text = match format {
        MatrixFormat::Csv => matrix_to_csv(&mat),
        MatrixFormat::Json => matrix_to_json(&mat),
    };
    emit(out, &text)
}

fn cmd_build(params: &ParamArgs, stage: StageArg, swaps: Option<&Path>, format: GraphFormat, out: Option<&Path>) -> CmdResult {
    let stage = match stage {
        StageArg::Base => Stage::Base,
        StageArg::Crossed => Stage::Crossed,
        StageArg::Merged => Stage::Merged,
    };
    let g = build_graph(params.resolve()?, stage, swaps)?;
    match format {
        GraphFormat::Json => emit(out, &graph_to_json(&g)),
        GraphFormat::Dot => emit(out, &graph_to_dot(&g)),
        GraphFormat::Graph6 => {
            let (g6, sidecar) = graph_to_graph6(&g);
            if let Some(path) = out {
                let mut labels = path.as_os_str().to_owned();
                labels.push(".labels");
                emit(Some(Path::new(&labels)), &sidecar)?;
            }
            emit(out, &g6)
        }
    }
}

fn cmd_verify(graph: &Path, out: Option<&Path>) -> CmdResult {
    let text = read(graph)?;
    if text.trim().is_empty() {
        return Err(usage(format!("{} is empty", graph.display())));
    }
    let g = graph_from_json(&text).map_err(|e| usage(format!("{}: {e}", graph.display())))?;
    let report = verify_local_antimagic(&g).map_err(usage)?;
    let cert = Certificate::new(report, graph_stats(&g));
    emit(out, &to_json(&cert))?;
    if cert.is_local_antimagic {
        eprintln!("local antimagic: c(f) = {}, colors {:?}", cert.c_f, cert.colors);
        Ok(())
    } else {
        let violations: Vec<String> =
            cert.violations.iter().map(|v| serde_json::to_string(v).expect("violation serializes")).collect();
        Err(rejected(format!("not local antimagic:\n  {}", violations.join("\n  "))))
    }
}

fn cmd_sweep(n: RangeInclusive<u32>, k: RangeInclusive<u32>, rs: Option<RangeInclusive<u32>>, out: Option<&Path>) -> CmdResult {
    let grid = match rs {
        Some(rs) => merged_grid(n, rs),
        None => crossed_grid(n, k),
    };
    let report = run_sweep(&grid);
    emit(out, &to_json(&report))?;
    let summary = report.summary;
    if report.passed() {
        eprintln!("sweep: {} of {} cells passed", summary.passed, summary.total);
        Ok(())
    } else {
        let failed: Vec<String> = report
            .cells
            .iter()
            .filter(|c| !c.verified)
            .map(|c| format!("{}: {}", c.params, c.failures.join("; ")))
            .collect();
        Err(rejected(format!("sweep: {} of {} cells failed\n  {}", summary.failed, summary.total, failed.join("\n  "))))
    }
}

fn preset_graph(name: &str, args: &[String]) -> Result<LabeledGraph, Failure> {
    let mut a = None;
    let mut m = None;
    for arg in args {
        let (key, value) = arg.split_once('=').ok_or_else(|| usage(format!("expected key=value, got {arg:?}")))?;
        let value: u32 = value.parse().map_err(|e| usage(format!("{arg}: {e}")))?;
        match key {
            "a" => a = Some(value),
            "m" => m = Some(value),
            _ => return Err(usage(format!("unknown preset argument {key:?}"))),
        }
    }
    match (name, a, m) {
        ("k3", None, None) => Ok(triangle()),
        ("p2", None, None) => Ok(single_edge()),
        ("book", Some(a), Some(m)) if a >= 1 => Ok(book(a, m)),
        ("book", ..) => Err(usage("book needs a=<paths, at least 1> m=<leaves>")),
        ("k3" | "p2", ..) => Err(usage(format!("preset {name} takes no arguments"))),
        _ => Err(usage(format!("unknown preset {name:?} (k3, p2, book)"))),
    }
}

fn cmd_oracle(preset: Option<&str>, preset_args: &[String], graph: Option<&Path>, budget: usize, out: Option<&Path>) -> CmdResult {
    let g = match (preset, graph) {
        (Some(name), _) => preset_graph(name, preset_args)?,
        (None, Some(path)) => {
            graph_from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(usage("give --preset or --graph")),
    };
    let result = exhaustive_chi_la(&g, OracleOptions { budget, ..OracleOptions::default() }).map_err(usage)?;
    emit(out, &to_json(&result))?;
    match result.chi_la {
        Some(c) => eprintln!("chi_la = {c} ({} labelings tried)", result.labelings_tried),
        None => eprintln!("no local antimagic labeling"),
    }
    Ok(())
}

fn cmd_swaps(params: &ParamArgs, swaps: Option<&Path>, limit: Option<usize>, out: Option<&Path>) -> CmdResult {
    let g = build_graph(params.resolve()?, Stage::Merged, swaps)?;
    let mut moves = find_connecting_swaps(&g);
    eprintln!("{} connecting swaps", moves.len());
    if let Some(limit) = limit {
        moves.truncate(limit);
    }
    emit(out, &to_json(&moves))
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var("ANTIMAGIC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("ANTIMAGIC_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(usage)
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Matrix { params, format, out } => cmd_matrix(&params, format, out.as_deref()),
        Command::Build { params, stage, swaps, format, out } => {
            cmd_build(&params, stage, swaps.as_deref(), format, out.as_deref())
        }
        Command::Verify { graph, out } => cmd_verify(&graph, out.as_deref()),
        Command::Sweep { n, k, rs, out } => cmd_sweep(n, k, rs, out.as_deref()),
        Command::Oracle { preset, preset_args, graph, budget, out } => {
            cmd_oracle(preset.as_deref(), &preset_args, graph.as_deref(), budget, out.as_deref())
        }
        Command::Swaps { params, swaps, limit, out } => cmd_swaps(&params, swaps.as_deref(), limit, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
