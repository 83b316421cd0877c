use clap::{Args, Parser, Subcommand};
use qserre_cli::{
    drg_analyze, drg_build, error_json, graph_json, leonard_build, read_graph, series_check, shuffle_verify, td_blocks,
    to_pretty, write_atomic, Run, RunError, RunResult, EXIT_CONFIG,
};
use qserre_core::drg::DrgConfig;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact verification suites for alternating elements, q-Serre Leonard
/// systems and bilinear forms graphs.
#[derive(Parser)]
#[command(name = "qserre-lab", version)]
struct Cli {
    /// Worker threads (default: QSERRE_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip the summary table.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shuffle-algebra suites.
    #[command(subcommand)]
    Shuffle(ShuffleCmd),
    /// Leonard systems of q-Serre type.
    #[command(subcommand)]
    Leonard(LeonardCmd),
    /// Generating-function identities.
    Series(Lsys),
    /// Block tables and basis transfer on a Leonard system.
    Td(TdArgs),
    /// Bilinear forms graphs.
    #[command(subcommand)]
    Drg(DrgCmd),
}

#[derive(Subcommand)]
enum ShuffleCmd {
    Verify {
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        q: String,
        #[arg(long = "K", default_value_t = 4)]
        k: usize,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        l0: String,
        #[arg(long, default_value = "-3", allow_hyphen_values = true)]
        l1: String,
    },
}

#[derive(Args)]
struct Lsys {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    #[arg(long = "N", default_value_t = 12)]
    n: usize,
}

#[derive(Subcommand)]
enum LeonardCmd {
    Build(Lsys),
}

#[derive(Args)]
struct TdArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    #[arg(long = "K", default_value_t = 3)]
    k: usize,
}

#[derive(Subcommand)]
enum DrgCmd {
    /// Write a graph file (to --out, else standard output).
    Build {
        #[arg(long, default_value = "bilinear")]
        family: String,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        p: u64,
    },
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long = "K", default_value_t = 3)]
        k: usize,
        /// Check every thin module through a rational model.
        #[arg(long)]
        exact: bool,
    },
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, RunError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("QSERRE_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| RunError::Config(format!("QSERRE_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Shuffle(_) => "shuffle verify",
        Cmd::Leonard(_) => "leonard build",
        Cmd::Series(_) => "series",
        Cmd::Td(_) => "td",
        Cmd::Drg(DrgCmd::Build { .. }) => "drg build",
        Cmd::Drg(DrgCmd::Analyze { .. }) => "drg analyze",
    }
}

/// Runs the command; `Ok(Some(text))` is a graph file to print instead of a report.
fn dispatch(cli: &Cli) -> RunResult<(Run, Option<String>)> {
    Ok(match &cli.cmd {
        Cmd::Shuffle(ShuffleCmd::Verify { q, k, l0, l1 }) => (shuffle_verify(q, *k, l0, l1)?, None),
        Cmd::Leonard(LeonardCmd::Build(a)) => (leonard_build(a.d, &a.q, &a.xi, a.n)?, None),
        Cmd::Series(a) => (series_check(a.d, &a.q, &a.xi, a.n)?, None),
        Cmd::Td(a) => (td_blocks(a.d, &a.q, &a.xi, a.k)?, None),
        Cmd::Drg(DrgCmd::Build { family, rows, cols, p }) => {
            let (g, run) = drg_build(family, *rows, *cols, *p)?;
            (run, Some(to_pretty(&graph_json(&g))))
        }
        Cmd::Drg(DrgCmd::Analyze { graph, base, k, exact }) => {
            let g = read_graph(graph)?;
            let cfg = DrgConfig { base: *base, k_max: *k, exact: *exact, seed: cli.seed };
            (drg_analyze(&g, &cfg)?.1, None)
        }
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), RunError> {
    match &cli.out {
        Some(path) => write_atomic(path, text).map_err(|e| RunError::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    match threads(cli.threads) {
        Err(e) => {
            eprintln!("qserre-lab: {}", e.message());
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("qserre-lab: thread pool: {e}");
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
        Ok(None) => {}
    }
    let code = match dispatch(&cli) {
        Err(e) => {
            eprintln!("qserre-lab {name}: {}", e.message());
            if cli.out.is_some() {
                let _ = emit(&cli, &to_pretty(&error_json(name, &json!({}), &e)));
            }
            e.exit_code()
        }
        Ok((run, graph)) => {
            let (text, table_to_stderr) = match graph {
                Some(g) => (g, cli.out.is_none()),
                None => (to_pretty(&run.to_json()), false),
            };
            let summary = run.summary_table();
            let written = if cli.out.is_some() || table_to_stderr { emit(&cli, &text) } else { Ok(()) };
            if !cli.quiet {
                if table_to_stderr {
                    eprint!("{summary}");
                } else {
                    print!("{summary}");
                }
            }
            match written {
                Err(e) => {
                    eprintln!("qserre-lab: {}", e.message());
                    e.exit_code()
                }
                Ok(()) => run.exit_code(),
            }
        }
    };
    ExitCode::from(code as u8)
}
