mod commands;
mod dsl;
mod examples;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};

use commands::{CertifyKind, CoverArgs, CoverKind, Ctx, Matrix, SweepArgs, TensorArgs};
use report::Report;

/// Exact certification of perfect state transfer and pair state transfer on
/// graphs, tensor products and double covers.
///
/// Graphs: `K n`, `P n`, `C n`, `circ n: s1,s2,..`, `edges n: u-v,..`,
/// `tensor(<g>,<g>)`, `cover(<g>,<g>)`. Times: `pi/2`, `1/2pi`, `3/4pi`.
/// Exit codes: 0 holds, 1 does not hold, 2 usage error, 3 exact and
/// numerical results disagree. PAIRWALK_TOL overrides the 1e-9 tolerance.
#[derive(Debug, Parser)]
#[command(name = "pairwalk", version)]
struct Cli {
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues with multiplicities
    Spectrum {
        graph: String,
        #[arg(long, conflicts_with = "adjacency")]
        laplacian: bool,
        #[arg(long)]
        adjacency: bool,
    },
    /// Certify a transfer (`0 1`, `0-1 2-3`) or periodicity (`0-1`)
    Certify {
        graph: String,
        #[arg(value_enum)]
        kind: CertifyKind,
        #[arg(required = true, num_args = 1..=2)]
        states: Vec<String>,
        /// Override the matrix implied by the kind
        #[arg(long, value_enum)]
        matrix: Option<Matrix>,
        /// Check the certificate with the series oracle
        #[arg(long)]
        verify: bool,
    },
    /// Pair transfer in G × H
    #[command(group(ArgGroup::new("theorem").required(true).args(["pst", "pairpst", "swap"])))]
    #[command(group(ArgGroup::new("when").required(true).args(["solve", "at"])))]
    Tensor {
        /// H has PST between --pst-pair w z; pairs are in G
        #[arg(long)]
        pst: bool,
        /// H has adjacency pair transfer between --pairs; --vertex w [z] in G
        #[arg(long)]
        pairpst: bool,
        /// Swapped pairs from --pairs a-b in G and --pst-pair w z in H
        #[arg(long)]
        swap: bool,
        g: String,
        h: String,
        #[arg(long, num_args = 1..=2)]
        pairs: Vec<String>,
        #[arg(long, num_args = 1..=2)]
        pst_pair: Vec<usize>,
        #[arg(long, num_args = 1..=2)]
        vertex: Vec<usize>,
        /// Smallest time at which the conditions hold
        #[arg(long)]
        solve: bool,
        /// Exact time, e.g. 1/2pi
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Pair transfer in the double cover G ⋉ H
    Cover {
        g: String,
        h: String,
        #[arg(long, value_enum)]
        mode: CoverKind,
        #[arg(long)]
        pair: String,
        /// Target pair for modes b and c
        #[arg(long)]
        target: Option<String>,
        /// Side of the cover for mode b
        #[arg(long, default_value_t = 0)]
        side: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        verify: bool,
    },
    /// Fidelity between two states over a time range
    Sweep {
        graph: String,
        from_state: String,
        to_state: String,
        #[arg(long)]
        adjacency: bool,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "pi")]
        to: String,
        #[arg(long, default_value_t = 721)]
        steps: usize,
        /// Write `t,fidelity` rows here
        #[arg(long)]
        csv: Option<String>,
    },
    /// Re-run the worked example families
    Examples {
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Evaluate at pi/3 instead of pi/2; every case must fail
        #[arg(long)]
        self_test: bool,
    },
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> commands::Result<report::Outcome> {
    match cmd {
        Command::Spectrum { graph, adjacency, .. } => {
            commands::spectrum(ctx, graph, if *adjacency { Matrix::Adjacency } else { Matrix::Laplacian })
        }
        Command::Certify { graph, kind, states, matrix, verify } => {
            commands::certify(ctx, graph, *kind, states, *matrix, *verify)
        }
        Command::Tensor { pst, pairpst, g, h, pairs, pst_pair, vertex, at, verify, .. } => commands::tensor(
            ctx,
            TensorArgs {
                theorem: if *pst { "pst" } else if *pairpst { "pairpst" } else { "swap" },
                g,
                h,
                pairs,
                pst_pair,
                vertex,
                at: at.as_deref(),
                verify: *verify,
            },
        ),
        Command::Cover { g, h, mode, pair, target, side, at, verify } => commands::cover(
            ctx,
            CoverArgs { g, h, mode: *mode, pair, target: target.as_deref(), side: *side, at, verify: *verify },
        ),
        Command::Sweep { graph, from_state, to_state, adjacency, from, to, steps, csv } => commands::sweep(
            ctx,
            SweepArgs {
                graph,
                from_state,
                to_state,
                matrix: if *adjacency { Matrix::Adjacency } else { Matrix::Laplacian },
                t_min: from,
                t_max: to,
                steps: *steps,
                csv: csv.as_deref(),
            },
        ),
        Command::Examples { min_n, max_n, self_test } => examples::examples(ctx, *min_n, *max_n, *self_test),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let outcome = Ctx::from_env().and_then(|ctx| dispatch(&ctx, &cli.command));
    match outcome {
        Ok(o) => {
            if cli.json {
                let report = Report {
                    command,
                    inputs: o.inputs,
                    result: o.result,
                    warnings: o.warnings,
                    wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                    exit_code: o.exit as i32,
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", o.text);
                for w in &o.warnings {
                    println!("warning: {w}");
                }
            }
            ExitCode::from(o.exit as u8)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({"command": command, "error": e.to_string(), "exit_code": e.exit() as i32}));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
