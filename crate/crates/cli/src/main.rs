use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use implicitize::run::{run, Command, Options, Which, EXIT_INPUT};
use implicitize_core::degree::DegreeEvent;

/// Numerical implicitization: dimension, Hilbert function, degree and
/// point membership for the image of a polynomial map.
#[derive(Parser)]
#[command(name = "implicitize", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Seed for every random choice; a random seed is drawn and echoed if
    /// omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Singular value gap that marks a numerical rank drop.
    #[arg(long, global = true, default_value_t = implicitize_core::DEFAULT_GAP_THRESHOLD)]
    threshold: f64,

    /// Worker threads for path tracking (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress progress events on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of the image.
    Dim { problem: PathBuf },
    /// Hilbert function value of the image in one degree.
    Hilbert {
        problem: PathBuf,
        #[arg(long = "degree-arg")]
        degree_arg: Option<u32>,
        /// Include the interpolation matrix in the table.
        #[arg(long)]
        include_matrices: bool,
    },
    /// Degree of the image, with an optional persisted witness set.
    Degree {
        problem: PathBuf,
        /// Consecutive monodromy loops without progress before a trace test.
        #[arg(long, default_value_t = 4)]
        max_loops: usize,
        #[arg(long, default_value_t = 10)]
        max_trace_tests: usize,
        /// Hard cap on the total number of monodromy loops.
        #[arg(long)]
        loop_limit: Option<usize>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Whether a point lies on the image, from a persisted witness set.
    Member {
        problem: PathBuf,
        #[arg(long)]
        witness_in: PathBuf,
        /// JSON array of [re, im] pairs, or @path to a file holding one.
        #[arg(long)]
        point: String,
    },
    /// General points of the source or of the image.
    Sample {
        problem: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = WhichArg::Image)]
        which: WhichArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Source,
    Image,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("input error: --threads: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    let mut opts = Options {
        seed: cli.seed.unwrap_or_else(|| RandomState::new().hash_one(std::process::id())),
        threshold: cli.threshold,
        ..Options::default()
    };
    let (command, problem) = match cli.command {
        Cmd::Dim { problem } => (Command::Dim, problem),
        Cmd::Hilbert {
            problem,
            degree_arg,
            include_matrices,
        } => {
            opts.degree_arg = degree_arg;
            opts.include_matrices = include_matrices;
            (Command::Hilbert, problem)
        }
        Cmd::Degree {
            problem,
            max_loops,
            max_trace_tests,
            loop_limit,
            witness_out,
        } => {
            opts.max_repetitive_monodromies = max_loops;
            opts.max_trace_tests = max_trace_tests;
            opts.loop_limit = loop_limit;
            opts.witness_out = witness_out;
            (Command::Degree, problem)
        }
        Cmd::Member {
            problem,
            witness_in,
            point,
        } => {
            opts.witness_in = Some(witness_in);
            opts.point = Some(point);
            (Command::Member, problem)
        }
        Cmd::Sample { problem, count, which } => {
            opts.count = count;
            opts.which = match which {
                WhichArg::Source => Which::Source,
                WhichArg::Image => Which::Image,
            };
            (Command::Sample, problem)
        }
    };

    let quiet = cli.quiet;
    let mut progress = |event: &DegreeEvent| {
        if quiet {
            return;
        }
        let line = match event {
            DegreeEvent::PointsFound { loop_index, points } => {
                serde_json::json!({"event": "points_found", "loop": loop_index, "points": points})
            }
            DegreeEvent::TraceTest {
                points,
                deviation,
                passed,
            } => serde_json::json!({"event": "trace_test", "points": points, "deviation": deviation, "passed": passed}),
            DegreeEvent::SliceReplaced { points } => {
                serde_json::json!({"event": "slice_replaced", "points": points})
            }
        };
        let _ = writeln!(std::io::stderr(), "{line}");
    };

    match run(command, &problem, &opts, &mut progress) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.envelope).expect("envelope serializes");
            println!("{text}");
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
