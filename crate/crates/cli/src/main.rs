use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use higgs_cli::commands::{cmd_check, cmd_dim, cmd_jh, cmd_rays, cmd_sweep, Mode, Options, Outcome};
use higgs_cli::doc::{from_json, parse_alpha, InputError, PairDocument, SweepDocument};
use higgs_cli::render;

#[derive(Parser)]
#[command(name = "higgs", version, about = "Exact stability checks for split-model Higgs pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Include elapsed_ms in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the stability of one pair.
    Check {
        /// Pair document (JSON), or - for standard input.
        input: String,
        #[arg(long, default_value = "both")]
        mode: String,
        /// Overrides the document's alpha: "p/q" or "mu".
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        strict_sections: bool,
    },
    /// Compare the general and simplified checkers over a family of pairs.
    Sweep {
        /// Sweep document (JSON), or - for standard input.
        spec: String,
        /// Maximum number of instances (default 1000000).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Print the weight cone of a flag and its extremal rays.
    Rays {
        input: String,
        /// Flag pieces as JSON, e.g. [[1],[2,3],[4]] (1-based).
        #[arg(long)]
        flag: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Expected dimension (g-1) dim G of the moduli space.
    Dim {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        genus: u32,
        /// Also report the Euler characteristic d + r(1-g) for this rank...
        #[arg(long, requires = "euler_degree")]
        euler_rank: Option<i64>,
        /// ...and this degree.
        #[arg(long, requires = "euler_rank")]
        euler_degree: Option<i64>,
    },
    /// Jordan-Hölder decomposition of a polystable Sp2nR pair.
    Jh {
        input: String,
        #[arg(long)]
        alpha: Option<String>,
    },
}

fn read_input(path: &str) -> Result<String, InputError> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map(|_| text).map_err(|e| InputError::new("", format!("cannot read {path}: {e}")))
}

fn pair_doc(path: &str) -> Result<PairDocument, InputError> {
    from_json(&read_input(path)?)
}

fn options(alpha: Option<&str>) -> Result<Options, InputError> {
    Ok(Options {
        alpha: alpha.map(|a| parse_alpha(a, "--alpha")).transpose()?,
        ..Options::default()
    })
}

fn run(cli: &Cli) -> Outcome {
    let attempt = |command: &str, f: &dyn Fn() -> Result<Outcome, InputError>| {
        f().unwrap_or_else(|e| Outcome::input_error(command, &e))
    };
    let timed = |mut o: Options| {
        o.timing = cli.timing;
        o
    };
    match &cli.command {
        Command::Check { input, mode, alpha, strict_sections } => attempt("check", &|| {
            let mode = Mode::parse(mode)
                .ok_or_else(|| InputError::new("--mode", format!("expected general, simplified or both, got {mode:?}")))?;
            let mut opts = timed(options(alpha.as_deref())?);
            opts.strict_sections = *strict_sections;
            Ok(cmd_check(&pair_doc(input)?, mode, &opts))
        }),
        Command::Sweep { spec, budget } => attempt("sweep", &|| {
            let doc: SweepDocument = from_json(&read_input(spec)?)?;
            let opts = Options { budget: *budget, timing: cli.timing, ..Options::default() };
            Ok(cmd_sweep(&doc, &opts))
        }),
        Command::Rays { input, flag, alpha } => attempt("rays", &|| {
            let pieces: Option<Vec<Vec<usize>>> = flag.as_deref().map(from_json).transpose().map_err(|e| {
                InputError::new(format!("--flag{}", if e.field.is_empty() { String::new() } else { format!(".{}", e.field) }), e.message)
            })?;
            Ok(cmd_rays(&pair_doc(input)?, pieces.as_deref(), &timed(options(alpha.as_deref())?)))
        }),
        Command::Dim { group, n, genus, euler_rank, euler_degree } => {
            cmd_dim(group, *n, *genus, euler_rank.zip(*euler_degree))
        }
        Command::Jh { input, alpha } => attempt("jh", &|| {
            Ok(cmd_jh(&pair_doc(input)?, &timed(options(alpha.as_deref())?)))
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("cannot set up {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&cli);
    let text = render(&outcome.report);
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if let Some(diags) = outcome.report.get("diagnostics").and_then(|d| d.as_array()) {
        for d in diags {
            eprintln!("{}: {}", d["field"].as_str().unwrap_or(""), d["message"].as_str().unwrap_or(""));
        }
    }
    ExitCode::from(outcome.exit as u8)
}
