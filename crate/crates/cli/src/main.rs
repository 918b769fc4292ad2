use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::LevelFilter;

use ripm::error::Error;
use ripm::gen::bounded_instance;
use ripm::init::round_to_vertex;
use ripm::io::{load_instance, save_instance, TraceWriter};
use ripm::lp::LpParameters;
use ripm::solver::{solve_traced, Mode, SolveConfig};
use ripm::trace::NoTrace;

#[derive(Parser)]
#[command(name = "ripm", version, about = "Interior point LP solver")]
struct Cli {
    /// Log informational messages as well as warnings.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the instance in FILE and print a JSON report.
    Solve(SolveArgs),
    /// Write a random bounded instance with a known interior point.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    L2,
    Robust,
    Fast,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::L2 => Mode::L2,
            ModeArg::Robust => Mode::Robust,
            ModeArg::Fast => Mode::Fast,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "l2")]
    mode: ModeArg,
    /// Target objective accuracy as a fraction of LR.
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    /// Inner radius r; overrides the file.
    #[arg(long)]
    inner_radius: Option<f64>,
    /// Outer radius R; overrides the file.
    #[arg(long)]
    outer_radius: Option<f64>,
    /// Vertex gap: every non-optimal vertex is worse by at least eta·LR.
    #[arg(long)]
    eta: Option<f64>,
    /// Round the solution to the exact optimal vertex (needs --eta).
    #[arg(long, requires = "eta")]
    round_to_vertex: bool,
    /// Write a per-iteration CSV trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Snapshot refresh period exponent for fast mode.
    #[arg(long)]
    ell_star: Option<u32>,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::Dimension(_)
        | Error::RankDeficient
        | Error::InfeasibleInput(_)
        | Error::Io(_) => 2,
        Error::RoundingFailure(_) => 4,
        _ => 3,
    }
}

fn params_for(args: &SolveArgs, from_file: Option<LpParameters>) -> Result<LpParameters, Error> {
    let r = args.inner_radius.or(from_file.map(|p| p.r));
    let big_r = args.outer_radius.or(from_file.map(|p| p.big_r));
    match (r, big_r) {
        (Some(r), Some(big_r)) => Ok(LpParameters { r, big_r, l: from_file.and_then(|p| p.l) }),
        _ => Err(Error::InvalidInput(
            "the instance has no params section; pass --inner-radius and --outer-radius".into(),
        )),
    }
}

fn run_solve(args: &SolveArgs) -> Result<String, Error> {
    let (lp, from_file) = load_instance(&args.file)?;
    let params = params_for(args, from_file)?;
    let mode = Mode::from(args.mode);
    let config = SolveConfig { ell_star: args.ell_star, ..SolveConfig::default() };
    let mut report = match &args.trace {
        Some(path) => {
            let mut w = TraceWriter::create(path)?;
            let report = solve_traced(&lp, &params, args.delta, mode, &config, &mut w)?;
            w.finish()?;
            report
        }
        None => solve_traced(&lp, &params, args.delta, mode, &config, &mut NoTrace)?,
    };
    if args.round_to_vertex {
        let eta = args.eta.expect("clap enforces --eta");
        report.vertex = Some(round_to_vertex(&lp, &report.x, eta, args.delta, &params)?);
    }
    Ok(report.to_json())
}

fn run_generate(args: &GenerateArgs) -> Result<String, Error> {
    if args.rows == 0 || args.rows > args.cols {
        return Err(Error::InvalidInput(format!("need 0 < rows <= cols, got {} x {}", args.rows, args.cols)));
    }
    let (lp, params) = bounded_instance(args.seed, args.cols, args.rows);
    save_instance(&args.out, &lp, Some(&params))?;
    Ok(format!("wrote {}", args.out.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose { LevelFilter::Info } else { LevelFilter::Warn })
        .init();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Generate(args) => run_generate(args),
    };
    match result {
        Ok(out) => {
            // A closed pipe (`| head`) is the reader's choice, not a failure.
            match writeln!(std::io::stdout().lock(), "{out}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
