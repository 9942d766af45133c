use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use pants_core::harness::{classify, run_experiment, ExperimentConfig, Outcome};
use pants_core::spectra::systole_collar_check;
use pants_core::trig::{hexagon_opposite_side, seam_to_cuff};
use pants_core::{
    decompose, fn_to_holonomy, parse_surface, systole, verify_bers_bound, CuffTriple,
    EnumerationPolicy, SpectraError, Surface, Tolerance, TrigError,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Short pants decompositions of hyperbolic surfaces.
#[derive(Parser)]
#[command(name = "pants", version)]
struct Cli {
    /// Relative tolerance for length comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Absolute tolerance for length comparisons.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_abs: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate pants trigonometry.
    #[command(subcommand)]
    Trig(TrigCommand),
    /// Shortest non-boundary closed geodesic of a surface file.
    Systole {
        file: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Decompose a surface file and certify the length bound.
    Peel {
        file: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Sample surfaces and verify the bound on each, writing a CSV.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum TrigCommand {
    /// Side of a right-angled hexagon opposite `c-side`.
    Hexagon {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long = "c-side", allow_negative_numbers = true)]
        c_side: f64,
    },
    /// Seams of the pants with cuffs alpha, beta, gamma.
    Seams {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long, default_value_t = 6)]
    max_word_len: usize,
    #[arg(long, default_value_t = 2)]
    margin: usize,
    /// Word length of conjugators used for crossing tests.
    #[arg(long, default_value_t = 4)]
    conjugator_cutoff: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    boundaries: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    len_min: f64,
    #[arg(long, default_value_t = 6.0)]
    len_max: f64,
    #[arg(long, default_value_t = 0.5)]
    bnd_min: f64,
    #[arg(long, default_value_t = 6.0)]
    bnd_max: f64,
    #[command(flatten)]
    policy: PolicyArgs,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: error.into(),
    }
}

fn numeric(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_NUMERIC,
        error: error.into(),
    }
}

fn trig_failure(e: TrigError) -> Failure {
    match e {
        TrigError::InvalidLength { .. } | TrigError::Overflow { .. } => usage(e),
        _ => numeric(e),
    }
}

impl Cli {
    fn policy(&self, args: &PolicyArgs) -> Result<EnumerationPolicy, Failure> {
        let tol = Tolerance::new(self.tol_rel, self.tol_abs).map_err(usage)?;
        EnumerationPolicy::new(args.max_word_len, args.margin, args.conjugator_cutoff)
            .map(|p| p.with_tolerance(tol))
            .map_err(usage)
    }
}

fn read_surface(path: &Path) -> Result<Surface, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    parse_surface(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

fn trig(cli: &Cli, cmd: &TrigCommand) -> Result<u8, Failure> {
    let tol = Tolerance::new(cli.tol_rel, cli.tol_abs).map_err(usage)?;
    match *cmd {
        TrigCommand::Hexagon { a, b, c_side } => {
            let opposite = hexagon_opposite_side(a, b, c_side, &tol).map_err(trig_failure)?;
            println!("opposite={opposite}");
        }
        TrigCommand::Seams { alpha, beta, gamma } => {
            let cuffs = CuffTriple::new(alpha, beta, gamma).map_err(trig_failure)?;
            let seams = seam_to_cuff(&cuffs).map_err(trig_failure)?;
            println!("c={}", seams.c);
            println!("h={}", seams.h);
            println!("x_alpha={}", seams.x_alpha);
            println!("x_beta={}", seams.x_beta);
        }
    }
    Ok(0)
}

fn run_systole(cli: &Cli, file: &Path, args: &PolicyArgs) -> Result<u8, Failure> {
    let policy = cli.policy(args)?;
    let surface = read_surface(file)?;
    let rep = fn_to_holonomy(&surface).map_err(numeric)?;
    let sys = systole(&rep, &policy).map_err(|e| match e {
        SpectraError::InvalidPolicy(_) => usage(e),
        _ => numeric(e),
    })?;
    let area = surface.area();
    println!("word={}", sys.word);
    println!("length={}", sys.length);
    println!("area={area}");
    if !surface.is_closed() {
        println!("half_area_bound=n/a");
        return Ok(0);
    }
    let below = sys.length < area / 2.0;
    println!("half_area={}", area / 2.0);
    println!("half_area_bound={}", if below { "pass" } else { "fail" });
    println!(
        "collar={}",
        if systole_collar_check(sys.length, area) {
            "pass"
        } else {
            "fail"
        }
    );
    Ok(if below { 0 } else { EXIT_FAILED })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(usage)
}

fn run_peel(
    cli: &Cli,
    file: &Path,
    report_path: Option<&Path>,
    args: &PolicyArgs,
) -> Result<u8, Failure> {
    let policy = cli.policy(args)?;
    let surface = read_surface(file)?;
    let report = match decompose(&surface, &policy) {
        Ok(r) => r,
        Err(f) => {
            if let Some(p) = report_path {
                write_file(p, &f.partial.to_json())?;
            }
            let error = anyhow!(f.error.clone());
            return Err(match classify(&f.error) {
                Outcome::Numeric => numeric(error),
                _ => Failure {
                    code: EXIT_FAILED,
                    error,
                },
            });
        }
    };
    let cert = verify_bers_bound(&report, &surface);
    if let Some(p) = report_path {
        write_file(p, &report.to_json())?;
    }
    for c in &report.curves {
        println!("curve {} {} {}", c.curve, c.word, c.length);
    }
    println!("bound={}", report.bound);
    println!("max_curve_length={}", report.max_curve_length);
    println!("max_residual={}", cert.max_residual);
    for f in &cert.failures {
        println!("failure={f}");
    }
    let passed = report.passed && cert.passed;
    println!("passed={passed}");
    Ok(if passed { 0 } else { EXIT_FAILED })
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<u8, Failure> {
    let config = ExperimentConfig {
        genus: args.genus,
        boundaries: args.boundaries,
        samples: args.samples,
        length_range: (args.len_min, args.len_max),
        boundary_range: (args.bnd_min, args.bnd_max),
        seed: args.seed,
        policy: cli.policy(&args.policy)?,
    };
    config.validate().map_err(usage)?;
    let file = fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(usage)?;
    let summary = run_experiment(&config, BufWriter::new(file)).map_err(usage)?;
    println!(
        "rows={} passed={} failed={} numeric={}",
        summary.rows, summary.passed, summary.failed, summary.numeric
    );
    Ok(if summary.numeric > 0 {
        EXIT_NUMERIC
    } else if summary.failed > 0 {
        EXIT_FAILED
    } else {
        0
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Trig(cmd) => trig(cli, cmd),
        Command::Systole { file, policy } => run_systole(cli, file, policy),
        Command::Peel {
            file,
            report,
            policy,
        } => run_peel(cli, file, report.as_deref(), policy),
        Command::Verify(args) => run_verify(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
