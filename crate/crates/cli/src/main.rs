use std::fmt::Display;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxstable::samplers::{sample_idt_path, sample_minstable_batch, sample_pickands_batch, streams};
use maxstable::verify::{self, McConfig};
use maxstable::{Error, ModelSpec, WeightVector};

const EXIT_PARSE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Evaluate, sample and check exchangeable min-stable exponential models.
#[derive(Debug, Parser)]
#[command(name = "maxstable", version)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON model description; `-` reads standard input.
    #[arg(long, global = true, value_name = "FILE")]
    spec: Option<PathBuf>,

    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Truncation tolerance for the samplers.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Print the description in canonical form and exit.
    #[arg(long, global = true)]
    dump_spec: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print ℓ(t).
    Eval {
        /// Comma-separated non-negative weights.
        #[arg(long = "t", value_name = "LIST")]
        t: String,
    },
    /// CSV of n min-stable exponential draws, columns y1..yd.
    Sample {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// CSV of n Pickands simplex draws, columns x1..xd.
    Pickands {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// CSV of survival, Pickands and margin checks; exit 5 if any fails.
    Verify {
        #[arg(long = "t", value_name = "LIST")]
        t: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// A check passes when |z| is at most this.
        #[arg(long, default_value_t = verify::DEFAULT_Z_THRESHOLD)]
        z_threshold: f64,
    },
    /// CSV of one LePage path on a uniform grid over [0, horizon].
    Path {
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(Error),
    Io(io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_PARSE,
            Failure::Model(e) => match e {
                Error::Parse(_) | Error::InvalidParameter { .. } | Error::Domain(_) => EXIT_PARSE,
                Error::NumericFailure { .. } => EXIT_NUMERIC,
                Error::Resource { .. } | Error::Capacity { .. } => EXIT_RESOURCE,
            },
            Failure::Verification => EXIT_VERIFY,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Model(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
                Failure::Verification => eprintln!("error: verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let common = &cli.common;
    let path = common
        .spec
        .as_ref()
        .ok_or_else(|| Failure::Usage("missing --spec FILE".into()))?;
    let spec = load_spec(path)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if common.dump_spec {
        writeln!(out, "{}", spec.to_json())?;
        out.flush()?;
        return Ok(());
    }
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| Failure::Usage("no subcommand given (eval, sample, pickands, verify, path)".into()))?;
    if common.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    match command {
        Command::Eval { t } => {
            let t = parse_list(t)?;
            writeln!(out, "{:.12}", spec.stdf(&t)?)?;
        }
        Command::Sample { d, n } => {
            check_size(*d, *n)?;
            let model = spec.to_canonical()?;
            let rows = sample_minstable_batch(&model, *d, *n, common.seed, common.tol, common.workers)?;
            write_header(&mut out, "y", *d)?;
            for row in &rows {
                write_row(&mut out, row)?;
            }
        }
        Command::Pickands { d, n } => {
            check_size(*d, *n)?;
            let model = spec.to_canonical()?;
            let rows = sample_pickands_batch(&model, *d, *n, common.seed, common.workers)?;
            write_header(&mut out, "x", *d)?;
            for row in &rows {
                write_row(&mut out, &row.coords)?;
            }
        }
        Command::Verify { t, n, z_threshold } => {
            let model = spec.to_canonical()?;
            let t = WeightVector::from_slice(&parse_list(t)?)?;
            let cfg = McConfig {
                n: *n,
                seed: common.seed,
                workers: common.workers,
                tol: common.tol,
                z_threshold: *z_threshold,
                ..McConfig::default()
            };
            let reports = vec![
                verify::mc_survival_check(&model, &t, &cfg)?,
                verify::mc_pickands_check(&model, &t, &cfg)?,
                verify::mc_margin_check(&model, &cfg)?,
            ];
            verify::write_csv(&mut out, &reports)?;
            out.flush()?;
            if reports.iter().any(|r| !r.passed) {
                return Err(Failure::Verification);
            }
        }
        Command::Path { horizon, grid } => {
            if *grid < 2 {
                return Err(Failure::Usage("--grid needs at least 2 points".into()));
            }
            if !(horizon.is_finite() && *horizon > 0.0) {
                return Err(Failure::Usage("--horizon must be positive and finite".into()));
            }
            let triplet = spec.to_triplet()?;
            let mut rng = streams::block_rng(common.seed, 0);
            let path = sample_idt_path(&triplet, *horizon, &mut rng, common.tol)?;
            writeln!(out, "t,h")?;
            for i in 0..*grid {
                let t = if i + 1 == *grid {
                    *horizon
                } else {
                    *horizon * i as f64 / (*grid - 1) as f64
                };
                writeln!(out, "{},{}", t, path.eval(t)?)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn load_spec(path: &PathBuf) -> Result<ModelSpec, Failure> {
    let text = if path.as_os_str() == "-" {
        io::read_to_string(io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    Ok(ModelSpec::parse(&text)?)
}

fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("--t: `{s}` is not a number")))
        })
        .collect()
}

fn check_size(d: usize, n: usize) -> Result<(), Failure> {
    if d == 0 || n == 0 {
        return Err(Failure::Usage("--d and --n must be at least 1".into()));
    }
    Ok(())
}

fn write_header<W: Write>(out: &mut W, prefix: &str, d: usize) -> io::Result<()> {
    let names: Vec<String> = (1..=d).map(|k| format!("{prefix}{k}")).collect();
    writeln!(out, "{}", names.join(","))
}

fn write_row<W: Write, T: Display>(out: &mut W, row: &[T]) -> io::Result<()> {
    let mut first = true;
    for x in row {
        if !first {
            out.write_all(b",")?;
        }
        first = false;
        write!(out, "{x}")?;
    }
    out.write_all(b"\n")
}
