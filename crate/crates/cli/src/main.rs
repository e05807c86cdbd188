mod pgm;
mod samples;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use robmean::experiments::{
    grid_effect_sweep, linear_grid, linearity_benchmark, outlier_influence_sweep, write_csv,
    GridSweepConfig, OutlierSweepConfig,
};
use robmean::{
    brute_force_robust_mean, exact_robust_mean, format_sig12, smooth_image, Cutoff, SampleSet,
    SmoothingConfig,
};

use crate::pgm::PgmImage;

#[derive(Parser, Debug)]
#[command(
    name = "robmean",
    version,
    about = "Exact truncated-quadratic robust means"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Robust mean of a sample file ('-' reads standard input).
    Mean {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        cutoff: f64,
        /// Rows carry a value and a weight.
        #[arg(long)]
        weighted: bool,
        /// Cross-check against the exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Edge-preserving smoothing of a PGM image.
    Smooth {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 1.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0.1)]
        cutoff: f64,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Emit an experiment table as CSV.
    Experiment {
        name: Experiment,
        #[arg(long, default_value = "-")]
        out: String,
        /// Cutoff for outlier-influence.
        #[arg(long, default_value_t = 1.0)]
        cutoff: f64,
        /// First outlier position.
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        /// Last outlier position.
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        /// Outlier position step.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Half-spread of the symmetric pair for grid-effect.
        #[arg(long, default_value_t = 0.6)]
        half_spread: f64,
        /// Offset step between channel centers for grid-effect.
        #[arg(long, default_value_t = 0.05)]
        offset_step: f64,
        /// Sample counts for bench.
        #[arg(long, value_delimiter = ',', default_value = "100000,200000,400000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 9)]
        repetitions: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Experiment {
    OutlierInfluence,
    GridEffect,
    Bench,
}

#[derive(Debug)]
enum Failure {
    /// Unreadable or malformed input.
    Parse(String),
    /// Invalid values, flags or configuration.
    Invalid(String),
    /// The exhaustive search disagrees with the sweep.
    Mismatch(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<robmean::Error> for Failure {
    fn from(e: robmean::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

pub(crate) fn read_input(path: &str) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == "-" {
        io::stdin().read_to_end(&mut buf)?;
    } else {
        File::open(path)?.read_to_end(&mut buf)?;
    }
    Ok(buf)
}

fn open_output(path: &str) -> Result<Box<dyn Write>, Failure> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let f = File::create(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

fn write_failed(e: io::Error) -> Failure {
    Failure::Parse(format!("write failed: {e}"))
}

fn cmd_mean(input: &str, cutoff: f64, weighted: bool, oracle: bool) -> Result<(), Failure> {
    let cutoff = Cutoff::new(cutoff)?;
    let bytes = read_input(input).map_err(|e| Failure::Parse(format!("{input}: {e}")))?;
    let text =
        String::from_utf8(bytes).map_err(|_| Failure::Parse(format!("{input}: not UTF-8 text")))?;
    let samples: SampleSet = samples::parse_samples(&text, weighted)
        .map_err(|e| Failure::Parse(format!("{input}: {e}")))?
        .into_sample_set()?;

    let result = exact_robust_mean(&samples, cutoff);
    println!(
        "mean={} error={} window={},{}",
        format_sig12(result.mean),
        format_sig12(result.error),
        result.window.0,
        result.window.1
    );

    if oracle {
        let reference = brute_force_robust_mean(&samples, cutoff)?;
        let scale = (samples.total_weight() * cutoff.squared()).max(1.0);
        if (reference.error - result.error).abs() <= 1e-9 * scale {
            println!("oracle=agree");
        } else {
            println!("oracle=mismatch");
            return Err(Failure::Mismatch(format!(
                "oracle mismatch: sweep error {} vs exhaustive error {} (mean {})",
                format_sig12(result.error),
                format_sig12(reference.error),
                format_sig12(reference.mean)
            )));
        }
    }
    Ok(())
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    if threads == Some(0) {
        return Err(Failure::Invalid("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Invalid(format!("thread pool: {e}")))
}

fn cmd_smooth(
    input: &str,
    output: &str,
    radius: usize,
    sigma: f64,
    cutoff: f64,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let config = SmoothingConfig::new(radius, sigma, Cutoff::new(cutoff)?)?;
    let pool = thread_pool(threads)?;
    let src = PgmImage::read(input).map_err(|e| Failure::Parse(format!("{input}: {e}")))?;
    let smoothed = pool.install(|| smooth_image(&src.to_gray(), &config));
    let out = open_output(output)?;
    src.with_pixels(&smoothed)
        .write_to(out)
        .map_err(write_failed)
}

fn cmd_experiment(name: Experiment, out: &str, args: &ExperimentArgs) -> Result<(), Failure> {
    let rows = match name {
        Experiment::OutlierInfluence => {
            let base = OutlierSweepConfig::default_sweep();
            let config = OutlierSweepConfig::new(
                base.inliers,
                linear_grid(args.from, args.to, args.step)?,
                Cutoff::new(args.cutoff)?,
                args.cutoff,
            )?;
            let rows = outlier_influence_sweep(&config)?;
            emit(&rows, out)?
        }
        Experiment::GridEffect => {
            let offsets: Vec<f64> = linear_grid(0.0, 1.0, args.offset_step)?
                .into_iter()
                .filter(|&o| o < 1.0 - 1e-9)
                .collect();
            let rows = grid_effect_sweep(&GridSweepConfig::new(args.half_spread, offsets)?)?;
            emit(&rows, out)?
        }
        Experiment::Bench => {
            let rows = linearity_benchmark(&args.sizes, args.repetitions, args.seed)?;
            emit(&rows, out)?
        }
    };
    eprintln!("rows={rows}");
    Ok(())
}

struct ExperimentArgs {
    cutoff: f64,
    from: f64,
    to: f64,
    step: f64,
    half_spread: f64,
    offset_step: f64,
    sizes: Vec<usize>,
    repetitions: usize,
    seed: u64,
}

fn emit<R: robmean::experiments::CsvRow>(rows: &[R], out: &str) -> Result<usize, Failure> {
    write_csv(rows, open_output(out)?).map_err(write_failed)?;
    Ok(rows.len())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Mean {
            input,
            cutoff,
            weighted,
            oracle,
        } => cmd_mean(&input, cutoff, weighted, oracle),
        Command::Smooth {
            input,
            output,
            radius,
            sigma,
            cutoff,
            threads,
        } => cmd_smooth(&input, &output, radius, sigma, cutoff, threads),
        Command::Experiment {
            name,
            out,
            cutoff,
            from,
            to,
            step,
            half_spread,
            offset_step,
            sizes,
            repetitions,
            seed,
        } => cmd_experiment(
            name,
            &out,
            &ExperimentArgs {
                cutoff,
                from,
                to,
                step,
                half_spread,
                offset_step,
                sizes,
                repetitions,
                seed,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("robmean: {first}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("robmean: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
