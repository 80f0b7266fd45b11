use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[cfg(test)]
use clap::CommandFactory;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pointlev::boundary::full_loop;
use pointlev::golden::{check_table, TableCheck};
use pointlev::levinson::{sweep, LevinsonSettings, DEFAULT_SAMPLES, DEFAULT_TOLERANCE};
use pointlev::waveop::battery::{reference_cases, run_battery, KERNEL_MODELS};
use pointlev::waveop::Resolution;
use pointlev::{Direction, ExtendedReal, Model, ModelKind};

const DEFAULT_SEED: u64 = 20;

#[derive(Parser)]
#[command(
    name = "pointlev",
    version,
    about = "Levinson's theorem checks for point interactions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the per-side winding table of a model and compare with the reference.
    Table {
        #[arg(value_parser = parse_kind)]
        model: ModelKind,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Check that the total winding equals minus the number of bound states.
    Levinson(LevinsonArgs),
    /// Compare the kernel and factorized forms of the wave operators.
    VerifyWaveop(WaveopArgs),
    /// Export samples of the boundary loop as CSV.
    Curve {
        #[arg(long, value_parser = parse_kind)]
        model: ModelKind,
        #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
        param: ExtendedReal,
        /// Samples per side, corners included.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Use the outgoing wave operator instead of the incoming one.
        #[arg(long)]
        plus: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LevinsonArgs {
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Comma separated parameters; `inf` for the free model.
    #[arg(long, value_parser = parse_param, value_delimiter = ',', allow_hyphen_values = true,
          required_unless_present = "range", conflicts_with = "range")]
    params: Vec<ExtendedReal>,
    /// `lo:hi:n`, n equispaced parameters.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<RangeSpec>,
    /// Initial samples per side.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct WaveopArgs {
    /// Restrict the random battery to one model.
    #[arg(long, value_parser = parse_kind)]
    model: Option<ModelKind>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random parameters per model.
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long)]
    enable_delta2_kernel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Verify,
}

impl From<pointlev::Error> for Failure {
    fn from(e: pointlev::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|_| {
        let names: Vec<&str> = ModelKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown model '{s}', expected one of {}", names.join(", "))
    })
}

fn parse_param(s: &str) -> Result<ExtendedReal, String> {
    let p = s.parse::<ExtendedReal>().map_err(|e| e.to_string())?;
    if p == ExtendedReal::MinusInfinity {
        return Err("-inf is not a model parameter".into());
    }
    Ok(p)
}

#[derive(Clone)]
struct RangeSpec(Vec<ExtendedReal>);

fn parse_range(s: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got '{s}'"));
    };
    let num = |x: &str| -> Result<f64, String> {
        let v: f64 = x
            .trim()
            .parse()
            .map_err(|_| format!("'{x}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("range bound '{x}' must be finite"))
        }
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("'{n}' is not a count"))?;
    if n == 0 {
        return Err("range must contain at least one value".into());
    }
    if n == 1 {
        return Ok(RangeSpec(vec![ExtendedReal::Finite(lo)]));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok(RangeSpec(
        (0..n)
            .map(|j| ExtendedReal::Finite(if j == n - 1 { hi } else { lo + step * j as f64 }))
            .collect(),
    ))
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn io_failure(path: Option<&Path>, e: io::Error) -> Failure {
    let target = path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    Failure::Usage(format!("writing {target}: {e}"))
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn fmt_w(x: f64) -> String {
    // No "-0.000000" for round-off below the printed precision.
    format!("{:+.6}", if x.abs() < 5e-7 { 0.0 } else { x })
}

/// One line per region; the numbers shown are those of the region's first parameter.
fn print_table(check: &TableCheck) {
    println!("model {}", check.model);
    println!(
        "{:<14} {:<18} {:>3} {:>3} {:>3} {:>3}  {:>10} {:>10} {:>10} {:>10}  {:>10}  result",
        "region", "params", "G1", "G2", "G3", "G4", "w1", "w2", "w3", "w4", "w"
    );
    let mut rows = check.rows.iter().peekable();
    while let Some(first) = rows.next() {
        let mut params = vec![first.param.to_string()];
        let mut pass = first.pass;
        while let Some(next) = rows.next_if(|r| r.region == first.region) {
            params.push(next.param.to_string());
            pass &= next.pass;
        }
        let g = first.gamma.map(|l| l.to_string());
        let w = first.w.map(fmt_w);
        println!(
            "{:<14} {:<18} {:>3} {:>3} {:>3} {:>3}  {:>10} {:>10} {:>10} {:>10}  {:>10}  {}",
            first.region,
            params.join(","),
            g[0],
            g[1],
            g[2],
            g[3],
            w[0],
            w[1],
            w[2],
            w[3],
            fmt_w(first.w_total),
            if pass { "ok" } else { "MISMATCH" }
        );
    }
    println!("{}", if check.pass { "PASS" } else { "FAIL" });
}

fn cmd_table(kind: ModelKind, samples: usize, format: TableFormat) -> Outcome {
    if samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let check = check_table(kind, samples)?;
    match format {
        TableFormat::Text => print_table(&check),
        TableFormat::Json => {
            let mut out = open_out(None)?;
            serde_json::to_writer_pretty(&mut out, &check)
                .map_err(io::Error::from)
                .and_then(|_| writeln!(out))
                .map_err(|e| io_failure(None, e))?;
        }
    }
    if check.pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn cmd_levinson(args: LevinsonArgs) -> Outcome {
    let params = args
        .range
        .clone()
        .map_or_else(|| args.params.clone(), |r| r.0);
    for p in &params {
        Model::new(args.model, *p)?;
    }
    let settings = LevinsonSettings {
        tolerance: args.tol,
        samples_per_side: args.samples,
    };
    settings.validate()?;
    let report = with_jobs(args.jobs, || sweep(args.model, &params, &settings))??;

    let path = args.out.as_deref();
    let out = open_out(path)?;
    match args.format {
        Format::Json => report.write_json(out),
        Format::Csv => report.write_csv(out),
    }
    .map_err(|e| io_failure(path, e))?;
    eprintln!(
        "{}: {} passed, {} failed",
        args.model, report.passes, report.failures
    );
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn cmd_verify_waveop(args: WaveopArgs) -> Outcome {
    if args.enable_delta2_kernel {
        return Err(Failure::Usage(
            "the delta2 kernel check is not available in this build".into(),
        ));
    }
    if args.model == Some(ModelKind::Delta2) {
        return Err(Failure::Usage(
            "delta2 has no kernel form here; it is covered by the table and levinson commands"
                .into(),
        ));
    }
    if args.count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let res = Resolution::default();
    let models: Vec<ModelKind> = match args.model {
        Some(k) => vec![k],
        None => KERNEL_MODELS.to_vec(),
    };
    let (battery, reference) = with_jobs(args.jobs, || -> pointlev::Result<_> {
        Ok((
            run_battery(&models, args.count, args.seed, &res)?,
            reference_cases(&res)?,
        ))
    })??;
    let pass = battery.all_pass() && reference.iter().all(|c| c.pass);
    let doc = json!({
        "seed": args.seed,
        "models": models,
        "battery": battery,
        "reference": reference,
        "pass": pass,
    });
    let path = args.out.as_deref();
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, &doc)
        .map_err(io::Error::from)
        .and_then(|_| writeln!(out))
        .and_then(|_| out.flush())
        .map_err(|e| io_failure(path, e))?;
    eprintln!(
        "seed {}: {} of {} battery cases passed, max rel L2 {:.2e}, max norm deviation {:.2e}; reference cases {}",
        args.seed,
        battery.passes,
        battery.cases.len(),
        battery.max_rel_l2_error,
        battery.max_norm_deviation,
        if reference.iter().all(|c| c.pass) { "passed" } else { "failed" }
    );
    if pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn cmd_curve(
    kind: ModelKind,
    param: ExtendedReal,
    samples: usize,
    plus: bool,
    out: Option<PathBuf>,
) -> Outcome {
    let model = Model::new(kind, param)?;
    let direction = if plus {
        Direction::Plus
    } else {
        Direction::Minus
    };
    let curve = full_loop(&model, samples, direction)?;
    let path = out.as_deref();
    curve
        .write_csv(open_out(path)?)
        .map_err(|e| io_failure(path, e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Table {
            model,
            samples,
            format,
        } => cmd_table(model, samples, format),
        Command::Levinson(args) => cmd_levinson(args),
        Command::VerifyWaveop(args) => cmd_verify_waveop(args),
        Command::Curve {
            model,
            param,
            samples,
            plus,
            out,
        } => cmd_curve(model, param, samples, plus, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
