use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fnilpotent::lochom::{IsolatedCheck, ASSUMPTIONS};
use fnilpotent::snc::{classify_surface, SncConfig};
use fnilpotent::sweep::{
    export, residue_breakdown, sweep_hypersurface, Aggregate, ExportFormat, IntegerModel,
    PrimeStatus, SkipPolicy, SweepOptions, CAVEAT,
};

#[derive(Parser)]
#[command(
    name = "fnil",
    version,
    about = "Frobenius nilpotence of singularities over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the reduction of a model at one prime.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        prime: u64,
        /// Extension degrees searched for singular points away from the origin; 0 disables.
        #[arg(long, default_value_t = 1)]
        isolated_check_depth: u32,
    },
    /// Print the degree-zero basis and the matrix of Frobenius on it.
    HasseWitt {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        prime: u64,
    },
    /// Classify a surface singularity from its exceptional configuration.
    Snc {
        /// SNC configuration JSON file, or `-` for standard input.
        input: PathBuf,
    },
    /// Classify the reductions of a model over a range of primes.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Skip exactly these primes (plus coefficient divisors) instead of the default small-prime bound.
        #[arg(long, num_args = 0.., value_delimiter = ',')]
        skip: Option<Vec<u64>>,
        /// Exclude primes at or below this from the aggregate verdict.
        #[arg(long)]
        threshold: Option<u64>,
        /// Residue breakdown modulus.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Export format; without --output the export goes to standard output.
        #[arg(long)]
        format: Option<String>,
        /// Write PREFIX.csv and PREFIX.json (or only --format).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        isolated_check_depth: u32,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Record per-prime runtimes (makes exports non-reproducible).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Model JSON file, or `-` for standard input.
    input: PathBuf,
    /// Override the model weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn read_input(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

fn load_model(args: &ModelArgs) -> Result<IntegerModel, InputError> {
    let model = IntegerModel::from_json(&read_input(&args.input)?)?;
    match &args.weights {
        None => Ok(model),
        Some(w) => Ok(IntegerModel::new(
            model.variables().to_vec(),
            w.clone(),
            &model.poly().to_terms(),
        )?),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn cmd_classify(model: &ModelArgs, prime: u64, depth: u32) -> Outcome {
    let h = load_model(model)?.reduce(prime)?;
    let v = h.classify_graded()?;
    let isolated = if depth == 0 {
        Value::Null
    } else {
        let check = h
            .isolated_check(depth)
            .unwrap_or(IsolatedCheck::Inconclusive { searched_degree: 0 });
        serde_json::to_value(check)?
    };
    print_json(&json!({
        "verdict": v.verdict,
        "reason": v.reason,
        "prime": prime,
        "degree": v.degree,
        "a_invariant": v.a_invariant,
        "basis_dim": v.basis_dim,
        "ss_dim": v.ss_dim,
        "nil_dim": v.nil_dim,
        "isolated": isolated,
        "assumptions": ASSUMPTIONS,
    }));
    Ok(v.verdict.is_nilpotent())
}

fn cmd_hasse_witt(model: &ModelArgs, prime: u64) -> Result<(), InputError> {
    let h = load_model(model)?.reduce(prime)?;
    let op = h.frobenius_on_degree_zero()?;
    let m = op.matrix();
    let rows: Vec<Vec<u32>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.raw()).collect())
        .collect();
    let v = json!({ "prime": prime, "basis": h.degree_zero_basis(), "matrix": rows });
    println!("{v}");
    Ok(())
}

fn cmd_snc(input: &Path) -> Outcome {
    let z = SncConfig::from_json(&read_input(input)?)?;
    let v = classify_surface(&z)?;
    print_json(&serde_json::to_value(&v)?);
    Ok(v.verdict.is_nilpotent())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    model: &ModelArgs,
    from: u64,
    to: u64,
    skip: Option<Vec<u64>>,
    threshold: Option<u64>,
    modulus: Option<u64>,
    format: Option<String>,
    output: Option<PathBuf>,
    options: (u32, usize, bool),
) -> Outcome {
    let model = load_model(model)?;
    let format: Option<ExportFormat> = format.map(|f| f.parse()).transpose()?;
    let skip = skip
        .map(SkipPolicy::explicit)
        .unwrap_or_else(|| SkipPolicy::default_for(&model));
    let (isolated_depth, threads, timings) = options;
    let opts = SweepOptions {
        skip,
        threshold,
        isolated_depth,
        threads,
        timings,
    };
    let report = sweep_hypersurface(&model, from, to, &opts)?;
    if report.verdicts.is_empty() {
        return Err(InputError(format!("no primes in [{from}, {to}]")));
    }
    let breakdown = modulus.map(|m| residue_breakdown(&report, m)).transpose()?;

    let mut written = Vec::new();
    match (&output, format) {
        (Some(prefix), formats) => {
            let all = [ExportFormat::Csv, ExportFormat::Json];
            for f in formats.map(|f| vec![f]).unwrap_or(all.to_vec()) {
                let ext = if f == ExportFormat::Csv {
                    "csv"
                } else {
                    "json"
                };
                let mut path = prefix.clone().into_os_string();
                path.push(format!(".{ext}"));
                let path = PathBuf::from(path);
                std::fs::write(&path, export(&report, f)?)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                written.push(path.display().to_string());
            }
        }
        (None, Some(f)) => std::io::stdout().write_all(&export(&report, f)?)?,
        (None, None) => {}
    }

    let count =
        |s: fn(&PrimeStatus) -> bool| report.verdicts.iter().filter(|v| s(&v.status)).count();
    let breakdown: Option<serde_json::Map<String, Value>> = breakdown.map(|t| {
        t.into_iter()
            .map(|(c, n)| {
                (
                    c.to_string(),
                    json!({ "nilpotent": n.nilpotent, "non_nilpotent": n.non_nilpotent }),
                )
            })
            .collect()
    });
    let summary = json!({
        "from": from,
        "to": to,
        "primes": report.verdicts.len(),
        "nilpotent": count(|s| *s == PrimeStatus::Nilpotent),
        "non_nilpotent": count(|s| *s == PrimeStatus::NonNilpotent),
        "skipped": count(PrimeStatus::is_skipped),
        "threshold": report.threshold,
        "aggregate": report.aggregate,
        "caveat": CAVEAT,
        "breakdown": breakdown,
        "files": written,
    });
    let text = serde_json::to_string_pretty(&summary)?;
    if output.is_none() && format.is_some() {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
    Ok(matches!(
        report.aggregate.map(|a| a.verdict),
        Some(Aggregate::EmpiricallyFNilpotentType)
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Classify {
            model,
            prime,
            isolated_check_depth,
        } => cmd_classify(&model, prime, isolated_check_depth),
        Command::HasseWitt { model, prime } => cmd_hasse_witt(&model, prime).map(|()| true),
        Command::Snc { input } => cmd_snc(&input),
        Command::Sweep {
            model,
            from,
            to,
            skip,
            threshold,
            modulus,
            format,
            output,
            isolated_check_depth,
            threads,
            timings,
        } => cmd_sweep(
            &model,
            from,
            to,
            skip,
            threshold,
            modulus,
            format,
            output,
            (isolated_check_depth, threads, timings),
        ),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
