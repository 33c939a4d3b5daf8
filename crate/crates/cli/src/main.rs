use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pseudopowers_core::constants::ThresholdTable;
use pseudopowers_core::experiments::run_monte_carlo;
use pseudopowers_core::io::{
    emit_results, load_result, load_sequence, parse_config, save_sequence, write_bitmap,
    write_ndjson, write_sequence,
};
use pseudopowers_core::lemmasums::weight_convolution;
use pseudopowers_core::model::sample_sequence;
use pseudopowers_core::sumset::{density, s_fold_sumset};
use pseudopowers_core::Error;

/// Largest number of multiply-adds `lemmasums` will spend on the quadratic
/// convolution.
const WEIGHT_WORK_GUARD: f64 = 5.0e9;

#[derive(Parser)]
#[command(
    name = "pseudopowers",
    version,
    about = "Pseudo s-th power sequences: sampling, sumsets and scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print λ_s, 1/λ_s, the basis-order threshold and the sumset density as JSON.
    Constants {
        #[arg(long)]
        s: u32,
    },
    /// Sample A ∩ [1, N] and write it in the text sequence format.
    Sample {
        #[arg(long)]
        s: u32,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial_id: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the s-fold sumset of a saved sequence and write it as a bitmap file.
    Sumset {
        #[arg(long)]
        s: u32,
        /// Truncation bound; defaults to the sequence's N.
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long)]
        distinct: bool,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the weight convolution w_t(z) for z in [0, Z].
    Lemmasums {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long = "Z")]
        z: u64,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Run a Monte Carlo experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Run directory; the result JSON goes to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also store every sampled sequence in the run directory.
        #[arg(long, requires = "out")]
        save_sequences: bool,
    },
    /// Convert a result (file or run directory) to one JSON trial report per line.
    Export {
        #[arg(long, required = true)]
        ndjson: bool,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Config { .. } => 2,
        Error::Guard(_) => 3,
        Error::Format(_) | Error::Io(_) => 4,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn json_line<T: serde::Serialize, W: Write>(value: &T, mut w: W) -> Result<(), Error> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Constants { s } => json_line(&ThresholdTable::new(s)?, io::stdout().lock()),
        Command::Sample {
            s,
            n,
            seed,
            trial_id,
            out,
        } => {
            let sample = sample_sequence(s, n, seed, trial_id)?;
            match out {
                Some(p) => save_sequence(&sample, &p),
                None => write_sequence(&sample, output(None)?),
            }
        }
        Command::Sumset {
            s,
            n,
            distinct,
            input,
            out,
        } => {
            if s < 1 {
                return Err(Error::Domain("s must be at least 1".into()));
            }
            let sample = load_sequence(&input)?;
            let limit = n.unwrap_or(sample.limit());
            let set = s_fold_sumset(sample.elements(), s, limit, distinct);
            write_bitmap(&set, BufWriter::new(File::create(&out)?))?;
            let summary = serde_json::json!({
                "s": s,
                "N": limit,
                "distinct": distinct,
                "size": set.members.count_ones(),
                "density": if limit > 0 { Some(density(&set, 1, limit)?) } else { None },
            });
            json_line(&summary, io::stdout().lock())
        }
        Command::Lemmasums { s, t, z, emit } => {
            let work = t.saturating_sub(1) as f64 * (z as f64).powi(2) / 2.0;
            if work > WEIGHT_WORK_GUARD {
                return Err(Error::Guard(format!(
                    "weight table for t = {t}, Z = {z} needs about {work:.1e} multiply-adds (limit {WEIGHT_WORK_GUARD:e})"
                )));
            }
            let table = weight_convolution(s, t, z)?;
            let row = table.row(t);
            let mut w = output(None)?;
            match emit {
                Emit::Csv => {
                    writeln!(w, "z,weight")?;
                    for (zz, v) in row.iter().enumerate() {
                        writeln!(w, "{zz},{v}")?;
                    }
                    w.flush()?;
                    Ok(())
                }
                Emit::Json => json_line(&serde_json::json!({ "s": s, "t": t, "weights": row }), w),
            }
        }
        Command::Run {
            config,
            out,
            save_sequences,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = parse_config(&text)?;
            let result = run_monte_carlo(&cfg)?;
            match out {
                Some(dir) => {
                    let samples = if save_sequences {
                        (0..cfg.trials)
                            .map(|t| sample_sequence(cfg.s, cfg.limit, cfg.seed, t))
                            .collect::<Result<Vec<_>, _>>()?
                    } else {
                        Vec::new()
                    };
                    let manifest = emit_results(&result, &dir, &samples)?;
                    let summary = serde_json::json!({
                        "dir": dir.display().to_string(),
                        "aggregate": result.aggregate,
                        "files": manifest.files,
                    });
                    json_line(&summary, io::stdout().lock())
                }
                None => json_line(&result, output(None)?),
            }
        }
        Command::Export {
            ndjson: _,
            input,
            out,
        } => {
            let path = if input.is_dir() {
                input.join("result.json")
            } else {
                input
            };
            let result = load_result(&path)?;
            write_ndjson(&result, output(out.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
