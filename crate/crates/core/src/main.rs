use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phoneme_boost::dataset::{save_csv, synth_phoneme_like};
use phoneme_boost::harness::{
    format_summary, format_table, run_experiment, run_repeated, write_traces, ExperimentConfig, TableFormat,
};
use phoneme_boost::mfcc::{extract_39, middle_window_stack, MfccConfig, StackMode, N_FEATURES};
use phoneme_boost::wav::read_wav;
use phoneme_boost::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "phoneme-boost", version, about = "Boosted SVM and C4.5 phoneme classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment described by a JSON config and print the error table.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output format; overrides the config's `output.format`.
        #[arg(long)]
        format: Option<TableFormat>,
        /// Write the table here instead of the config's `output.path` or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-round boosting traces as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Repeat with seeds shifted by 0..N and report mean and std tables.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long)]
        svm_gamma: Option<f64>,
        #[arg(long)]
        svm_cost: Option<f64>,
        #[arg(long)]
        svm_tol: Option<f64>,
    },
    /// Extract 39-dimensional MFCC frames from a 16-bit mono WAV file.
    Extract {
        #[arg(long)]
        wav: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Emit a single row averaging the k middle frames instead of every frame.
        #[arg(long)]
        middle: Option<usize>,
        /// With --middle, concatenate the frames instead of averaging them.
        #[arg(long, requires = "middle")]
        concatenate: bool,
    },
    /// Generate a Gaussian-mixture dataset as CSV.
    Synth {
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        per_class: usize,
        #[arg(long)]
        overlap: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 39)]
        dimension: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the seven-group synthetic experiment config as JSON.
    SuiteConfig {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            format,
            out,
            trace,
            repeat,
            svm_gamma,
            svm_cost,
            svm_tol,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(g) = svm_gamma {
                cfg.svm.gamma = g;
            }
            if let Some(c) = svm_cost {
                cfg.svm.cost = c;
            }
            if let Some(t) = svm_tol {
                cfg.svm.tol = t;
            }
            cfg.validate()?;
            let format = format.unwrap_or(cfg.output.format);
            let out = out.or_else(|| cfg.output.path.clone());
            let (text, notes, traces) = if repeat == 1 {
                let run = run_experiment(&cfg)?;
                (format_table(&run.table, format), run.notes, run.traces)
            } else {
                let summary = run_repeated(&cfg, repeat)?;
                let notes = summary.runs.iter().flat_map(|r| r.notes.iter().cloned()).collect();
                let traces = summary.runs.iter().flat_map(|r| r.traces.iter().cloned()).collect();
                (format_summary(&summary, format), notes, traces)
            };
            for note in &notes {
                eprintln!("note: {note}");
            }
            if let Some(path) = trace {
                let file = create(&path)?;
                let mut w = BufWriter::new(file);
                write_traces(&traces, &mut w)
                    .and_then(|_| w.flush())
                    .map_err(|e| Error::io(&path, e))?;
            }
            emit(&text, out.as_deref())
        }
        Command::Extract {
            wav,
            out,
            middle,
            concatenate,
        } => {
            let audio = read_wav(&wav)?;
            let frames = extract_39(&audio, &MfccConfig::default())?;
            let rows: Vec<Vec<f64>> = match middle {
                None => frames.rows().to_vec(),
                Some(k) => {
                    let mode = if concatenate {
                        StackMode::Concatenate
                    } else {
                        StackMode::Average
                    };
                    vec![middle_window_stack(&frames, k, mode)?]
                }
            };
            let width = rows.first().map_or(N_FEATURES, Vec::len);
            let mut w = csv::Writer::from_writer(create(&out)?);
            let header: Vec<String> = (0..width).map(|i| format!("f{i}")).collect();
            w.write_record(&header).map_err(csv_error)?;
            for row in &rows {
                w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_error)?;
            }
            w.flush().map_err(|e| Error::io(&out, e))
        }
        Command::Synth {
            classes,
            per_class,
            overlap,
            seed,
            dimension,
            out,
        } => {
            let d = synth_phoneme_like(classes, per_class, dimension, overlap, seed)
                .map_err(|e| Error::Config(e.to_string()))?;
            save_csv(&d, &out)
        }
        Command::SuiteConfig { seed } => emit(&(ExperimentConfig::phoneme_suite(seed).to_json() + "\n"), None),
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}
