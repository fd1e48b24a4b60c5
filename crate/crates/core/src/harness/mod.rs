//! Experiment runner: every configured method is trained on a shared 70/30
//! split of each dataset and scored by held-out error, giving one table row
//! per dataset plus an average row.

mod config;
mod table;

use std::io::Write;

use rayon::prelude::*;

pub use config::{
    DatasetEntry, DatasetSource, ExperimentConfig, Method, OutputConfig, SvmConfig, TreeConfig, TreeProfile,
    PHONEME_GROUPS,
};
pub use table::{format_table, is_failed, parse_json_table, ResultRow, ResultTable, TableFormat, FAIL_SENTINEL};

use crate::adaboost::{boost_m1, TraceRow};
use crate::c45::build_tree;
use crate::classifier::{Classifier, WeakLearner};
use crate::dataset::{load_csv, split_indices, synth_from_spec, Dataset, Standardizer};
use crate::error::{Error, Result};
use crate::svm::SvmLearner;

/// Percentage of `test` samples that `model` misclassifies.
pub fn generalization_error<C: Classifier + ?Sized>(model: &C, test: &Dataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::invalid("empty test set"));
    }
    let wrong = model
        .predict_dataset(test)?
        .into_iter()
        .zip(test.labels())
        .filter(|(p, y)| p != y)
        .count();
    Ok(100.0 * wrong as f64 / test.len() as f64)
}

/// Boosting trace of one (dataset, method) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTrace {
    pub dataset: String,
    pub method: String,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub table: ResultTable,
    pub traces: Vec<CellTrace>,
    /// Failures and solver warnings, in config order.
    pub notes: Vec<String>,
}

pub fn load_dataset(entry: &DatasetEntry) -> Result<Dataset> {
    let d = match &entry.source {
        DatasetSource::Csv { path, has_header } => load_csv(path, *has_header),
        DatasetSource::Synthetic(spec) => synth_from_spec(spec),
    }
    .map_err(|e| Error::Dataset {
        name: entry.name.clone(),
        source: Box::new(e),
    })?;
    Ok(d.with_name(entry.name.clone()))
}

struct CellResult {
    error: f64,
    trace: Option<Vec<TraceRow>>,
    notes: Vec<String>,
}

fn run_method(cfg: &ExperimentConfig, method: Method, train: &Dataset, test: &Dataset) -> Result<CellResult> {
    let uniform = vec![1.0; train.len()];
    let mut notes = Vec::new();
    let (error, trace) = match method {
        Method::Svm => {
            let learner = cfg.svm.learner()?;
            let model = learner.train(train, &uniform, cfg.svm.seed)?;
            if model.unconverged_pairs() > 0 {
                notes.push(format!(
                    "{} pairwise SVMs missed the KKT tolerance",
                    model.unconverged_pairs()
                ));
            }
            (generalization_error(&model, test)?, None)
        }
        Method::C45(profile) => {
            let tree = build_tree(train, &uniform, cfg.tree.params(profile))?;
            (generalization_error(&tree, test)?, None)
        }
        Method::AdaboostSvm => {
            let learner: SvmLearner = cfg.svm.learner()?;
            let e = boost_m1(train, &learner, &cfg.boost)?;
            notes.extend(e.diagnostics.iter().cloned());
            let unconverged: usize = e.rounds.iter().map(|r| r.model.unconverged_pairs()).sum();
            if unconverged > 0 {
                notes.push(format!(
                    "{unconverged} pairwise SVMs across rounds missed the KKT tolerance"
                ));
            }
            (generalization_error(&e, test)?, Some(e.trace))
        }
        Method::AdaboostC45(profile) => {
            let learner = crate::c45::C45Learner::new(cfg.tree.params(profile).clone());
            let e = boost_m1(train, &learner, &cfg.boost)?;
            notes.extend(e.diagnostics.iter().cloned());
            (generalization_error(&e, test)?, Some(e.trace))
        }
    };
    Ok(CellResult { error, trace, notes })
}

struct RowResult {
    row: ResultRow,
    traces: Vec<CellTrace>,
    notes: Vec<String>,
}

fn run_dataset(cfg: &ExperimentConfig, entry: &DatasetEntry) -> Result<RowResult> {
    let data = load_dataset(entry)?;
    let wrap = |e: Error| Error::Dataset {
        name: entry.name.clone(),
        source: Box::new(e),
    };
    let split = split_indices(&data, &cfg.split).map_err(wrap)?;
    let mut train = data.subset(&split.train).map_err(wrap)?;
    let mut test = data.subset(&split.test).map_err(wrap)?;
    if cfg.standardize {
        let z = Standardizer::fit(&train);
        train = z.apply(&train).map_err(wrap)?;
        test = z.apply(&test).map_err(wrap)?;
    }
    let mut errors = Vec::with_capacity(cfg.methods.len());
    let mut traces = Vec::new();
    let mut notes = Vec::new();
    for &method in &cfg.methods {
        match run_method(cfg, method, &train, &test) {
            Ok(cell) => {
                errors.push(cell.error);
                if let Some(rows) = cell.trace {
                    traces.push(CellTrace {
                        dataset: entry.name.clone(),
                        method: method.to_string(),
                        rows,
                    });
                }
                notes.extend(
                    cell.notes
                        .into_iter()
                        .map(|n| format!("{} / {method}: {n}", entry.name)),
                );
            }
            Err(e) => {
                errors.push(FAIL_SENTINEL);
                notes.push(format!("{} / {method}: FAILED: {e}", entry.name));
            }
        }
    }
    Ok(RowResult {
        row: ResultRow {
            dataset: entry.name.clone(),
            errors,
        },
        traces,
        notes,
    })
}

/// Runs every method on every dataset. Dataset rows run concurrently; the
/// output is assembled in config order and depends only on the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let rows = cfg
        .datasets
        .par_iter()
        .map(|entry| run_dataset(cfg, entry))
        .collect::<Result<Vec<_>>>()?;
    let mut table_rows = Vec::with_capacity(rows.len());
    let mut traces = Vec::new();
    let mut notes = Vec::new();
    for r in rows {
        table_rows.push(r.row);
        traces.extend(r.traces);
        notes.extend(r.notes);
    }
    let methods = cfg.methods.iter().map(ToString::to_string).collect();
    Ok(ExperimentOutput {
        table: ResultTable::new(methods, table_rows)?,
        traces,
        notes,
    })
}

/// Mean and standard deviation tables over repeated runs with shifted seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatSummary {
    pub repeats: usize,
    pub mean: ResultTable,
    pub std: ResultTable,
    pub runs: Vec<ExperimentOutput>,
}

pub fn run_repeated(cfg: &ExperimentConfig, repeats: usize) -> Result<RepeatSummary> {
    if repeats == 0 {
        return Err(Error::Config("--repeat must be ≥ 1".to_string()));
    }
    let runs = (0..repeats as u64)
        .map(|r| run_experiment(&cfg.with_seed_offset(r)))
        .collect::<Result<Vec<_>>>()?;
    let first = &runs[0].table;
    let stat = |f: &dyn Fn(&[f64]) -> f64| -> Result<ResultTable> {
        let rows = first
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| ResultRow {
                dataset: r.dataset.clone(),
                errors: (0..first.methods.len())
                    .map(|j| {
                        let cells: Vec<f64> = runs
                            .iter()
                            .map(|run| run.table.rows[i].errors[j])
                            .filter(|&v| !is_failed(v))
                            .collect();
                        if cells.is_empty() {
                            FAIL_SENTINEL
                        } else {
                            f(&cells)
                        }
                    })
                    .collect(),
            })
            .collect();
        ResultTable::new(first.methods.clone(), rows)
    };
    let mean = stat(&|v| v.iter().sum::<f64>() / v.len() as f64)?;
    let std = stat(&|v| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
    })?;
    Ok(RepeatSummary {
        repeats,
        mean,
        std,
        runs,
    })
}

pub fn format_summary(s: &RepeatSummary, format: TableFormat) -> String {
    match format {
        TableFormat::Json => {
            let value = serde_json::json!({
                "repeats": s.repeats,
                "mean": s.mean,
                "std": s.std,
            });
            let mut out = serde_json::to_string_pretty(&value).expect("summary serialization");
            out.push('\n');
            out
        }
        TableFormat::Md => format!(
            "Mean over {} runs\n\n{}\nStandard deviation\n\n{}",
            s.repeats,
            format_table(&s.mean, format),
            format_table(&s.std, format)
        ),
        TableFormat::Csv => format!("{}\n{}", format_table(&s.mean, format), format_table(&s.std, format)),
    }
}

/// Writes `dataset,method,round,epsilon,vote_weight,train_error_so_far`.
pub fn write_traces<W: Write>(traces: &[CellTrace], mut w: W) -> std::io::Result<()> {
    writeln!(w, "dataset,method,round,epsilon,vote_weight,train_error_so_far")?;
    for t in traces {
        for r in t.rows.iter().filter(|r| r.stored) {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                t.dataset, t.method, r.round, r.epsilon, r.vote_weight, r.train_error_so_far
            )?;
        }
    }
    Ok(())
}
