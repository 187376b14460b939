use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::summarize;
use crate::error::RunError;
use crate::sde::{ensemble_from_records, run_ensemble_records, TrajectoryRecord};

use super::config::RunConfig;
use super::format::{
    read_trajectory_csv, write_ensemble_csv, write_trajectory_csv, SummaryDocument,
};
use super::validate::{validate, ValidationReport};

fn file_err(path: &Path, source: std::io::Error) -> RunError {
    RunError::File {
        path: path.display().to_string(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| file_err(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| file_err(path, e))
}

fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), RunError> {
    let mut w = create(path)?;
    f(&mut w).and_then(|_| w.flush()).map_err(|e| file_err(path, e))
}

fn stem(cfg: &RunConfig, alpha: f64) -> String {
    format!("{}_alpha{alpha}", cfg.name)
}

fn records(cfg: &RunConfig, alpha: f64) -> Result<Vec<TrajectoryRecord>, RunError> {
    Ok(run_ensemble_records(
        &cfg.spec(alpha),
        cfg.n_traj,
        cfg.record_options(),
    )?)
}

fn summary_doc(
    cfg: &RunConfig,
    alpha: f64,
    recs: &[TrajectoryRecord],
) -> Result<SummaryDocument, RunError> {
    let mut doc = SummaryDocument::new(cfg, alpha, summarize(recs, &cfg.summary_options())?);
    doc.negative_samples = Some(recs.iter().map(|r| r.diagnostics.negative_samples).sum());
    Ok(doc)
}

fn write_json(path: &Path, doc: &impl serde::Serialize) -> Result<(), RunError> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, doc).map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

/// One CSV per trajectory per α.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut out = Vec::new();
    for &alpha in &cfg.alpha {
        for rec in records(cfg, alpha)? {
            let path = cfg
                .out
                .join(format!("{}_traj{}.csv", stem(cfg, alpha), rec.stream));
            write_with(&path, |w| write_trajectory_csv(w, &rec, cfg))?;
            out.push(path);
        }
    }
    Ok(out)
}

/// Mean-observable CSV and a summary document per α.
pub fn ensemble(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut out = Vec::new();
    for &alpha in &cfg.alpha {
        let recs = records(cfg, alpha)?;
        let ens = ensemble_from_records(&recs)?;
        let csv = cfg.out.join(format!("{}_ensemble.csv", stem(cfg, alpha)));
        write_with(&csv, |w| write_ensemble_csv(w, &ens, cfg, alpha))?;
        let json = cfg.out.join(format!("{}_summary.json", stem(cfg, alpha)));
        write_json(&json, &summary_doc(cfg, alpha, &recs)?)?;
        out.extend([csv, json]);
    }
    Ok(out)
}

/// Summaries from stored trajectory files, or from fresh runs of `cfg` when
/// no inputs are given.
pub fn analyze(
    cfg: Option<&RunConfig>,
    inputs: &[PathBuf],
    out_dir: Option<&Path>,
) -> Result<Vec<SummaryDocument>, RunError> {
    let mut docs = Vec::new();
    if inputs.is_empty() {
        let cfg = cfg.ok_or_else(|| {
            RunError::Config(crate::error::ConfigError::Syntax(
                "analyze needs a config or input files".into(),
            ))
        })?;
        for &alpha in &cfg.alpha {
            docs.push(summary_doc(cfg, alpha, &records(cfg, alpha)?)?);
        }
    } else {
        let mut loaded: Vec<(RunConfig, TrajectoryRecord)> = Vec::new();
        for path in inputs {
            let f = File::open(path).map_err(|e| file_err(path, e))?;
            let pair = read_trajectory_csv(BufReader::new(f)).map_err(|e| RunError::Format {
                path: path.display().to_string(),
                line: e.line,
                message: e.message,
            })?;
            loaded.push(pair);
        }
        let mut alphas: Vec<f64> = loaded.iter().map(|(_, r)| r.params.alpha).collect();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        for alpha in alphas {
            let group: Vec<&(RunConfig, TrajectoryRecord)> =
                loaded.iter().filter(|(_, r)| r.params.alpha == alpha).collect();
            let cfg = group[0].0.clone();
            let recs: Vec<TrajectoryRecord> = group.iter().map(|(_, r)| r.clone()).collect();
            let summary = summarize(&recs, &cfg.summary_options())?;
            docs.push(SummaryDocument::new(&cfg, alpha, summary));
        }
    }
    if let Some(dir) = out_dir {
        for doc in &docs {
            let path = dir.join(format!("{}_summary.json", stem(&doc.config, doc.alpha)));
            write_json(&path, doc)?;
        }
    }
    Ok(docs)
}

/// Runs the invariant suite; a failed check maps to exit code 3.
pub fn run_validation() -> Result<ValidationReport, (ValidationReport, RunError)> {
    let report = validate();
    if report.passed() {
        Ok(report)
    } else {
        let err = RunError::ValidationFailed {
            failed: report.failed(),
            total: report.checks.len(),
        };
        Err((report, err))
    }
}
