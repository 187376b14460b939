use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisSummary;
use crate::sde::{Diagnostics, EnsembleResult, ModelParams, TrajectoryRecord};
use crate::spin::SpinComponents;

use super::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where a trajectory came from within its run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryTag {
    pub alpha: f64,
    pub stream: u64,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn provenance(w: &mut impl Write, cfg: &RunConfig) -> std::io::Result<()> {
    writeln!(w, "# qzeno {VERSION}")?;
    writeln!(
        w,
        "# config {}",
        serde_json::to_string(cfg).expect("config serializes")
    )
}

pub fn write_trajectory_csv(
    w: &mut impl Write,
    rec: &TrajectoryRecord,
    cfg: &RunConfig,
) -> std::io::Result<()> {
    provenance(w, cfg)?;
    let tag = TrajectoryTag {
        alpha: rec.params.alpha,
        stream: rec.stream,
    };
    writeln!(
        w,
        "# trajectory {}",
        serde_json::to_string(&tag).expect("tag serializes")
    )?;
    let mut header = vec!["t".to_string()];
    header.extend(rec.labels.iter().cloned());
    header.extend(["sx", "sy", "sz", "purity"].map(String::from));
    writeln!(w, "{}", header.join(","))?;
    let width = rec.labels.len();
    for i in 0..rec.len() {
        let mut row = vec![num(rec.times[i])];
        match rec.state(i) {
            Some(st) => row.extend(st.iter().map(|&x| num(x))),
            None => row.extend(std::iter::repeat_n(String::new(), width)),
        }
        let c = rec.components[i];
        row.extend([c.sx, c.sy, c.sz, rec.purity[i]].map(num));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_ensemble_csv(
    w: &mut impl Write,
    ens: &EnsembleResult,
    cfg: &RunConfig,
    alpha: f64,
) -> std::io::Result<()> {
    provenance(w, cfg)?;
    writeln!(w, "# ensemble {{\"alpha\":{alpha},\"n_traj\":{}}}", ens.n_traj)?;
    writeln!(
        w,
        "t,mean_sx,stderr_sx,mean_sy,stderr_sy,mean_sz,stderr_sz,mean_purity,stderr_purity"
    )?;
    for i in 0..ens.times.len() {
        let (m, e) = (ens.mean[i], ens.stderr[i]);
        let row = [
            ens.times[i],
            m.sx,
            e.sx,
            m.sy,
            e.sy,
            m.sz,
            e.sz,
            ens.mean_purity[i],
            ens.stderr_purity[i],
        ]
        .map(num);
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Read failure with a 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseFailure {
    pub line: usize,
    pub message: String,
}

fn fail(line: usize, message: impl Into<String>) -> ParseFailure {
    ParseFailure {
        line,
        message: message.into(),
    }
}

/// Reads a trajectory file written by [`write_trajectory_csv`]; the
/// embedded config supplies spin, model and parameters.
pub fn read_trajectory_csv(
    r: impl BufRead,
) -> Result<(RunConfig, TrajectoryRecord), ParseFailure> {
    let mut cfg: Option<RunConfig> = None;
    let mut tag: Option<TrajectoryTag> = None;
    let mut header: Option<Vec<String>> = None;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut components = Vec::new();
    let mut purity = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| fail(n, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(json) = rest.strip_prefix("config ") {
                cfg = Some(serde_json::from_str(json).map_err(|e| fail(n, e.to_string()))?);
            } else if let Some(json) = rest.strip_prefix("trajectory ") {
                tag = Some(serde_json::from_str(json).map_err(|e| fail(n, e.to_string()))?);
            }
            continue;
        }
        let Some(cols) = &header else {
            let cols: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            let tail = ["sx", "sy", "sz", "purity"];
            if cols.len() < 5 || cols[0] != "t" || cols[cols.len() - 4..] != tail {
                return Err(fail(n, "expected header t,<state...>,sx,sy,sz,purity"));
            }
            header = Some(cols);
            continue;
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(fail(
                n,
                format!("expected {} columns, found {}", cols.len(), fields.len()),
            ));
        }
        let values = fields
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(n, e.to_string()))?;
        let k = values.len();
        times.push(values[0]);
        states.extend_from_slice(&values[1..k - 4]);
        components.push(SpinComponents {
            sx: values[k - 4],
            sy: values[k - 3],
            sz: values[k - 2],
        });
        purity.push(values[k - 1]);
    }
    let cfg = cfg.ok_or_else(|| fail(1, "missing '# config' provenance line"))?;
    let header = header.ok_or_else(|| fail(1, "missing header row"))?;
    let alpha = tag.map_or(cfg.alpha[0], |t| t.alpha);
    let params = ModelParams {
        alpha,
        ..cfg.spec(alpha).params
    };
    let stride = match times.as_slice() {
        [a, b, ..] => ((b - a) / cfg.dt).round().max(1.0) as usize,
        _ => cfg.stride,
    };
    let rec = TrajectoryRecord {
        spin: cfg.spin,
        model: cfg.model,
        params,
        stream: tag.map_or(0, |t| t.stream),
        stride,
        labels: header[1..header.len() - 4].to_vec(),
        times,
        states,
        components,
        purity,
        diagnostics: Diagnostics::default(),
    };
    Ok((cfg, rec))
}

/// The JSON document written for every analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub version: String,
    pub config: RunConfig,
    pub alpha: f64,
    pub summary: AnalysisSummary,
    /// Samples with an eigenvalue below −1e−8, when simulated in this run.
    pub negative_samples: Option<usize>,
}

impl SummaryDocument {
    pub fn new(cfg: &RunConfig, alpha: f64, summary: AnalysisSummary) -> Self {
        Self {
            version: VERSION.to_string(),
            config: cfg.clone(),
            alpha,
            summary,
            negative_samples: None,
        }
    }
}
