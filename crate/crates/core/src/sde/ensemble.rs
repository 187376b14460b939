use rayon::prelude::*;
use serde::Serialize;

use crate::error::SdeError;
use crate::linalg::CMat;
use crate::spin::{DensityMatrix, SpinComponents};

use super::trajectory::{run_trajectory, RecordOptions, TrajectoryRecord, TrajectorySpec};

/// Trajectories per work unit. Fixed so that the summation order, and hence
/// every bit of the result, is independent of the thread count.
const CHUNK: usize = 16;

/// Per-time ensemble statistics.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleResult {
    pub n_traj: usize,
    pub times: Vec<f64>,
    pub mean: Vec<SpinComponents>,
    pub stderr: Vec<SpinComponents>,
    pub mean_purity: Vec<f64>,
    pub stderr_purity: Vec<f64>,
    #[serde(skip)]
    pub mean_density: Vec<DensityMatrix>,
    /// Recorded samples with an eigenvalue below −1e−8, over all trajectories.
    pub negative_samples: usize,
    pub min_eigenvalue: f64,
}

#[derive(Clone)]
struct Accumulator {
    n: usize,
    times: Vec<f64>,
    // [sx, sy, sz, purity] sums and sums of squares
    sum: Vec<[f64; 4]>,
    sum_sq: Vec<[f64; 4]>,
    rho: Vec<CMat>,
    negative_samples: usize,
    min_eigenvalue: f64,
}

impl Accumulator {
    fn empty() -> Self {
        Self {
            n: 0,
            times: Vec::new(),
            sum: Vec::new(),
            sum_sq: Vec::new(),
            rho: Vec::new(),
            negative_samples: 0,
            min_eigenvalue: f64::INFINITY,
        }
    }

    fn add(&mut self, rec: &TrajectoryRecord) {
        if self.n == 0 {
            let len = rec.len();
            self.times = rec.times.clone();
            self.sum = vec![[0.0; 4]; len];
            self.sum_sq = vec![[0.0; 4]; len];
            let d = rec.spin.dim();
            self.rho = vec![CMat::zeros(d); len];
        }
        for i in 0..rec.len() {
            let c = rec.components[i];
            let v = [c.sx, c.sy, c.sz, rec.purity[i]];
            for k in 0..4 {
                self.sum[i][k] += v[k];
                self.sum_sq[i][k] += v[k] * v[k];
            }
            if let Some(rho) = rec.density(i) {
                self.rho[i] += rho.0;
            }
        }
        self.n += 1;
        self.negative_samples += rec.diagnostics.negative_samples;
        self.min_eigenvalue = self.min_eigenvalue.min(rec.diagnostics.min_eigenvalue);
    }

    fn merge(mut self, other: Accumulator) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        for i in 0..self.sum.len() {
            for k in 0..4 {
                self.sum[i][k] += other.sum[i][k];
                self.sum_sq[i][k] += other.sum_sq[i][k];
            }
            self.rho[i] += other.rho[i];
        }
        self.n += other.n;
        self.negative_samples += other.negative_samples;
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self
    }

    fn finish(self) -> EnsembleResult {
        let n = self.n as f64;
        let stats = |i: usize, k: usize| -> (f64, f64) {
            let mean = self.sum[i][k] / n;
            if self.n < 2 {
                return (mean, 0.0);
            }
            let var = ((self.sum_sq[i][k] - n * mean * mean) / (n - 1.0)).max(0.0);
            (mean, (var / n).sqrt())
        };
        let len = self.times.len();
        let mut mean = Vec::with_capacity(len);
        let mut stderr = Vec::with_capacity(len);
        let mut mean_purity = Vec::with_capacity(len);
        let mut stderr_purity = Vec::with_capacity(len);
        for i in 0..len {
            let [(mx, ex), (my, ey), (mz, ez), (mp, ep)] = [0, 1, 2, 3].map(|k| stats(i, k));
            mean.push(SpinComponents {
                sx: mx,
                sy: my,
                sz: mz,
            });
            stderr.push(SpinComponents {
                sx: ex,
                sy: ey,
                sz: ez,
            });
            mean_purity.push(mp);
            stderr_purity.push(ep);
        }
        EnsembleResult {
            n_traj: self.n,
            times: self.times,
            mean,
            stderr,
            mean_purity,
            stderr_purity,
            mean_density: self.rho.iter().map(|r| DensityMatrix(r.scale(1.0 / n))).collect(),
            negative_samples: self.negative_samples,
            min_eigenvalue: self.min_eigenvalue,
        }
    }
}

fn tag(index: usize, e: SdeError) -> SdeError {
    SdeError::Trajectory {
        index,
        source: Box::new(e),
    }
}

/// Runs `n_traj` trajectories, trajectory `i` on stream `i`, and averages
/// their observables without keeping the individual records.
pub fn run_ensemble(
    spec: &TrajectorySpec,
    n_traj: usize,
    opts: RecordOptions,
) -> Result<EnsembleResult, SdeError> {
    if n_traj == 0 {
        return Err(SdeError::InvalidParams("ensemble needs n_traj ≥ 1".into()));
    }
    spec.validate()?;
    let opts = RecordOptions {
        keep_states: true,
        ..opts
    };
    let chunks: Vec<Accumulator> = (0..n_traj.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::empty();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_traj) {
                let rec = run_trajectory(spec, i as u64, opts).map_err(|e| tag(i, e))?;
                acc.add(&rec);
            }
            Ok(acc)
        })
        .collect::<Result<_, SdeError>>()?;
    Ok(chunks
        .into_iter()
        .fold(Accumulator::empty(), Accumulator::merge)
        .finish())
}

/// Runs `n_traj` trajectories and returns every record, in stream order.
pub fn run_ensemble_records(
    spec: &TrajectorySpec,
    n_traj: usize,
    opts: RecordOptions,
) -> Result<Vec<TrajectoryRecord>, SdeError> {
    if n_traj == 0 {
        return Err(SdeError::InvalidParams("ensemble needs n_traj ≥ 1".into()));
    }
    spec.validate()?;
    (0..n_traj)
        .into_par_iter()
        .map(|i| run_trajectory(spec, i as u64, opts).map_err(|e| tag(i, e)))
        .collect()
}

/// Averages already-computed records; they must share one time grid.
pub fn ensemble_from_records(records: &[TrajectoryRecord]) -> Result<EnsembleResult, SdeError> {
    let first = records
        .first()
        .ok_or_else(|| SdeError::InvalidParams("no records to average".into()))?;
    if let Some((i, _)) = records
        .iter()
        .enumerate()
        .find(|(_, r)| r.times.len() != first.times.len())
    {
        return Err(SdeError::InvalidParams(format!(
            "record {i} has a different time grid"
        )));
    }
    let mut acc = Accumulator::empty();
    for chunk in records.chunks(CHUNK) {
        let mut part = Accumulator::empty();
        for r in chunk {
            part.add(r);
        }
        acc = acc.merge(part);
    }
    Ok(acc.finish())
}
