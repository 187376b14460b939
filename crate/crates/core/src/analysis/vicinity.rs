use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::spin::SpinSystem;

pub const DEFAULT_HALF_WIDTH: f64 = 0.1;

/// Disjoint windows `|⟨S_z⟩ − m| ≤ half_width` around each eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VicinitySpec {
    pub eigenvalues: Vec<f64>,
    pub half_width: f64,
}

impl VicinitySpec {
    pub fn new(eigenvalues: Vec<f64>, half_width: f64) -> Result<Self, AnalysisError> {
        let min_gap = eigenvalues
            .iter()
            .enumerate()
            .flat_map(|(i, a)| eigenvalues[i + 1..].iter().map(move |b| (a - b).abs()))
            .fold(f64::INFINITY, f64::min);
        if !(half_width >= 0.0 && half_width < 0.5 * min_gap) {
            return Err(AnalysisError::OverlappingVicinities {
                half_width,
                half_gap: 0.5 * min_gap,
            });
        }
        Ok(Self {
            eigenvalues,
            half_width,
        })
    }

    pub fn for_system(sys: &SpinSystem) -> Self {
        Self {
            eigenvalues: sys.sz_eigenvalues.clone(),
            half_width: DEFAULT_HALF_WIDTH,
        }
    }

    /// Index of the eigenvalue whose vicinity contains `sz`.
    #[inline]
    pub fn locate(&self, sz: f64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .position(|m| (sz - m).abs() <= self.half_width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residence {
    pub eigenvalue: f64,
    pub probability: f64,
}

/// Per-eigenvalue sample counts, for pooling across trajectories.
pub fn residence_counts(sz: &[f64], spec: &VicinitySpec) -> Vec<usize> {
    let mut counts = vec![0; spec.eigenvalues.len()];
    for &x in sz {
        if let Some(j) = spec.locate(x) {
            counts[j] += 1;
        }
    }
    counts
}

/// Fraction of samples inside each eigenvalue's vicinity.
pub fn residence_probabilities(
    sz: &[f64],
    spec: &VicinitySpec,
) -> Result<Vec<Residence>, AnalysisError> {
    if sz.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    let n = sz.len() as f64;
    Ok(spec
        .eigenvalues
        .iter()
        .zip(residence_counts(sz, spec))
        .map(|(&eigenvalue, c)| Residence {
            eigenvalue,
            probability: c as f64 / n,
        })
        .collect())
}

/// Completed return episodes for one eigenvalue.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReturnEpisodes {
    pub durations: Vec<f64>,
    /// Exits from the vicinity, completed or not.
    pub exits: usize,
    /// Returns that never visited another vicinity in between.
    pub unarmed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnTime {
    pub eigenvalue: f64,
    /// `None` when no episode completed.
    pub mean: Option<f64>,
    pub count: usize,
    pub stderr: Option<f64>,
}

enum Phase {
    /// Never inside yet.
    Waiting,
    Inside,
    Away { since: f64, armed: bool },
}

/// Runs the exit → foreign visit → re-entry state machine for every
/// eigenvalue. Episodes still open at the end are dropped.
pub fn return_episodes(
    times: &[f64],
    sz: &[f64],
    spec: &VicinitySpec,
) -> Result<Vec<ReturnEpisodes>, AnalysisError> {
    if sz.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    let k = spec.eigenvalues.len();
    let mut phase: Vec<Phase> = (0..k).map(|_| Phase::Waiting).collect();
    let mut out = vec![ReturnEpisodes::default(); k];
    for (&t, &x) in times.iter().zip(sz) {
        let here = spec.locate(x);
        for j in 0..k {
            let inside = here == Some(j);
            let foreign = here.is_some() && !inside;
            phase[j] = match std::mem::replace(&mut phase[j], Phase::Waiting) {
                Phase::Waiting | Phase::Inside if inside => Phase::Inside,
                Phase::Waiting => Phase::Waiting,
                Phase::Inside => {
                    out[j].exits += 1;
                    Phase::Away {
                        since: t,
                        armed: foreign,
                    }
                }
                Phase::Away { since, armed } if inside => {
                    if armed {
                        out[j].durations.push(t - since);
                    } else {
                        out[j].unarmed += 1;
                    }
                    Phase::Inside
                }
                Phase::Away { since, armed } => Phase::Away {
                    since,
                    armed: armed || foreign,
                },
            };
        }
    }
    Ok(out)
}

pub fn summarize_returns(eigenvalue: f64, durations: &[f64]) -> ReturnTime {
    let count = durations.len();
    if count == 0 {
        return ReturnTime {
            eigenvalue,
            mean: None,
            count: 0,
            stderr: None,
        };
    }
    let n = count as f64;
    let mean = durations.iter().sum::<f64>() / n;
    let stderr = (count > 1).then(|| {
        let var = durations.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    });
    ReturnTime {
        eigenvalue,
        mean: Some(mean),
        count,
        stderr,
    }
}

/// Mean exit-to-re-entry time per eigenvalue.
pub fn mean_return_times(
    times: &[f64],
    sz: &[f64],
    spec: &VicinitySpec,
) -> Result<Vec<ReturnTime>, AnalysisError> {
    let episodes = return_episodes(times, sz, spec)?;
    Ok(spec
        .eigenvalues
        .iter()
        .zip(&episodes)
        .map(|(&m, e)| summarize_returns(m, &e.durations))
        .collect())
}
