use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::sde::{ModelKind, TrajectoryRecord};
use crate::spin::{Spin, SpinSystem};

use super::occupancy::{Occupancy, DEFAULT_GRID};
use super::pdf::{angle_pdf, chi_square_uniform, stationarity_check, AnglePdf, ChiSquareTest};
use super::pdf::{DEFAULT_BURN_IN, DEFAULT_PDF_BINS};
use super::rate::{mean_rabi_rate, RateEstimate};
use super::vicinity::{
    residence_counts, return_episodes, summarize_returns, Residence, ReturnTime, VicinitySpec,
    DEFAULT_HALF_WIDTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryOptions {
    pub half_width: f64,
    pub pdf_bins: usize,
    pub burn_in: f64,
    pub grid: usize,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            pdf_bins: DEFAULT_PDF_BINS,
            burn_in: DEFAULT_BURN_IN,
            grid: DEFAULT_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleStatistics {
    pub pdf: AnglePdf,
    pub uniformity: ChiSquareTest,
    pub stationarity: ChiSquareTest,
    pub sin2_correlation: f64,
}

/// Pooled statistics over a set of trajectories sharing spin and model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub spin: Spin,
    pub model: ModelKind,
    pub n_trajectories: usize,
    pub n_samples: usize,
    pub residence: Vec<Residence>,
    pub return_times: Vec<ReturnTime>,
    pub occupancy: Occupancy,
    pub angle: Option<AngleStatistics>,
    pub rabi_rate: Option<RateEstimate>,
}

pub fn summarize(
    records: &[TrajectoryRecord],
    opts: &SummaryOptions,
) -> Result<AnalysisSummary, AnalysisError> {
    let first = records.first().ok_or(AnalysisError::NoInput)?;
    let spin = first.spin;
    let sys = SpinSystem::new(spin);
    let spec = VicinitySpec::new(sys.sz_eigenvalues.clone(), opts.half_width)?;
    let k = spec.eigenvalues.len();

    let mut counts = vec![0usize; k];
    let mut durations: Vec<Vec<f64>> = vec![Vec::new(); k];
    let mut occupancy = Occupancy::new(opts.grid, spin.value());
    let mut n_samples = 0;
    for rec in records {
        if rec.is_empty() {
            return Err(AnalysisError::EmptyTrajectory);
        }
        let sz = rec.sz();
        let sy = rec.sy();
        n_samples += sz.len();
        for (c, n) in counts.iter_mut().zip(residence_counts(&sz, &spec)) {
            *c += n;
        }
        for (d, e) in durations
            .iter_mut()
            .zip(return_episodes(&rec.times, &sz, &spec)?)
        {
            d.extend(e.durations);
        }
        for (&y, &z) in sy.iter().zip(&sz) {
            occupancy.add(y, z);
        }
    }
    let residence = spec
        .eigenvalues
        .iter()
        .zip(&counts)
        .map(|(&eigenvalue, &c)| Residence {
            eigenvalue,
            probability: c as f64 / n_samples as f64,
        })
        .collect();
    let return_times = spec
        .eigenvalues
        .iter()
        .zip(&durations)
        .map(|(&m, d)| summarize_returns(m, d))
        .collect();

    let phis: Vec<Vec<f64>> = records.iter().filter_map(|r| r.phi()).collect();
    let (angle, rabi_rate) = if phis.len() == records.len() {
        let views: Vec<&[f64]> = phis.iter().map(|p| p.as_slice()).collect();
        let p = &first.params;
        let pdf = angle_pdf(&views, opts.pdf_bins, opts.burn_in, p.epsilon, p.alpha)?;
        let angle = AngleStatistics {
            uniformity: chi_square_uniform(&pdf.counts),
            stationarity: stationarity_check(&views, opts.pdf_bins, opts.burn_in)?,
            sin2_correlation: pdf.sin2_correlation(),
            pdf,
        };
        let rates = records
            .iter()
            .zip(&phis)
            .map(|(r, phi)| mean_rabi_rate(&r.times, phi))
            .collect::<Result<Vec<_>, _>>()?;
        (Some(angle), Some(pool_rates(&rates)))
    } else {
        (None, None)
    };

    Ok(AnalysisSummary {
        spin,
        model: first.model,
        n_trajectories: records.len(),
        n_samples,
        residence,
        return_times,
        occupancy,
        angle,
        rabi_rate,
    })
}

/// Mean of per-trajectory rates; the spread across trajectories sets the
/// error once there is more than one.
pub fn pool_rates(rates: &[RateEstimate]) -> RateEstimate {
    match rates {
        [] => RateEstimate {
            rate: f64::NAN,
            stderr: f64::NAN,
        },
        [one] => *one,
        _ => {
            let n = rates.len() as f64;
            let mean = rates.iter().map(|r| r.rate).sum::<f64>() / n;
            let var = rates.iter().map(|r| (r.rate - mean).powi(2)).sum::<f64>() / (n - 1.0);
            RateEstimate {
                rate: mean,
                stderr: (var / n).sqrt(),
            }
        }
    }
}
