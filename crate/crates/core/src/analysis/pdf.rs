use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::AnalysisError;

pub const DEFAULT_PDF_BINS: usize = 100;
pub const DEFAULT_BURN_IN: f64 = 0.1;
const MIN_BINS: usize = 8;

/// Histogram density of the Rabi angle on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnglePdf {
    pub edges: Vec<f64>,
    pub centers: Vec<f64>,
    pub counts: Vec<u64>,
    /// Normalized so that `Σ density · Δφ = 1`.
    pub density: Vec<f64>,
    /// Small-α stationary density `(1 + (3α²/4ε) sin 2φ)/2π` at the bin
    /// centers; empty when ε = 0.
    pub reference: Vec<f64>,
    pub n_samples: u64,
}

impl AnglePdf {
    pub fn bin_width(&self) -> f64 {
        TAU / self.counts.len() as f64
    }

    /// `Σ density · Δφ`.
    pub fn integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width()
    }

    /// Probability mass in bins whose centers lie within `half_width` of
    /// `angle`, measured around the circle.
    pub fn mass_near(&self, angle: f64, half_width: f64) -> f64 {
        let w = self.bin_width();
        self.centers
            .iter()
            .zip(&self.density)
            .filter(|(c, _)| circular_distance(**c, angle) <= half_width)
            .map(|(_, p)| p * w)
            .sum()
    }

    /// Pearson correlation of `density − 1/2π` with `sin 2φ`.
    pub fn sin2_correlation(&self) -> f64 {
        let dev: Vec<f64> = self.density.iter().map(|p| p - 1.0 / TAU).collect();
        let s: Vec<f64> = self.centers.iter().map(|c| (2.0 * c).sin()).collect();
        pearson(&dev, &s)
    }

    /// The highest bin, and the highest bin at least π/2 away from it.
    pub fn two_modes(&self) -> (f64, f64) {
        let argmax = |skip: &dyn Fn(f64) -> bool| {
            self.centers
                .iter()
                .zip(&self.density)
                .filter(|(c, _)| !skip(**c))
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(c, _)| *c)
                .unwrap_or(f64::NAN)
        };
        let first = argmax(&|_| false);
        let second = argmax(&|c| circular_distance(c, first) < 0.5 * PI);
        (first, second)
    }
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

fn bin_counts(series: &[&[f64]], n_bins: usize, burn_in: f64, half: Option<bool>) -> Vec<u64> {
    let mut counts = vec![0u64; n_bins];
    for s in series {
        let start = (burn_in * s.len() as f64).floor() as usize;
        let kept = &s[start.min(s.len())..];
        let kept = match half {
            None => kept,
            Some(false) => &kept[..kept.len() / 2],
            Some(true) => &kept[kept.len() / 2..],
        };
        for &phi in kept {
            let w = phi.rem_euclid(TAU);
            let b = ((w / TAU) * n_bins as f64) as usize;
            counts[b.min(n_bins - 1)] += 1;
        }
    }
    counts
}

/// Pools unwrapped angle series (mod 2π) after discarding the first
/// `burn_in` fraction of each.
pub fn angle_pdf(
    series: &[&[f64]],
    n_bins: usize,
    burn_in: f64,
    epsilon: f64,
    alpha: f64,
) -> Result<AnglePdf, AnalysisError> {
    if n_bins < MIN_BINS {
        return Err(AnalysisError::TooFewBins {
            min: MIN_BINS,
            got: n_bins,
        });
    }
    let counts = bin_counts(series, n_bins, burn_in, None);
    let n_samples: u64 = counts.iter().sum();
    if n_samples == 0 {
        return Err(AnalysisError::NoInput);
    }
    let w = TAU / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins).map(|i| i as f64 * w).collect();
    let centers: Vec<f64> = (0..n_bins).map(|i| (i as f64 + 0.5) * w).collect();
    let density = counts
        .iter()
        .map(|&c| c as f64 / (n_samples as f64 * w))
        .collect();
    let reference = if epsilon > 0.0 {
        let amp = 3.0 * alpha * alpha / (4.0 * epsilon);
        centers
            .iter()
            .map(|c| (1.0 + amp * (2.0 * c).sin()) / TAU)
            .collect()
    } else {
        Vec::new()
    };
    Ok(AnglePdf {
        edges,
        centers,
        counts,
        density,
        reference,
        n_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

fn upper_tail(statistic: f64, dof: f64) -> f64 {
    ChiSquared::new(dof)
        .map(|d| 1.0 - d.cdf(statistic))
        .unwrap_or(f64::NAN)
}

/// Pearson χ² goodness of fit against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareTest {
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = (counts.len() - 1) as f64;
    ChiSquareTest {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// χ² homogeneity test between the first and second half (after burn-in) of
/// every series. Bins empty in both halves are skipped.
pub fn stationarity_check(
    series: &[&[f64]],
    n_bins: usize,
    burn_in: f64,
) -> Result<ChiSquareTest, AnalysisError> {
    if n_bins < MIN_BINS {
        return Err(AnalysisError::TooFewBins {
            min: MIN_BINS,
            got: n_bins,
        });
    }
    let a = bin_counts(series, n_bins, burn_in, Some(false));
    let b = bin_counts(series, n_bins, burn_in, Some(true));
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(AnalysisError::NoInput);
    }
    let (na, nb) = (na as f64, nb as f64);
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&x, &y) in a.iter().zip(&b) {
        let total = (x + y) as f64;
        if total == 0.0 {
            continue;
        }
        used += 1;
        let ea = total * na / (na + nb);
        let eb = total * nb / (na + nb);
        statistic += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    let dof = used.saturating_sub(1).max(1) as f64;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    })
}
