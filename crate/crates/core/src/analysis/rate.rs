use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

const BOOTSTRAP_SEED: u64 = 0x5eed_b007;
const BOOTSTRAP_RESAMPLES: usize = 1000;
const MAX_BLOCKS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub stderr: f64,
}

/// `(φ(T) − φ(0)) / T` with a block-bootstrap standard error over up to 20
/// contiguous blocks.
pub fn mean_rabi_rate(times: &[f64], phi: &[f64]) -> Result<RateEstimate, AnalysisError> {
    if phi.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    let n = phi.len().min(times.len());
    let span = times[n - 1] - times[0];
    if n < 2 || !(span > 0.0) {
        return Err(AnalysisError::ZeroDuration);
    }
    let rate = (phi[n - 1] - phi[0]) / span;

    let n_blocks = MAX_BLOCKS.min(n - 1);
    let len = (n - 1) / n_blocks;
    let block_rates: Vec<f64> = (0..n_blocks)
        .map(|b| {
            let (i, j) = (b * len, (b + 1) * len);
            (phi[j] - phi[i]) / (times[j] - times[i])
        })
        .collect();
    let stderr = if n_blocks < 2 {
        0.0
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
        let means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
            .map(|_| {
                (0..n_blocks)
                    .map(|_| block_rates[(rng.next_u64() % n_blocks as u64) as usize])
                    .sum::<f64>()
                    / n_blocks as f64
            })
            .collect();
        let m = means.iter().sum::<f64>() / means.len() as f64;
        (means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (means.len() - 1) as f64).sqrt()
    };
    Ok(RateEstimate { rate, stderr })
}
