use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::SdeError;

/// Source of per-step randomness for a stepper.
pub trait NoiseSource {
    /// Gaussian increment with mean 0 and variance `dt`.
    fn increment(&mut self) -> f64;
    /// Uniform draw in `[0, 1)`.
    fn uniform(&mut self) -> f64;
}

/// Reproducible Wiener increments for one `(seed, stream)` pair.
///
/// Gaussians come from the Box–Muller transform, so every pair of
/// increments consumes exactly two 64-bit words regardless of the values
/// drawn.
#[derive(Debug, Clone)]
pub struct WienerSource {
    rng: ChaCha8Rng,
    sqrt_dt: f64,
    spare: Option<f64>,
}

impl WienerSource {
    pub fn new(seed: u64, stream: u64, dt: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            rng,
            sqrt_dt: dt.sqrt(),
            spare: None,
        }
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - unit_f64(self.rng.next_u64());
        let u2 = unit_f64(self.rng.next_u64());
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

impl NoiseSource for WienerSource {
    #[inline]
    fn increment(&mut self) -> f64 {
        self.sqrt_dt * self.standard_normal()
    }

    #[inline]
    fn uniform(&mut self) -> f64 {
        unit_f64(self.rng.next_u64())
    }
}

#[inline]
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Wraps a fine-step source and returns the sum of consecutive pairs, giving
/// the increments of the same Brownian path on a grid of twice the spacing.
#[derive(Debug, Clone)]
pub struct PairedIncrements<S> {
    inner: S,
}

impl<S: NoiseSource> PairedIncrements<S> {
    pub fn new(inner: S) -> Self {
        Self { inner }
    }
}

impl<S: NoiseSource> NoiseSource for PairedIncrements<S> {
    fn increment(&mut self) -> f64 {
        self.inner.increment() + self.inner.increment()
    }

    fn uniform(&mut self) -> f64 {
        self.inner.uniform()
    }
}

/// A materialized block of Wiener increments, row-major `n_steps × n_channels`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    pub seed: u64,
    pub stream: u64,
    pub dt: f64,
    pub n_steps: usize,
    pub n_channels: usize,
    pub increments: Vec<f64>,
}

impl NoisePath {
    pub fn step(&self, i: usize) -> &[f64] {
        &self.increments[i * self.n_channels..(i + 1) * self.n_channels]
    }
}

pub fn wiener_path(
    seed: u64,
    stream: u64,
    n_steps: usize,
    n_channels: usize,
    dt: f64,
) -> Result<NoisePath, SdeError> {
    if n_steps == 0 {
        return Err(SdeError::ZeroSteps);
    }
    if n_channels == 0 || !(dt > 0.0 && dt.is_finite()) {
        return Err(SdeError::InvalidParams(format!(
            "wiener_path needs n_channels ≥ 1 and dt > 0 (got {n_channels}, {dt})"
        )));
    }
    let mut src = WienerSource::new(seed, stream, dt);
    let increments = (0..n_steps * n_channels).map(|_| src.increment()).collect();
    Ok(NoisePath {
        seed,
        stream,
        dt,
        n_steps,
        n_channels,
        increments,
    })
}
