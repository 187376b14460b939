use std::f64::consts::SQRT_2;

use crate::sde::ItoSystem;

/// Coefficients for the Gell-Mann coordinates `(s, m, u, v, k, x, y, z)`.
pub fn spin1_coherence_coefficients(
    r: &[f64; 8],
    epsilon: f64,
    alpha: f64,
) -> ([f64; 8], [f64; 8]) {
    let [s, m, u, v, k, x, y, z] = *r;
    let a2 = alpha * alpha;
    let r3 = 3f64.sqrt();
    let eps = epsilon / SQRT_2;

    let drift = [
        eps * k - 0.5 * a2 * s,
        -eps * (2.0 * u + v) - 0.5 * a2 * m,
        eps * (2.0 * m - y),
        eps * (m - y) - 2.0 * a2 * v,
        eps * (x - s) - 2.0 * a2 * k,
        -eps * k - 0.5 * a2 * x,
        eps * (u + v - r3 * z) - 0.5 * a2 * y,
        epsilon * 1.5f64.sqrt() * y,
    ];

    let inner = -3.0 + 2.0 * r3 * u + 6.0 * z;
    let outer = 3.0 + 2.0 * r3 * u + 6.0 * z;
    let far = r3 * u + 3.0 * z;
    let diffusion = [
        -alpha * s / 3.0 * inner,
        -alpha * m / 3.0 * inner,
        alpha / r3 * (1.0 - 2.0 * u * u + r3 * u * (1.0 - 2.0 * z) + z),
        -2.0 / 3.0 * alpha * v * far,
        -2.0 / 3.0 * alpha * k * far,
        -alpha * x / 3.0 * outer,
        -alpha * y / 3.0 * outer,
        -alpha / 3.0 * (2.0 * z - 1.0) * (3.0 + r3 * u + 3.0 * z),
    ];
    (drift, diffusion)
}

#[derive(Debug, Clone, Copy)]
pub struct Spin1CoherenceSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for Spin1CoherenceSystem {
    fn dim(&self) -> usize {
        8
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let r: &[f64; 8] = x.try_into().expect("spin-1 coherence state has 8 entries");
        let (a, b) = spin1_coherence_coefficients(r, self.epsilon, self.alpha);
        drift.copy_from_slice(&a);
        diffusion.copy_from_slice(&b);
    }
}
