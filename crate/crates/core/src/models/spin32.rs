use crate::sde::ItoSystem;

/// Coefficients for the fifteen SU(2)⊗SU(2) coordinates
/// `(v, e, f, g, h, j, k, l, m, n, o, p, q, s, u)` with `H = +εS_x`.
pub fn spin32_coherence_coefficients(
    c: &[f64; 15],
    epsilon: f64,
    alpha: f64,
) -> ([f64; 15], [f64; 15]) {
    let [v, e, f, g, h, j, k, l, m, n, o, p, q, s, u] = *c;
    let a2 = alpha * alpha;
    let r3 = 3f64.sqrt();
    let w = f + 2.0 * p;

    let drift = [
        -0.5 * a2 * v + epsilon * o,
        -0.5 * a2 * e - epsilon * (r3 * f + k),
        epsilon * (r3 * e + j - m),
        -2.0 * a2 * g + epsilon * s,
        a2 * (2.0 * n - 2.5 * h),
        a2 * (-2.5 * j - 2.0 * m) + epsilon * (p - f - r3 * k),
        -2.0 * a2 * k + epsilon * (e + r3 * j),
        -2.0 * a2 * l - epsilon * q,
        a2 * (-2.0 * j - 2.5 * m) + epsilon * (f - p),
        a2 * (2.0 * h - 2.5 * n) - r3 * epsilon * o,
        -2.0 * a2 * o + epsilon * (r3 * n - v),
        epsilon * (m - j),
        -0.5 * a2 * q + epsilon * l,
        -0.5 * a2 * s - epsilon * (g + r3 * u),
        r3 * epsilon * s,
    ];

    let diffusion = [
        alpha * (2.0 * q - v * w),
        alpha * (2.0 * s - e * w),
        alpha * (1.0 + 2.0 * u - f * w),
        alpha * (k - g * w),
        -alpha * h * w,
        -alpha * j * w,
        alpha * (g - k * w),
        alpha * (o - l * w),
        -alpha * m * w,
        -alpha * n * w,
        alpha * (l - o * w),
        alpha * (2.0 + u - p * w),
        alpha * (2.0 * v - q * w),
        alpha * (2.0 * e - s * w),
        alpha * (2.0 * f + p - u * w),
    ];
    (drift, diffusion)
}

#[derive(Debug, Clone, Copy)]
pub struct Spin32CoherenceSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for Spin32CoherenceSystem {
    fn dim(&self) -> usize {
        15
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let c: &[f64; 15] = x.try_into().expect("spin-3/2 coherence state has 15 entries");
        let (a, b) = spin32_coherence_coefficients(c, self.epsilon, self.alpha);
        drift.copy_from_slice(&a);
        diffusion.copy_from_slice(&b);
    }
}
