use crate::sde::ItoSystem;

/// Coefficients for `(⟨S_z⟩, ⟨S_x⟩, ⟨S_y⟩)`; returns `(drift, diffusion)`.
pub fn spin_half_component_coefficients(
    state: [f64; 3],
    epsilon: f64,
    alpha: f64,
) -> ([f64; 3], [f64; 3]) {
    let [sz, sx, sy] = state;
    let a2 = alpha * alpha;
    (
        [epsilon * sy, -0.5 * a2 * sx, -epsilon * sz - 0.5 * a2 * sy],
        [
            2.0 * alpha * (0.25 - sz * sz),
            -2.0 * alpha * sz * sx,
            -2.0 * alpha * sz * sy,
        ],
    )
}

/// Bloch vector coefficients, order `(x, y, z)`.
pub fn bloch_coefficients(r: [f64; 3], epsilon: f64, alpha: f64) -> ([f64; 3], [f64; 3]) {
    let [x, y, z] = r;
    let a2 = alpha * alpha;
    (
        [-0.5 * a2 * x, -epsilon * z - 0.5 * a2 * y, epsilon * y],
        [-alpha * z * x, -alpha * z * y, alpha * (1.0 - z * z)],
    )
}

/// Itô increment of the purity `P = ½(1 + |r|²)`.
pub fn spin_half_purity_increment(r: [f64; 3], purity: f64, alpha: f64, dt: f64, dw: f64) -> f64 {
    let rz = r[2];
    alpha * alpha * (1.0 - rz * rz) * (1.0 - purity) * dt + 2.0 * alpha * rz * (1.0 - purity) * dw
}

#[derive(Debug, Clone, Copy)]
pub struct SpinHalfComponentSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for SpinHalfComponentSystem {
    fn dim(&self) -> usize {
        3
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let (a, b) = spin_half_component_coefficients([x[0], x[1], x[2]], self.epsilon, self.alpha);
        drift.copy_from_slice(&a);
        diffusion.copy_from_slice(&b);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BlochSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for BlochSystem {
    fn dim(&self) -> usize {
        3
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let (a, b) = bloch_coefficients([x[0], x[1], x[2]], self.epsilon, self.alpha);
        drift.copy_from_slice(&a);
        diffusion.copy_from_slice(&b);
    }
}
