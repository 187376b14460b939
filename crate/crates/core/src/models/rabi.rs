use crate::sde::ItoSystem;

/// Drift and diffusion of the Rabi angle φ: `(ε − ¼α² sin 2φ, −α sin φ)`.
pub fn rabi_angle_coefficients(phi: f64, epsilon: f64, alpha: f64) -> (f64, f64) {
    (
        epsilon - 0.25 * alpha * alpha * (2.0 * phi).sin(),
        -alpha * phi.sin(),
    )
}

/// Spin 1/2 pure state on the y–z great circle, tracked by its Rabi angle.
/// The angle is never wrapped during integration.
#[derive(Debug, Clone, Copy)]
pub struct RabiAngleSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for RabiAngleSystem {
    fn dim(&self) -> usize {
        1
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let (a, b) = rabi_angle_coefficients(x[0], self.epsilon, self.alpha);
        drift[0] = a;
        diffusion[0] = b;
    }
}
