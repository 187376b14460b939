use serde::Serialize;

use super::state::DensityMatrix;

/// Diagnostic summary of how far a matrix is from a valid density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalityReport {
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub det: f64,
    /// `ln det ρ`, or `-inf` when `det ≤ 0`.
    pub log_det: f64,
    pub passed: bool,
}

impl PhysicalityReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }
}

/// Tolerances for [`check_physical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityTolerance {
    pub hermiticity: f64,
    pub trace: f64,
    /// Most negative eigenvalue still accepted (a positive number).
    pub negativity: f64,
}

impl Default for PhysicalityTolerance {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            trace: 1e-10,
            negativity: 1e-8,
        }
    }
}

/// Never fails: a non-positive determinant is reported through the
/// `log_det = -inf` sentinel rather than an error.
pub fn check_physical(rho: &DensityMatrix, tol: PhysicalityTolerance) -> PhysicalityReport {
    let m = rho.matrix();
    let trace_deviation = (m.trace() - 1.0).norm();
    let hermiticity_deviation = m.hermiticity_deviation();
    let eigenvalues = m.hermitian_eigenvalues();
    let det: f64 = eigenvalues.iter().product();
    let log_det = if det > 0.0 && eigenvalues.iter().all(|&l| l > 0.0) {
        eigenvalues.iter().map(|l| l.ln()).sum()
    } else {
        f64::NEG_INFINITY
    };
    let finite = m.is_finite();
    let passed = finite
        && trace_deviation <= tol.trace
        && hermiticity_deviation <= tol.hermiticity
        && eigenvalues.iter().all(|&l| l >= -tol.negativity);
    PhysicalityReport {
        trace_deviation,
        hermiticity_deviation,
        eigenvalues,
        det,
        log_det,
        passed,
    }
}
