#![allow(dead_code)]

use num_complex::Complex64;
use qzeno::linalg::CMat;
use qzeno::sde::WienerSource;
use qzeno::spin::DensityMatrix;

/// Random mixture of `rank` Gaussian pure states.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    let mut g = WienerSource::new(seed, 7, 1.0);
    let mut m = CMat::zeros(dim);
    for _ in 0..rank {
        let psi: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(g.standard_normal(), g.standard_normal()))
            .collect();
        m += DensityMatrix::pure(&psi).0.scale(1.0 / rank as f64);
    }
    DensityMatrix(m)
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}
