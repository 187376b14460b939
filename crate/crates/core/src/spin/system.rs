use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SpinError;
use crate::linalg::CMat;

/// Supported spin quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "3/2")]
    ThreeHalves,
}

impl Spin {
    pub const ALL: [Spin; 3] = [Spin::Half, Spin::One, Spin::ThreeHalves];

    pub fn value(self) -> f64 {
        match self {
            Spin::Half => 0.5,
            Spin::One => 1.0,
            Spin::ThreeHalves => 1.5,
        }
    }

    /// Hilbert space dimension `2s + 1`.
    pub fn dim(self) -> usize {
        match self {
            Spin::Half => 2,
            Spin::One => 3,
            Spin::ThreeHalves => 4,
        }
    }

    pub fn from_value(s: f64) -> Result<Self, SpinError> {
        Spin::ALL
            .into_iter()
            .find(|sp| (sp.value() - s).abs() < 1e-12)
            .ok_or_else(|| SpinError::UnsupportedSpin(s.to_string()))
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Half => "1/2",
            Spin::One => "1",
            Spin::ThreeHalves => "3/2",
        })
    }
}

impl FromStr for Spin {
    type Err = SpinError;

    /// Accepts `"1/2"`, `"3/2"`, `"1"` or a decimal such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let value = match t.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num
                    .trim()
                    .parse()
                    .map_err(|_| SpinError::UnsupportedSpin(t.into()))?;
                let den: f64 = den
                    .trim()
                    .parse()
                    .map_err(|_| SpinError::UnsupportedSpin(t.into()))?;
                num / den
            }
            None => t
                .parse()
                .map_err(|_| SpinError::UnsupportedSpin(t.into()))?,
        };
        Spin::from_value(value).map_err(|_| SpinError::UnsupportedSpin(t.into()))
    }
}

/// Angular momentum operators (ħ = 1) in the S_z eigenbasis ordered
/// m = +s, …, −s.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    pub spin: Spin,
    pub dim: usize,
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
    /// Descending: `+s, s−1, …, −s`.
    pub sz_eigenvalues: Vec<f64>,
}

impl SpinSystem {
    pub fn new(spin: Spin) -> Self {
        let s = spin.value();
        let dim = spin.dim();
        let ms: Vec<f64> = (0..dim).map(|k| s - k as f64).collect();

        // S+ |m⟩ = sqrt(s(s+1) − m(m+1)) |m+1⟩; row index k−1 holds m+1.
        let mut raise = CMat::zeros(dim);
        for k in 1..dim {
            let m = ms[k];
            raise[(k - 1, k)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let sx = (raise + lower).scale(0.5);
        let sy = (raise - lower).scale_complex(Complex64::new(0.0, -0.5));
        let sz = CMat::from_diagonal(&ms);

        Self {
            spin,
            dim,
            sx,
            sy,
            sz,
            sz_eigenvalues: ms,
        }
    }

    /// Index of the S_z eigenvalue `m` in the basis ordering.
    pub fn eigen_index(&self, m: f64) -> Result<usize, SpinError> {
        self.sz_eigenvalues
            .iter()
            .position(|&e| (e - m).abs() < 1e-9)
            .ok_or_else(|| SpinError::NoSuchEigenstate(format!("m = {m} for spin {}", self.spin)))
    }

    /// `|m⟩⟨m|` as a matrix.
    pub fn eigenprojector(&self, m: f64) -> Result<CMat, SpinError> {
        let idx = self.eigen_index(m)?;
        let mut p = CMat::zeros(self.dim);
        p[(idx, idx)] = Complex64::new(1.0, 0.0);
        Ok(p)
    }

    pub fn operators(&self) -> [&CMat; 3] {
        [&self.sx, &self.sy, &self.sz]
    }
}

/// Fallible constructor taking the spin as a rational string (`"3/2"`).
pub fn build_spin_system(spin: &str) -> Result<SpinSystem, SpinError> {
    Ok(SpinSystem::new(spin.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn spin_half_is_half_pauli() {
        let sys = SpinSystem::new(Spin::Half);
        assert_eq!(sys.sz_eigenvalues, vec![0.5, -0.5]);
        assert!((sys.sx[(0, 1)].re - 0.5).abs() < 1e-15);
        assert!((sys.sy[(0, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((sys.sy[(1, 0)] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn spin_one_sz() {
        let sys = build_spin_system("1").unwrap();
        assert_eq!(sys.sz_eigenvalues, vec![1.0, 0.0, -1.0]);
        assert_eq!(sys.sz, CMat::from_diagonal(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn angular_momentum_algebra_all_spins() {
        for spin in Spin::ALL {
            let sys = SpinSystem::new(spin);
            let [sx, sy, sz] = sys.operators();
            for op in [sx, sy, sz] {
                assert!(op.hermiticity_deviation() <= 1e-12);
            }
            assert!((sx.commutator(sy) - sz.scale_complex(I)).max_abs() <= 1e-12);
            assert!((sy.commutator(sz) - sx.scale_complex(I)).max_abs() <= 1e-12);
            assert!((sz.commutator(sx) - sy.scale_complex(I)).max_abs() <= 1e-12);
            let casimir = *sx * *sx + *sy * *sy + *sz * *sz;
            let s = spin.value();
            assert!((casimir - CMat::identity(sys.dim).scale(s * (s + 1.0))).max_abs() < 1e-12);
        }
    }

    #[test]
    fn parse_rejects_unsupported() {
        assert!(matches!(
            build_spin_system("2"),
            Err(SpinError::UnsupportedSpin(_))
        ));
        assert!("5/2".parse::<Spin>().is_err());
        assert_eq!("1.5".parse::<Spin>().unwrap(), Spin::ThreeHalves);
        assert_eq!(" 1/2 ".parse::<Spin>().unwrap(), Spin::Half);
    }
}
