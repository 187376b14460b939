use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{cached_basis, pauli, BasisKind};
use super::system::{Spin, SpinSystem};
use crate::error::SpinError;
use crate::linalg::CMat;

/// A d×d density matrix ρ. Construction does not enforce physicality; use
/// [`check_physical`](super::check_physical) for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Self {
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMat::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn eigenstate(sys: &SpinSystem, m: f64) -> Result<Self, SpinError> {
        Ok(Self(sys.eigenprojector(m)?))
    }

    /// Projector onto a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj() / norm;
            }
        }
        Self(m)
    }

    #[inline]
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Real expectation `Tr(op · ρ)`.
    #[inline]
    pub fn expectation(&self, op: &CMat) -> f64 {
        op.trace_product(&self.0).re
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }
}

/// Which real parametrization a coherence vector uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoherenceModel {
    /// Spin 1/2 pure state on the y–z great circle, single angle φ.
    RabiAngle,
    /// Spin 1/2 Bloch vector (x, y, z).
    Bloch3,
    /// Spin 1, (s, m, u, v, k, x, y, z) against λ_1..λ_8.
    Gm8,
    /// Spin 3/2, (v, e, f, g, h, j, k, l, m, n, o, p, q, s, u) against Σ_1..Σ_15.
    Su15,
}

impl CoherenceModel {
    pub fn len(self) -> usize {
        match self {
            CoherenceModel::RabiAngle => 1,
            CoherenceModel::Bloch3 => 3,
            CoherenceModel::Gm8 => 8,
            CoherenceModel::Su15 => 15,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            CoherenceModel::RabiAngle | CoherenceModel::Bloch3 => 2,
            CoherenceModel::Gm8 => 3,
            CoherenceModel::Su15 => 4,
        }
    }

    /// General (mixed-state capable) parametrization for a spin.
    pub fn general_for(spin: Spin) -> Self {
        match spin {
            Spin::Half => CoherenceModel::Bloch3,
            Spin::One => CoherenceModel::Gm8,
            Spin::ThreeHalves => CoherenceModel::Su15,
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            CoherenceModel::RabiAngle => &["phi"],
            CoherenceModel::Bloch3 => &["x", "y", "z"],
            CoherenceModel::Gm8 => &["s", "m", "u", "v", "k", "x", "y", "z"],
            CoherenceModel::Su15 => &[
                "v", "e", "f", "g", "h", "j", "k", "l", "m", "n", "o", "p", "q", "s", "u",
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceVector {
    pub model: CoherenceModel,
    pub values: Vec<f64>,
}

impl CoherenceVector {
    pub fn new(model: CoherenceModel, values: Vec<f64>) -> Result<Self, SpinError> {
        if values.len() != model.len() {
            return Err(SpinError::DimensionMismatch {
                what: "coherence vector",
                expected: model.len(),
                got: values.len(),
            });
        }
        Ok(Self { model, values })
    }

    pub fn zeros(model: CoherenceModel) -> Self {
        Self {
            model,
            values: vec![0.0; model.len()],
        }
    }

    pub fn rabi_angle(phi: f64) -> Self {
        Self {
            model: CoherenceModel::RabiAngle,
            values: vec![phi],
        }
    }
}

/// Spin projections `⟨S_i⟩ = Tr(S_i ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinComponents {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

/// Anything that can report spin components and purity.
pub enum StateRef<'a> {
    Density(&'a DensityMatrix),
    Coherence(&'a CoherenceVector),
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(d: &'a DensityMatrix) -> Self {
        StateRef::Density(d)
    }
}

impl<'a> From<&'a CoherenceVector> for StateRef<'a> {
    fn from(c: &'a CoherenceVector) -> Self {
        StateRef::Coherence(c)
    }
}

fn check_dim(what: &'static str, expected: usize, got: usize) -> Result<(), SpinError> {
    if expected != got {
        return Err(SpinError::DimensionMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

pub fn coherence_to_density(
    cv: &CoherenceVector,
    sys: &SpinSystem,
) -> Result<DensityMatrix, SpinError> {
    check_dim("coherence vector", sys.dim, cv.model.dim())?;
    check_dim("coherence values", cv.model.len(), cv.values.len())?;
    let id = CMat::identity(sys.dim);
    let rho = match cv.model {
        CoherenceModel::RabiAngle => {
            let phi = cv.values[0];
            let [_, sy, sz] = pauli();
            let mut m = id;
            m.add_scaled(&sz, phi.cos());
            m.add_scaled(&sy, -phi.sin());
            m.scale(0.5)
        }
        CoherenceModel::Bloch3 => expand(&id, BasisKind::Pauli, &cv.values, 1.0, 0.5),
        CoherenceModel::Gm8 => {
            expand(&id, BasisKind::GellMann, &cv.values, 3f64.sqrt(), 1.0 / 3.0)
        }
        CoherenceModel::Su15 => expand(&id, BasisKind::Su2xSu2, &cv.values, 1.0, 0.25),
    };
    Ok(DensityMatrix(rho))
}

/// `prefactor · (𝕀 + weight · Σ c_i G_i)`
fn expand(id: &CMat, kind: BasisKind, coeffs: &[f64], weight: f64, prefactor: f64) -> CMat {
    let basis = cached_basis(kind);
    let mut m = *id;
    for (g, &c) in basis.matrices.iter().zip(coeffs) {
        m.add_scaled(g, weight * c);
    }
    m.scale(prefactor)
}

pub fn density_to_coherence(
    rho: &DensityMatrix,
    model: CoherenceModel,
) -> Result<CoherenceVector, SpinError> {
    check_dim("density matrix", model.dim(), rho.dim())?;
    let herm = rho.0.hermiticity_deviation();
    if herm > 1e-9 {
        return Err(SpinError::NotHermitian(herm));
    }
    let project = |kind: BasisKind, scale: f64| -> Vec<f64> {
        cached_basis(kind)
            .matrices
            .iter()
            .map(|g| scale * rho.expectation(g))
            .collect()
    };
    let values = match model {
        CoherenceModel::RabiAngle => {
            let r = project(BasisKind::Pauli, 1.0);
            // y = −sin φ, z = cos φ
            vec![(-r[1]).atan2(r[2])]
        }
        CoherenceModel::Bloch3 => project(BasisKind::Pauli, 1.0),
        CoherenceModel::Gm8 => project(BasisKind::GellMann, 3f64.sqrt() / 2.0),
        CoherenceModel::Su15 => project(BasisKind::Su2xSu2, 1.0),
    };
    Ok(CoherenceVector { model, values })
}

/// Closed-form spin components of a coherence vector.
pub fn coherence_components(cv: &CoherenceVector) -> SpinComponents {
    let v = &cv.values;
    match cv.model {
        CoherenceModel::RabiAngle => SpinComponents {
            sx: 0.0,
            sy: -0.5 * v[0].sin(),
            sz: 0.5 * v[0].cos(),
        },
        CoherenceModel::Bloch3 => SpinComponents {
            sx: 0.5 * v[0],
            sy: 0.5 * v[1],
            sz: 0.5 * v[2],
        },
        CoherenceModel::Gm8 => {
            let (s, m, u, x, y, z) = (v[0], v[1], v[2], v[5], v[6], v[7]);
            let c = (2.0f64 / 3.0).sqrt();
            SpinComponents {
                sx: c * (x + s),
                sy: c * (m + y),
                sz: u / 3f64.sqrt() + z,
            }
        }
        CoherenceModel::Su15 => {
            let (v_, e, f, h, j, m, n, p) = (v[0], v[1], v[2], v[4], v[5], v[8], v[9], v[11]);
            let r3 = 3f64.sqrt();
            SpinComponents {
                sx: 0.5 * (h + n + r3 * v_),
                sy: 0.5 * (r3 * e - j + m),
                sz: 0.5 * f + p,
            }
        }
    }
}

/// Closed-form purity `Tr ρ²` of a coherence vector.
pub fn coherence_purity(cv: &CoherenceVector) -> f64 {
    let sq: f64 = cv.values.iter().map(|x| x * x).sum();
    match cv.model {
        CoherenceModel::RabiAngle => 1.0,
        CoherenceModel::Bloch3 => 0.5 * (1.0 + sq),
        CoherenceModel::Gm8 => 2.0 / 3.0 * sq + 1.0 / 3.0,
        CoherenceModel::Su15 => 0.25 * (1.0 + sq),
    }
}

pub fn density_components(rho: &DensityMatrix, sys: &SpinSystem) -> SpinComponents {
    SpinComponents {
        sx: rho.expectation(&sys.sx),
        sy: rho.expectation(&sys.sy),
        sz: rho.expectation(&sys.sz),
    }
}

pub fn spin_components<'a>(
    state: impl Into<StateRef<'a>>,
    sys: &SpinSystem,
) -> Result<SpinComponents, SpinError> {
    match state.into() {
        StateRef::Density(rho) => {
            check_dim("density matrix", sys.dim, rho.dim())?;
            Ok(density_components(rho, sys))
        }
        StateRef::Coherence(cv) => {
            check_dim("coherence vector", sys.dim, cv.model.dim())?;
            Ok(coherence_components(cv))
        }
    }
}

pub fn purity<'a>(state: impl Into<StateRef<'a>>) -> f64 {
    match state.into() {
        StateRef::Density(rho) => rho.purity(),
        StateRef::Coherence(cv) => coherence_purity(cv),
    }
}

/// Spin coherent state `exp(−iφS_x)|+s⟩`: the point at Rabi angle φ on the
/// y–z circle of radius s.
pub fn rabi_coherent_state(sys: &SpinSystem, phi: f64) -> DensityMatrix {
    // Amplitude on |s−k⟩: sqrt(C(2s,k)) cos(φ/2)^{2s−k} (−i sin(φ/2))^k.
    let n = sys.dim - 1;
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let mut psi = Vec::with_capacity(sys.dim);
    for k in 0..=n {
        let binom = binomial(n, k) as f64;
        let amp = binom.sqrt() * c.powi((n - k) as i32) * s.powi(k as i32);
        let phase = match k % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        psi.push(phase * amp);
    }
    DensityMatrix::pure(&psi)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Spin-1/2 Bloch vector of the Rabi-angle state, for reference.
pub fn rabi_bloch(phi: f64) -> [f64; 3] {
    [0.0, -phi.sin(), phi.cos()]
}
