use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, I};
use crate::sde::ItoSystem;
use crate::spin::{
    coherence_to_density, generator_basis, BasisKind, CoherenceModel, CoherenceVector,
    DensityMatrix, Spin, SpinSystem,
};

/// Spin-1 expectation values closed under the measured dynamics.
///
/// `syz` and `szx` are the symmetrized products `⟨S_yS_z + S_zS_y⟩` and
/// `⟨S_zS_x + S_xS_z⟩`; `sxyz` is the complex `⟨S_xS_yS_z⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spin1ComponentState {
    pub sz: f64,
    pub sx: f64,
    pub sy: f64,
    pub sy2: f64,
    pub sz2: f64,
    pub syz: f64,
    pub szx: f64,
    pub sxyz: Complex64,
}

pub const SPIN1_COMPONENT_LABELS: [&str; 9] = [
    "sz", "sx", "sy", "sy2", "sz2", "syz", "szx", "sxyz_re", "sxyz_im",
];

/// The nine Hermitian observables whose expectations form the state, in
/// storage order.
fn observables(sys: &SpinSystem) -> [CMat; 9] {
    let (sx, sy, sz) = (sys.sx, sys.sy, sys.sz);
    let xyz = sx * sy * sz;
    let xyz_dag = xyz.adjoint();
    [
        sz,
        sx,
        sy,
        sy * sy,
        sz * sz,
        sy.anticommutator(&sz),
        sz.anticommutator(&sx),
        (xyz + xyz_dag).scale(0.5),
        (xyz - xyz_dag).scale_complex(-0.5 * I),
    ]
}

impl Spin1ComponentState {
    pub fn from_array(a: &[f64; 9]) -> Self {
        Self {
            sz: a[0],
            sx: a[1],
            sy: a[2],
            sy2: a[3],
            sz2: a[4],
            syz: a[5],
            szx: a[6],
            sxyz: Complex64::new(a[7], a[8]),
        }
    }

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.sz,
            self.sx,
            self.sy,
            self.sy2,
            self.sz2,
            self.syz,
            self.szx,
            self.sxyz.re,
            self.sxyz.im,
        ]
    }

    /// Expectations in the state `rho` of a spin-1 system.
    pub fn from_density(rho: &DensityMatrix, sys: &SpinSystem) -> Self {
        debug_assert_eq!(sys.spin, Spin::One);
        let obs = observables(sys);
        let mut a = [0.0; 9];
        for (slot, op) in a.iter_mut().zip(&obs) {
            *slot = rho.expectation(op);
        }
        Self::from_array(&a)
    }

    /// Least-squares density matrix reproducing these expectations.
    ///
    /// The nine observables do not span the coherence direction along
    /// `⟨S_xS_y + S_yS_x⟩`; the reconstruction sets that coordinate to zero,
    /// which is exact on trajectories started from an S_z eigenstate.
    pub fn to_density(&self) -> DensityMatrix {
        let (offset, pinv) = reconstruction();
        let c = SVector::<f64, 9>::from_column_slice(&self.to_array()) - offset;
        let r = pinv * c;
        let cv = CoherenceVector {
            model: CoherenceModel::Gm8,
            values: r.iter().copied().collect(),
        };
        coherence_to_density(&cv, &SpinSystem::new(Spin::One))
            .expect("gm8 vector matches spin-1 dimension")
    }
}

/// Affine map `expectations = offset + A · R` inverted by pseudo-inverse.
fn reconstruction() -> &'static (SVector<f64, 9>, SMatrix<f64, 8, 9>) {
    static CELL: OnceLock<(SVector<f64, 9>, SMatrix<f64, 8, 9>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let sys = SpinSystem::new(Spin::One);
        let obs = observables(&sys);
        let basis = generator_basis(BasisKind::GellMann);
        let w = 3f64.sqrt() / 3.0;
        let offset = SVector::<f64, 9>::from_fn(|j, _| obs[j].trace().re / 3.0);
        let a = SMatrix::<f64, 9, 8>::from_fn(|j, i| w * obs[j].trace_product(&basis.matrices[i]).re);
        let pinv = a
            .pseudo_inverse(1e-10)
            .expect("pseudo-inverse of a finite matrix");
        (offset, pinv)
    })
}

/// Coefficients for the nine-real component state.
pub fn spin1_component_coefficients(
    st: &Spin1ComponentState,
    epsilon: f64,
    alpha: f64,
) -> ([f64; 9], [f64; 9]) {
    let Spin1ComponentState {
        sz,
        sx,
        sy,
        sy2,
        sz2,
        syz,
        szx,
        sxyz,
    } = *st;
    let (a, b) = (sxyz.re, sxyz.im);
    let a2 = alpha * alpha;

    // Real part of i⟨S_xS_yS_z⟩ is −b.
    let drift = [
        epsilon * sy,
        -0.5 * a2 * sx,
        -epsilon * sz - 0.5 * a2 * sy,
        -epsilon * syz - a2 * (-b + sz2 + sy2 - 1.0),
        epsilon * syz,
        2.0 * epsilon * (sy2 - sz2) - 0.5 * a2 * syz,
        -0.5 * a2 * szx,
        -2.0 * a2 * a,
        epsilon * syz + a2 * sz2 - 2.0 * a2 * b,
    ];
    let diffusion = [
        2.0 * alpha * (sz2 - sz * sz),
        alpha * (szx - 2.0 * sz * sx),
        alpha * (syz - 2.0 * sz * sy),
        alpha * sz * (1.0 - 2.0 * sy2),
        2.0 * alpha * sz * (1.0 - sz2),
        alpha * (sy - 2.0 * sz * syz),
        alpha * (sx - 2.0 * sz * szx),
        -2.0 * alpha * sz * a,
        alpha * sz * (1.0 - 2.0 * b),
    ];
    (drift, diffusion)
}

#[derive(Debug, Clone, Copy)]
pub struct Spin1ComponentSystem {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ItoSystem for Spin1ComponentSystem {
    fn dim(&self) -> usize {
        9
    }

    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]) {
        let arr: &[f64; 9] = x.try_into().expect("spin-1 component state has 9 entries");
        let (a, b) = spin1_component_coefficients(
            &Spin1ComponentState::from_array(arr),
            self.epsilon,
            self.alpha,
        );
        drift.copy_from_slice(&a);
        diffusion.copy_from_slice(&b);
    }
}
