use crate::error::SdeError;

/// An Itô system `dx_i = A_i(x) dt + Σ_j B_ij(x) dW_j`.
pub trait ItoSystem {
    fn dim(&self) -> usize;

    fn n_channels(&self) -> usize {
        1
    }

    /// Writes `A` into `drift` (length `dim`) and `B` row-major into
    /// `diffusion` (length `dim · n_channels`).
    fn coefficients(&self, x: &[f64], drift: &mut [f64], diffusion: &mut [f64]);
}

/// Scratch buffers for repeated in-place Euler–Maruyama steps.
#[derive(Debug, Clone)]
pub struct EmWorkspace {
    drift: Vec<f64>,
    diffusion: Vec<f64>,
}

impl EmWorkspace {
    pub fn new<S: ItoSystem + ?Sized>(sys: &S) -> Self {
        Self {
            drift: vec![0.0; sys.dim()],
            diffusion: vec![0.0; sys.dim() * sys.n_channels()],
        }
    }
}

/// `x ← x + A(x) dt + B(x) dW`. `step` is only used for error reporting.
pub fn euler_maruyama_step_in_place<S: ItoSystem + ?Sized>(
    sys: &S,
    x: &mut [f64],
    dt: f64,
    dw: &[f64],
    ws: &mut EmWorkspace,
    step: usize,
) -> Result<(), SdeError> {
    let n = sys.dim();
    let k = sys.n_channels();
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(dw.len(), k);
    sys.coefficients(x, &mut ws.drift, &mut ws.diffusion);
    if ws.drift.iter().chain(&ws.diffusion).any(|c| !c.is_finite()) {
        return Err(SdeError::NonFinite {
            step,
            state: x.to_vec(),
        });
    }
    for i in 0..n {
        let mut inc = ws.drift[i] * dt;
        for j in 0..k {
            inc += ws.diffusion[i * k + j] * dw[j];
        }
        x[i] += inc;
    }
    Ok(())
}

pub fn euler_maruyama_step<S: ItoSystem + ?Sized>(
    sys: &S,
    x: &[f64],
    dt: f64,
    dw: &[f64],
) -> Result<Vec<f64>, SdeError> {
    if x.len() != sys.dim() || dw.len() != sys.n_channels() {
        return Err(SdeError::InvalidParams(format!(
            "state has {} entries and noise {}, system expects {} and {}",
            x.len(),
            dw.len(),
            sys.dim(),
            sys.n_channels()
        )));
    }
    let mut out = x.to_vec();
    let mut ws = EmWorkspace::new(sys);
    euler_maruyama_step_in_place(sys, &mut out, dt, dw, &mut ws, 0)?;
    Ok(out)
}
