use serde::Serialize;

use crate::error::SdeError;
use crate::linalg::CMat;
use crate::spin::{density_components, DensityMatrix, SpinComponents, SpinSystem};

use super::qsd::QsdOperators;
use super::trajectory::step_count;

const TRACE_STEP_TOL: f64 = 1e-8;
const MAX_HALVINGS: u32 = 20;

/// Ensemble-averaged evolution sampled on a uniform grid.
#[derive(Debug, Clone, Serialize)]
pub struct LindbladRecord {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub densities: Vec<DensityMatrix>,
    pub components: Vec<SpinComponents>,
    pub purity: Vec<f64>,
    /// Number of steps that were redone on a finer grid.
    pub rejected_steps: usize,
}

pub fn lindblad_rhs(ops: &QsdOperators, rho: &CMat) -> CMat {
    ops.drift(rho)
}

fn rk4(ops: &QsdOperators, rho: &CMat, h: f64) -> CMat {
    let k1 = ops.drift(rho);
    let mut y = *rho;
    y.add_scaled(&k1, 0.5 * h);
    let k2 = ops.drift(&y);
    let mut y = *rho;
    y.add_scaled(&k2, 0.5 * h);
    let k3 = ops.drift(&y);
    let mut y = *rho;
    y.add_scaled(&k3, h);
    let k4 = ops.drift(&y);
    let mut out = *rho;
    out.add_scaled(&k1, h / 6.0);
    out.add_scaled(&k2, h / 3.0);
    out.add_scaled(&k3, h / 3.0);
    out.add_scaled(&k4, h / 6.0);
    out.hermitian_part()
}

/// Classical fourth-order Runge–Kutta integration of the Lindblad equation.
///
/// A step whose trace moves by more than 1e−8 is redone as two half steps,
/// recursively; such steps are counted in `rejected_steps`.
pub fn lindblad_integrate(
    rho0: &DensityMatrix,
    sys: &SpinSystem,
    h: &CMat,
    lindblads: &[CMat],
    dt: f64,
    duration: f64,
    stride: usize,
) -> Result<LindbladRecord, SdeError> {
    if !(dt > 0.0) || !(duration >= 0.0) || stride == 0 {
        return Err(SdeError::InvalidParams(format!(
            "lindblad_integrate needs dt > 0, duration ≥ 0, stride ≥ 1 (got {dt}, {duration}, {stride})"
        )));
    }
    let ops = QsdOperators::new(*h, lindblads.to_vec())?;
    let n_steps = step_count(duration, dt);
    let mut rec = LindbladRecord {
        times: Vec::new(),
        densities: Vec::new(),
        components: Vec::new(),
        purity: Vec::new(),
        rejected_steps: 0,
    };
    let mut rho = *rho0.matrix();
    let push = |rec: &mut LindbladRecord, i: usize, rho: &CMat| {
        let d = DensityMatrix(*rho);
        rec.times.push(i as f64 * dt);
        rec.components.push(density_components(&d, sys));
        rec.purity.push(d.purity());
        rec.densities.push(d);
    };
    push(&mut rec, 0, &rho);
    for i in 1..=n_steps {
        rho = advance(&ops, &rho, dt, 0, &mut rec.rejected_steps)?;
        if !rho.is_finite() {
            return Err(SdeError::NonFinite {
                step: i,
                state: super::qsd::flatten(&rho),
            });
        }
        if i % stride == 0 {
            push(&mut rec, i, &rho);
        }
    }
    Ok(rec)
}

fn advance(
    ops: &QsdOperators,
    rho: &CMat,
    h: f64,
    depth: u32,
    rejected: &mut usize,
) -> Result<CMat, SdeError> {
    let next = rk4(ops, rho, h);
    let drift = (next.trace().re - rho.trace().re).abs();
    if drift <= TRACE_STEP_TOL {
        return Ok(next);
    }
    if depth >= MAX_HALVINGS {
        return Err(SdeError::Unphysical {
            step: 0,
            min_eigenvalue: f64::NAN,
            trace_error: drift,
            state: super::qsd::flatten(rho),
        });
    }
    *rejected += 1;
    let half = advance(ops, rho, 0.5 * h, depth + 1, rejected)?;
    advance(ops, &half, 0.5 * h, depth + 1, rejected)
}
