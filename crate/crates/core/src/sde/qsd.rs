use crate::error::SdeError;
use crate::linalg::{CMat, I};
use crate::spin::DensityMatrix;

const HERMITICITY_TOL: f64 = 1e-12;
/// Trace drift tolerated before the matrix stepper renormalizes.
pub const TRACE_TOL: f64 = 1e-12;
const MAX_KRAUS_CHANNELS: usize = 4;

fn check_operators(h: &CMat, lindblads: &[CMat]) -> Result<(), SdeError> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITICITY_TOL * h.max_abs().max(1.0) {
        return Err(SdeError::NonHermitianHamiltonian(dev));
    }
    if let Some(l) = lindblads.iter().find(|l| l.dim() != h.dim()) {
        return Err(SdeError::InvalidParams(format!(
            "Lindblad operator has dimension {}, Hamiltonian {}",
            l.dim(),
            h.dim()
        )));
    }
    Ok(())
}

/// Precomputed operators for the unravelled stochastic master equation
/// with one Wiener channel per Lindblad operator.
#[derive(Debug, Clone)]
pub struct QsdOperators {
    h: CMat,
    lindblads: Vec<CMat>,
    adjoints: Vec<CMat>,
    /// `−iH − ½ Σ L†L`
    effective: CMat,
    /// `L + L†` per channel.
    quadratures: Vec<CMat>,
}

/// Result of one matrix step.
#[derive(Debug, Clone, Copy)]
pub struct QsdStep {
    pub rho: DensityMatrix,
    /// Real trace of the raw increment, zero in exact arithmetic.
    pub trace_increment: f64,
    pub renormalized: bool,
}

impl QsdOperators {
    pub fn new(h: CMat, lindblads: Vec<CMat>) -> Result<Self, SdeError> {
        check_operators(&h, &lindblads)?;
        let adjoints: Vec<CMat> = lindblads.iter().map(CMat::adjoint).collect();
        let mut effective = h.scale_complex(-I);
        for (l, ld) in lindblads.iter().zip(&adjoints) {
            effective.add_scaled(&(*ld * *l), -0.5);
        }
        let quadratures = lindblads.iter().zip(&adjoints).map(|(l, ld)| *l + *ld).collect();
        Ok(Self {
            h,
            lindblads,
            adjoints,
            effective,
            quadratures,
        })
    }

    pub fn hamiltonian(&self) -> &CMat {
        &self.h
    }

    pub fn lindblads(&self) -> &[CMat] {
        &self.lindblads
    }

    pub fn n_channels(&self) -> usize {
        self.lindblads.len()
    }

    /// Deterministic part `−i[H,ρ] + Σ (LρL† − ½{L†L,ρ})`.
    pub fn drift(&self, rho: &CMat) -> CMat {
        let g = self.effective * *rho;
        let mut out = g + g.adjoint();
        for (l, ld) in self.lindblads.iter().zip(&self.adjoints) {
            out += *l * *rho * *ld;
        }
        out
    }

    /// Noise term `ρL† + Lρ − Tr[ρ(L + L†)]ρ` for channel `k`.
    pub fn noise(&self, rho: &CMat, k: usize) -> CMat {
        let lr = self.lindblads[k] * *rho;
        let shift = self.quadratures[k].trace_product(rho).re;
        let mut out = lr + lr.adjoint();
        out.add_scaled(rho, -shift);
        out
    }

    /// One Euler–Maruyama step of the matrix equation.
    pub fn step(&self, rho: &CMat, dt: f64, dw: &[f64]) -> Result<QsdStep, SdeError> {
        if dw.len() != self.n_channels() {
            return Err(SdeError::InvalidParams(format!(
                "{} noise increments for {} channels",
                dw.len(),
                self.n_channels()
            )));
        }
        let mut inc = self.drift(rho).scale(dt);
        for (k, &w) in dw.iter().enumerate() {
            inc.add_scaled(&self.noise(rho, k), w);
        }
        let trace_increment = inc.trace().re;
        let mut next = (*rho + inc).hermitian_part();
        let tr = next.trace().re;
        let renormalized = (tr - 1.0).abs() > TRACE_TOL;
        if renormalized {
            next = next.scale(1.0 / tr);
        }
        if !next.is_finite() {
            return Err(SdeError::NonFinite {
                step: 0,
                state: flatten(rho),
            });
        }
        Ok(QsdStep {
            rho: DensityMatrix(next),
            trace_increment,
            renormalized,
        })
    }
}

pub(crate) fn flatten(m: &CMat) -> Vec<f64> {
    m.entries().flat_map(|z| [z.re, z.im]).collect()
}

pub fn qsd_matrix_step(
    rho: &DensityMatrix,
    h: &CMat,
    lindblads: &[CMat],
    dt: f64,
    dw: &[f64],
) -> Result<QsdStep, SdeError> {
    QsdOperators::new(*h, lindblads.to_vec())?.step(rho.matrix(), dt, dw)
}

/// The `2K` Kraus operators `M_{±k} = (𝕀 + A_{±k})/√(2K)` with
/// `A_{±k} = −iH dt − ½L_k†L_k dt ± L_k √dt`, ordered `+L_1, −L_1, +L_2, …`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    ops: Vec<CMat>,
    adjoints: Vec<CMat>,
    /// `M†M` per branch, so branch weights are single trace products.
    grams: Vec<CMat>,
}

impl KrausSet {
    pub fn new(h: &CMat, lindblads: &[CMat], dt: f64) -> Result<Self, SdeError> {
        check_operators(h, lindblads)?;
        if lindblads.is_empty() || lindblads.len() > MAX_KRAUS_CHANNELS {
            return Err(SdeError::InvalidParams(format!(
                "Kraus set needs 1 to {MAX_KRAUS_CHANNELS} Lindblad operators, got {}",
                lindblads.len()
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SdeError::InvalidParams(format!("dt must be positive, got {dt}")));
        }
        let d = h.dim();
        let norm = 1.0 / ((2 * lindblads.len()) as f64).sqrt();
        let sq = dt.sqrt();
        let mut ops = Vec::with_capacity(2 * lindblads.len());
        for l in lindblads {
            let mut base = CMat::identity(d);
            base.add_scaled(&h.scale_complex(-I), dt);
            base.add_scaled(&(l.adjoint() * *l), -0.5 * dt);
            for sign in [1.0, -1.0] {
                let mut m = base;
                m.add_scaled(l, sign * sq);
                ops.push(m.scale(norm));
            }
        }
        let adjoints: Vec<CMat> = ops.iter().map(CMat::adjoint).collect();
        let grams = ops.iter().zip(&adjoints).map(|(m, md)| *md * *m).collect();
        Ok(Self {
            ops,
            adjoints,
            grams,
        })
    }

    pub fn operators(&self) -> &[CMat] {
        &self.ops
    }

    /// Frobenius norm of `Σ M†M − 𝕀`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.ops[0].dim();
        let mut sum = CMat::identity(d).scale(-1.0);
        for g in &self.grams {
            sum += *g;
        }
        sum.norm()
    }

    /// Branch probabilities `Tr(MρM†)`, renormalized to sum to one.
    pub fn branch_probabilities(&self, rho: &CMat) -> Result<Vec<f64>, SdeError> {
        let raw: Vec<f64> = self
            .grams
            .iter()
            .map(|g| g.trace_product(rho).re.max(0.0))
            .collect();
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(SdeError::DegenerateBranches);
        }
        Ok(raw.into_iter().map(|p| p / total).collect())
    }

    /// Picks a branch with the uniform draw `u` and applies it.
    pub fn step(&self, rho: &CMat, u: f64) -> Result<(CMat, usize), SdeError> {
        if !(0.0..1.0).contains(&u) {
            return Err(SdeError::InvalidParams(format!("uniform draw {u} outside [0, 1)")));
        }
        let mut weights = [0.0; 2 * MAX_KRAUS_CHANNELS];
        let mut total = 0.0;
        for (w, g) in weights.iter_mut().zip(&self.grams) {
            *w = g.trace_product(rho).re.max(0.0);
            total += *w;
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(SdeError::DegenerateBranches);
        }
        let target = u * total;
        let mut acc = 0.0;
        let mut branch = self.ops.len() - 1;
        for (i, &w) in weights.iter().take(self.ops.len()).enumerate() {
            acc += w;
            if target < acc {
                branch = i;
                break;
            }
        }
        let next = self.ops[branch] * *rho * self.adjoints[branch];
        let tr = next.trace().re;
        if !(tr > 0.0) {
            return Err(SdeError::DegenerateBranches);
        }
        Ok((next.scale(1.0 / tr).hermitian_part(), branch))
    }
}

pub fn kraus_step(
    rho: &DensityMatrix,
    h: &CMat,
    lindblads: &[CMat],
    dt: f64,
    u: f64,
) -> Result<(DensityMatrix, usize), SdeError> {
    let (next, branch) = KrausSet::new(h, lindblads, dt)?.step(rho.matrix(), u)?;
    Ok((DensityMatrix(next), branch))
}
