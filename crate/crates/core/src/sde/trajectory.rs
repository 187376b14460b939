use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SdeError;
use crate::linalg::CMat;
use crate::models::{
    BlochSystem, RabiAngleSystem, Spin1CoherenceSystem, Spin1ComponentState,
    Spin1ComponentSystem, Spin32CoherenceSystem, SpinHalfComponentSystem, SPIN1_COMPONENT_LABELS,
};
use crate::spin::{
    coherence_components, coherence_purity, coherence_to_density, density_components,
    density_to_coherence, rabi_coherent_state, CoherenceModel, CoherenceVector, DensityMatrix,
    Spin, SpinComponents, SpinSystem,
};

use super::ito::{euler_maruyama_step_in_place, EmWorkspace, ItoSystem};
use super::noise::{NoiseSource, WienerSource};
use super::qsd::{flatten, KrausSet, QsdOperators};

/// Stream bit reserved for drawing random initial states, so they never
/// overlap with the noise stream of the same trajectory.
const INIT_STREAM_BIT: u64 = 1 << 63;

/// Negative eigenvalues below this count as a sample-level violation.
pub const NEGATIVITY_TOL: f64 = 1e-8;

/// Physical parameters and integration grid for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), SdeError> {
        let bad = |msg: String| Err(SdeError::InvalidParams(msg));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be finite and ≥ 0, got {}", self.epsilon));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be finite and ≥ 0, got {}", self.alpha));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return bad(format!("duration must be ≥ 0, got {}", self.duration));
        }
        if self.duration > 0.0 && self.dt > self.duration {
            return bad(format!(
                "dt = {} exceeds duration = {}",
                self.dt, self.duration
            ));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        step_count(self.duration, self.dt)
    }
}

/// `floor(duration / dt)`, treating ratios within rounding of an integer as
/// that integer.
pub fn step_count(duration: f64, dt: f64) -> usize {
    let ratio = duration / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Euler–Maruyama on the density matrix.
    Matrix,
    /// Positivity-preserving Kraus map.
    Kraus,
    /// Euler–Maruyama on the general coherence vector.
    Coherence,
    /// Euler–Maruyama on spin components and related expectations.
    Components,
    /// Spin 1/2 Rabi angle.
    RabiAngle,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Matrix,
        ModelKind::Kraus,
        ModelKind::Coherence,
        ModelKind::Components,
        ModelKind::RabiAngle,
    ];

    pub fn supports(self, spin: Spin) -> bool {
        match self {
            ModelKind::Matrix | ModelKind::Kraus | ModelKind::Coherence => true,
            ModelKind::Components => spin != Spin::ThreeHalves,
            ModelKind::RabiAngle => spin == Spin::Half,
        }
    }

    pub fn check(self, spin: Spin) -> Result<(), SdeError> {
        if self.supports(spin) {
            Ok(())
        } else {
            Err(SdeError::UnsupportedModel {
                model: self.to_string(),
                spin: spin.to_string(),
            })
        }
    }

    /// Names of the recorded state parameters.
    pub fn state_labels(self, spin: Spin) -> Vec<&'static str> {
        match (self, spin) {
            (ModelKind::RabiAngle, _) => vec!["phi"],
            (ModelKind::Components, Spin::Half) => vec!["sz", "sx", "sy"],
            (ModelKind::Components, _) => SPIN1_COMPONENT_LABELS.to_vec(),
            _ => CoherenceModel::general_for(spin).labels().to_vec(),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Matrix => "matrix",
            ModelKind::Kraus => "kraus",
            ModelKind::Coherence => "coherence",
            ModelKind::Components => "components",
            ModelKind::RabiAngle => "rabi-angle",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.to_string() == s.trim())
            .ok_or_else(|| {
                format!(
                    "unknown model '{s}'; expected one of matrix, kraus, coherence, components, rabi-angle"
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum InitialState {
    /// S_z eigenstate with the given eigenvalue.
    Eigenstate(f64),
    /// `𝕀/d`.
    Mixed,
    /// Explicit general coherence vector (Bloch, Gell-Mann or SU(2)⊗SU(2)).
    Coherence(Vec<f64>),
    /// Spin coherent state at Rabi angle φ on the y–z circle.
    RabiAngle(f64),
    /// Rabi angle drawn uniformly from `[0, 2π)`, per trajectory.
    UniformAngle,
}

/// Everything needed to reproduce one trajectory apart from its stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub spin: Spin,
    pub model: ModelKind,
    pub params: ModelParams,
    pub initial: InitialState,
}

impl TrajectorySpec {
    pub fn validate(&self) -> Result<(), SdeError> {
        self.params.validate()?;
        self.model.check(self.spin)
    }

    pub fn hamiltonian(&self, sys: &SpinSystem) -> CMat {
        sys.sx.scale(self.params.epsilon)
    }

    pub fn lindblad(&self, sys: &SpinSystem) -> CMat {
        sys.sz.scale(self.params.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordOptions {
    pub stride: usize,
    /// Keep the per-sample state parameters (observables are always kept).
    pub keep_states: bool,
    /// A recorded sample with an eigenvalue below `−negativity_limit` aborts
    /// the run.
    pub negativity_limit: f64,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self {
            stride: 10,
            keep_states: true,
            negativity_limit: 0.25,
        }
    }
}

impl RecordOptions {
    pub fn with_stride(stride: usize) -> Self {
        Self {
            stride,
            ..Self::default()
        }
    }
}

/// Run-level health counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub steps: usize,
    /// Matrix steps whose trace drifted enough to be renormalized.
    pub renormalizations: usize,
    /// Recorded samples with an eigenvalue below −1e−8.
    pub negative_samples: usize,
    pub min_eigenvalue: f64,
    /// Smallest `ln det ρ` over recorded samples (−∞ once singular).
    pub min_log_det: f64,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            steps: 0,
            renormalizations: 0,
            negative_samples: 0,
            min_eigenvalue: f64::INFINITY,
            min_log_det: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub spin: Spin,
    pub model: ModelKind,
    pub params: ModelParams,
    pub stream: u64,
    pub stride: usize,
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    /// Row-major `len × labels.len()`; empty when states were not kept.
    pub states: Vec<f64>,
    pub components: Vec<SpinComponents>,
    pub purity: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn has_states(&self) -> bool {
        !self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> Option<&[f64]> {
        let w = self.labels.len();
        self.states.get(i * w..(i + 1) * w)
    }

    pub fn sz(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.sz).collect()
    }

    pub fn sy(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.sy).collect()
    }

    /// Rabi angle series, for rabi-angle records.
    pub fn phi(&self) -> Option<Vec<f64>> {
        if self.model != ModelKind::RabiAngle || !self.has_states() {
            return None;
        }
        Some(self.states.clone())
    }

    /// Density matrix at sample `i`, reconstructed from the stored state.
    pub fn density(&self, i: usize) -> Option<DensityMatrix> {
        let st = self.state(i)?;
        Some(state_to_density(self.spin, self.model, st))
    }
}

fn state_to_density(spin: Spin, model: ModelKind, st: &[f64]) -> DensityMatrix {
    let sys = SpinSystem::new(spin);
    match (model, spin) {
        (ModelKind::RabiAngle, _) => rabi_coherent_state(&sys, st[0]),
        (ModelKind::Components, Spin::Half) => {
            let cv = CoherenceVector {
                model: CoherenceModel::Bloch3,
                values: vec![2.0 * st[1], 2.0 * st[2], 2.0 * st[0]],
            };
            coherence_to_density(&cv, &sys).expect("bloch vector matches spin 1/2")
        }
        (ModelKind::Components, _) => {
            let arr: &[f64; 9] = st.try_into().expect("spin-1 component row has 9 entries");
            Spin1ComponentState::from_array(arr).to_density()
        }
        _ => {
            let cv = CoherenceVector {
                model: CoherenceModel::general_for(spin),
                values: st.to_vec(),
            };
            coherence_to_density(&cv, &sys).expect("coherence row matches spin")
        }
    }
}

/// Initial density matrix and, when the state lies on the y–z circle, its
/// Rabi angle.
fn resolve_initial(
    spec: &TrajectorySpec,
    sys: &SpinSystem,
    stream: u64,
) -> Result<(DensityMatrix, Option<f64>), SdeError> {
    let invalid = |msg: String| SdeError::InvalidInitialState(msg);
    let s = spec.spin.value();
    match &spec.initial {
        InitialState::Eigenstate(m) => {
            let rho = DensityMatrix::eigenstate(sys, *m)
                .map_err(|e| invalid(e.to_string()))?;
            let phi = if (m - s).abs() < 1e-9 {
                Some(0.0)
            } else if (m + s).abs() < 1e-9 {
                Some(std::f64::consts::PI)
            } else {
                None
            };
            Ok((rho, phi))
        }
        InitialState::Mixed => Ok((DensityMatrix::maximally_mixed(sys.dim), None)),
        InitialState::Coherence(values) => {
            let cv = CoherenceVector::new(CoherenceModel::general_for(spec.spin), values.clone())
                .map_err(|e| invalid(e.to_string()))?;
            let rho = coherence_to_density(&cv, sys).map_err(|e| invalid(e.to_string()))?;
            let min = rho.matrix().hermitian_eigenvalues()[0];
            if min < -1e-9 {
                return Err(invalid(format!(
                    "coherence vector is not a physical state (eigenvalue {min:.3e})"
                )));
            }
            let phi = if spec.spin == Spin::Half {
                let [x, y, z] = [values[0], values[1], values[2]];
                let on_circle = x.abs() < 1e-9 && ((y * y + z * z).sqrt() - 1.0).abs() < 1e-9;
                on_circle.then(|| (-y).atan2(z))
            } else {
                None
            };
            Ok((rho, phi))
        }
        InitialState::RabiAngle(phi) => Ok((rabi_coherent_state(sys, *phi), Some(*phi))),
        InitialState::UniformAngle => {
            let mut src = WienerSource::new(spec.params.seed, stream | INIT_STREAM_BIT, 1.0);
            let phi = std::f64::consts::TAU * src.uniform();
            Ok((rabi_coherent_state(sys, phi), Some(phi)))
        }
    }
}

enum Engine {
    Matrix {
        ops: QsdOperators,
        rho: CMat,
    },
    Kraus {
        set: KrausSet,
        rho: CMat,
    },
    Sde {
        sys: Box<dyn ItoSystem + Send + Sync>,
        x: Vec<f64>,
        ws: EmWorkspace,
    },
}

struct Sample {
    components: SpinComponents,
    purity: f64,
    rho: DensityMatrix,
}

struct Runner {
    spin: Spin,
    model: ModelKind,
    sys: SpinSystem,
    engine: Engine,
    dt: f64,
    renormalizations: usize,
}

impl Runner {
    fn new(spec: &TrajectorySpec, stream: u64) -> Result<Self, SdeError> {
        spec.validate()?;
        let sys = SpinSystem::new(spec.spin);
        let (rho0, phi0) = resolve_initial(spec, &sys, stream)?;
        let (eps, alpha) = (spec.params.epsilon, spec.params.alpha);
        let h = spec.hamiltonian(&sys);
        let l = spec.lindblad(&sys);
        let sde = |sys: Box<dyn ItoSystem + Send + Sync>, x: Vec<f64>| {
            let ws = EmWorkspace::new(sys.as_ref());
            Engine::Sde { sys, x, ws }
        };
        let engine = match spec.model {
            ModelKind::Matrix => Engine::Matrix {
                ops: QsdOperators::new(h, vec![l])?,
                rho: *rho0.matrix(),
            },
            ModelKind::Kraus => Engine::Kraus {
                set: KrausSet::new(&h, &[l], spec.params.dt)?,
                rho: *rho0.matrix(),
            },
            ModelKind::Coherence => {
                let cv = density_to_coherence(&rho0, CoherenceModel::general_for(spec.spin))?;
                let model: Box<dyn ItoSystem + Send + Sync> = match spec.spin {
                    Spin::Half => Box::new(BlochSystem { epsilon: eps, alpha }),
                    Spin::One => Box::new(Spin1CoherenceSystem { epsilon: eps, alpha }),
                    Spin::ThreeHalves => Box::new(Spin32CoherenceSystem { epsilon: eps, alpha }),
                };
                sde(model, cv.values)
            }
            ModelKind::Components => match spec.spin {
                Spin::Half => {
                    let c = density_components(&rho0, &sys);
                    sde(
                        Box::new(SpinHalfComponentSystem { epsilon: eps, alpha }),
                        vec![c.sz, c.sx, c.sy],
                    )
                }
                _ => sde(
                    Box::new(Spin1ComponentSystem { epsilon: eps, alpha }),
                    Spin1ComponentState::from_density(&rho0, &sys).to_array().to_vec(),
                ),
            },
            ModelKind::RabiAngle => {
                let phi = phi0.ok_or_else(|| {
                    SdeError::InvalidInitialState(
                        "the rabi-angle model needs a pure state on the y–z circle".into(),
                    )
                })?;
                sde(Box::new(RabiAngleSystem { epsilon: eps, alpha }), vec![phi])
            }
        };
        Ok(Self {
            spin: spec.spin,
            model: spec.model,
            sys,
            engine,
            dt: spec.params.dt,
            renormalizations: 0,
        })
    }

    #[inline]
    fn step<N: NoiseSource + ?Sized>(&mut self, noise: &mut N, step: usize) -> Result<(), SdeError> {
        match &mut self.engine {
            Engine::Matrix { ops, rho } => {
                let dw = [noise.increment()];
                let out = ops.step(rho, self.dt, &dw).map_err(|e| with_step(e, step))?;
                self.renormalizations += out.renormalized as usize;
                *rho = out.rho.0;
            }
            Engine::Kraus { set, rho } => {
                let (next, _) = set.step(rho, noise.uniform())?;
                if !next.is_finite() {
                    return Err(SdeError::NonFinite {
                        step,
                        state: flatten(rho),
                    });
                }
                *rho = next;
            }
            Engine::Sde { sys, x, ws } => {
                let dw = [noise.increment()];
                euler_maruyama_step_in_place(sys.as_ref(), x, self.dt, &dw, ws, step)?;
            }
        }
        Ok(())
    }

    fn state_values(&self) -> Vec<f64> {
        match &self.engine {
            Engine::Matrix { rho, .. } | Engine::Kraus { rho, .. } => {
                density_to_coherence(&DensityMatrix(*rho), CoherenceModel::general_for(self.spin))
                    .map(|cv| cv.values)
                    .unwrap_or_else(|_| flatten(rho))
            }
            Engine::Sde { x, .. } => x.clone(),
        }
    }

    fn sample(&self) -> Sample {
        match &self.engine {
            Engine::Matrix { rho, .. } | Engine::Kraus { rho, .. } => {
                let rho = DensityMatrix(*rho);
                Sample {
                    components: density_components(&rho, &self.sys),
                    purity: rho.purity(),
                    rho,
                }
            }
            Engine::Sde { x, .. } => match (self.model, self.spin) {
                (ModelKind::Components, Spin::One) => {
                    let arr: &[f64; 9] = x.as_slice().try_into().expect("9 entries");
                    let st = Spin1ComponentState::from_array(arr);
                    let rho = st.to_density();
                    Sample {
                        components: SpinComponents {
                            sx: st.sx,
                            sy: st.sy,
                            sz: st.sz,
                        },
                        purity: rho.purity(),
                        rho,
                    }
                }
                (ModelKind::Components, _) => {
                    let c = SpinComponents {
                        sz: x[0],
                        sx: x[1],
                        sy: x[2],
                    };
                    let r2 = 4.0 * (c.sx * c.sx + c.sy * c.sy + c.sz * c.sz);
                    Sample {
                        components: c,
                        purity: 0.5 * (1.0 + r2),
                        rho: state_to_density(self.spin, self.model, x),
                    }
                }
                _ => {
                    let cv = CoherenceVector {
                        model: if self.model == ModelKind::RabiAngle {
                            CoherenceModel::RabiAngle
                        } else {
                            CoherenceModel::general_for(self.spin)
                        },
                        values: x.clone(),
                    };
                    Sample {
                        components: coherence_components(&cv),
                        purity: coherence_purity(&cv),
                        rho: state_to_density(self.spin, self.model, x),
                    }
                }
            },
        }
    }
}

fn with_step(e: SdeError, step: usize) -> SdeError {
    match e {
        SdeError::NonFinite { state, .. } => SdeError::NonFinite { step, state },
        other => other,
    }
}

/// Runs one trajectory with the Wiener stream `stream` of `params.seed`.
pub fn run_trajectory(
    spec: &TrajectorySpec,
    stream: u64,
    opts: RecordOptions,
) -> Result<TrajectoryRecord, SdeError> {
    let mut noise = WienerSource::new(spec.params.seed, stream, spec.params.dt);
    run_trajectory_with_noise(spec, stream, &mut noise, opts)
}

/// Runs one trajectory drawing randomness from `noise`; `stream` is only
/// used for provenance and random initial states.
pub fn run_trajectory_with_noise<N: NoiseSource + ?Sized>(
    spec: &TrajectorySpec,
    stream: u64,
    noise: &mut N,
    opts: RecordOptions,
) -> Result<TrajectoryRecord, SdeError> {
    if opts.stride == 0 {
        return Err(SdeError::InvalidParams("stride must be ≥ 1".into()));
    }
    let mut runner = Runner::new(spec, stream)?;
    let n_steps = spec.params.n_steps();
    let n_samples = n_steps / opts.stride + 1;
    let labels: Vec<String> = spec
        .model
        .state_labels(spec.spin)
        .into_iter()
        .map(String::from)
        .collect();
    let mut rec = TrajectoryRecord {
        spin: spec.spin,
        model: spec.model,
        params: spec.params,
        stream,
        stride: opts.stride,
        times: Vec::with_capacity(n_samples),
        states: Vec::with_capacity(if opts.keep_states { n_samples * labels.len() } else { 0 }),
        labels,
        components: Vec::with_capacity(n_samples),
        purity: Vec::with_capacity(n_samples),
        diagnostics: Diagnostics::default(),
    };

    record(&runner, &mut rec, 0, opts)?;
    for i in 1..=n_steps {
        runner.step(noise, i)?;
        if i % opts.stride == 0 {
            record(&runner, &mut rec, i, opts)?;
        }
    }
    rec.diagnostics.steps = n_steps;
    rec.diagnostics.renormalizations = runner.renormalizations;
    Ok(rec)
}

fn record(
    runner: &Runner,
    rec: &mut TrajectoryRecord,
    step: usize,
    opts: RecordOptions,
) -> Result<(), SdeError> {
    let s = runner.sample();
    let ev = s.rho.matrix().hermitian_eigenvalues();
    let min = ev[0];
    let trace_error = (s.rho.matrix().trace().re - 1.0).abs();
    let finite = min.is_finite() && s.purity.is_finite();
    if !finite || min < -opts.negativity_limit || trace_error > 1e-6 {
        return Err(SdeError::Unphysical {
            step,
            min_eigenvalue: min,
            trace_error,
            state: runner.state_values(),
        });
    }
    let d = &mut rec.diagnostics;
    d.min_eigenvalue = d.min_eigenvalue.min(min);
    if min < -NEGATIVITY_TOL {
        d.negative_samples += 1;
    }
    let log_det = if ev.iter().all(|&l| l > 0.0) {
        ev.iter().map(|l| l.ln()).sum()
    } else {
        f64::NEG_INFINITY
    };
    d.min_log_det = d.min_log_det.min(log_det);

    rec.times.push(step as f64 * runner.dt);
    rec.components.push(s.components);
    rec.purity.push(s.purity);
    if opts.keep_states {
        rec.states.extend(runner.state_values());
    }
    Ok(())
}
