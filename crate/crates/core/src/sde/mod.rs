//! Noise generation, stochastic steppers, the Lindblad oracle and the
//! trajectory/ensemble runners.

mod ensemble;
mod ito;
mod lindblad;
mod noise;
mod qsd;
mod trajectory;

pub use ensemble::{ensemble_from_records, run_ensemble, run_ensemble_records, EnsembleResult};
pub use ito::{euler_maruyama_step, euler_maruyama_step_in_place, EmWorkspace, ItoSystem};
pub use lindblad::{lindblad_integrate, lindblad_rhs, LindbladRecord};
pub use noise::{wiener_path, NoisePath, NoiseSource, PairedIncrements, WienerSource};
pub use qsd::{kraus_step, qsd_matrix_step, KrausSet, QsdOperators, QsdStep, TRACE_TOL};
pub use trajectory::{
    run_trajectory, run_trajectory_with_noise, step_count, Diagnostics, InitialState, ModelKind,
    ModelParams, RecordOptions, TrajectoryRecord, TrajectorySpec, NEGATIVITY_TOL,
};
