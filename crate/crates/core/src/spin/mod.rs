//! Spin operators, generator bases and density-matrix parametrizations.
//!
//! Basis ordering is always m = +s, …, −s, so ρ₁₁ is the weight on the
//! highest S_z eigenstate.

mod basis;
mod physical;
mod state;
mod system;

pub use basis::{generator_basis, pauli, BasisKind, GeneratorBasis};
pub use physical::{check_physical, PhysicalityReport, PhysicalityTolerance};
pub use state::{
    coherence_components, coherence_purity, coherence_to_density, density_components,
    density_to_coherence, purity, rabi_bloch, rabi_coherent_state, spin_components, CoherenceModel,
    CoherenceVector, DensityMatrix, SpinComponents, StateRef,
};
pub use system::{build_spin_system, Spin, SpinSystem};
