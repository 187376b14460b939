//! Itô coefficient evaluators for the parametrized spin models under
//! `H = εS_x` and `L = αS_z`.

mod rabi;
mod spin1;
mod spin1_components;
mod spin32;
mod spin_half;

pub use rabi::{rabi_angle_coefficients, RabiAngleSystem};
pub use spin1::{spin1_coherence_coefficients, Spin1CoherenceSystem};
pub use spin1_components::{
    spin1_component_coefficients, Spin1ComponentState, Spin1ComponentSystem,
    SPIN1_COMPONENT_LABELS,
};
pub use spin32::{spin32_coherence_coefficients, Spin32CoherenceSystem};
pub use spin_half::{
    bloch_coefficients, spin_half_component_coefficients, spin_half_purity_increment,
    BlochSystem, SpinHalfComponentSystem,
};
