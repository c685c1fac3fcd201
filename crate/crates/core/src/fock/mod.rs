//! Truncated Fock-space states and exact linear-optical evolution.

mod circuit;
mod density;
mod ops;
mod space;
mod state;
pub mod transfer;

pub use circuit::{Circuit, Element};
pub use density::{DensityOperator, QuantumState};
pub use ops::{
    apply_beamsplitter, apply_beamsplitter_reporting, apply_diagonal, apply_mixing_angle,
    apply_phase,
};
pub(crate) use density::{hermitian_eigen, hermitian_eigenvalues};
pub(crate) use ops::{binomial, factorial};
pub use space::FockSpace;
pub use transfer::{evolve_fock, two_mode_input_amplitude, SparseFockState};
pub use state::{
    cat2_state, cat4_state, cat_state, coherent_coefficients, coherent_state,
    coherent_state_with_tolerance, epr_state, epr_state_with_tolerance, fock_state, CatParity,
    PureState, DEFAULT_TOLERANCE,
};

/// `a ⊗ b`.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    a.tensor(b)
}

/// `|ψ><ψ|`.
pub fn to_density(psi: &PureState) -> DensityOperator {
    psi.to_density()
}

/// Reduced density operator on `keep_modes`.
pub fn partial_trace(rho: &DensityOperator, keep_modes: &[usize]) -> crate::Result<DensityOperator> {
    rho.partial_trace(keep_modes)
}
