//! Scissor and NLA transforms, interferometer models and tele-amplification.

mod analytic;
mod epr;
mod network;
mod spec;
mod teleamp;

pub use analytic::{ideal_nla, t1_apply, t2_coherent, t3_apply, tn_parallel, DiagonalTransform, Sign};
pub use network::{
    build_scissor_circuit, run_heralded, HeraldOutcome, HeraldPattern, HeraldedState, HeraldingMap,
    ScissorCircuit,
};
pub use spec::{gain_from_transmissivity, transmissivity_from_gain, NlaSpec, ScissorSpec};
pub use teleamp::{
    cat_amplitude, teleamp_2cat, teleamp_4cat, teleamp_8cat, teleamp_amplitudes, teleamp_cat,
    teleamp_gain,
};
pub use epr::{epr_scissor_state, lossy_epr_branches, EPR_RESIDUAL_TOLERANCE};
