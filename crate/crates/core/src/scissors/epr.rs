//! Scissors acting on one arm of a lossy EPR state.

use num_complex::Complex64;

use crate::channels::{loss_on_kraus_branches, KrausBranches};
use crate::error::{check_unit_interval, Error, Result};
use crate::fock::{binomial, epr_state, DensityOperator, FockSpace, PureState};

/// Largest residual branch weight accepted by [`epr_scissor_state`].
pub const EPR_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// EPR state with both modes cut at `cutoff`, second mode sent through
/// loss `T`, as the unnormalized Kraus branches of the lost photon number.
pub fn lossy_epr_branches(chi: f64, transmissivity: f64, cutoff: usize) -> Result<KrausBranches> {
    let psi = epr_state(chi, cutoff)?;
    loss_on_kraus_branches(&psi, 1, transmissivity, cutoff)
}

/// Closed form of a single accepted pattern of a 1- or 3-scissor on the
/// second arm of an EPR state after loss `T`, without feed-forward credit.
///
/// Returns `Σ_{k ≤ k_max} |ψ_k><ψ_k|` on modes `(A, B)` with cutoffs
/// `(k_max + order, order)`. Its trace is the probability of one pattern.
pub fn epr_scissor_state(
    chi: f64,
    transmissivity: f64,
    gain: f64,
    order: usize,
    k_max: usize,
) -> Result<DensityOperator> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::ParameterOutOfRange { name: "chi", value: chi });
    }
    check_unit_interval("transmissivity", transmissivity)?;
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "gain", value: gain });
    }
    let prefactor = match order {
        1 => ((1.0 - chi * chi) / (2.0 * (gain * gain + 1.0))).sqrt(),
        3 => 6f64.sqrt() / 8.0 * ((1.0 - chi * chi) / (gain * gain + 1.0).powi(3)).sqrt(),
        other => return Err(Error::UnsupportedOrder(other)),
    };
    // Every branch k > k_max comes from EPR components with more than k_max photons.
    let residual = chi.powi(2 * (k_max as i32 + 1));
    if residual > EPR_RESIDUAL_TOLERANCE {
        return Err(Error::CutoffTooSmall {
            leakage: residual,
            tolerance: EPR_RESIDUAL_TOLERANCE,
        });
    }
    let space = FockSpace::new(vec![k_max + order, order])?;
    let t = transmissivity;
    let mut rho = DensityOperator::zeros(space.clone());
    for k in 0..=k_max {
        let mut psi = PureState::zeros(space.clone());
        let lost = (1.0 - t).powf(k as f64 / 2.0);
        let mut put = |occ: [usize; 2], v: f64| -> Result<()> {
            let i = space.index_of(&occ)?;
            psi.amplitudes_mut()[i] = Complex64::new(prefactor * lost * v, 0.0);
            Ok(())
        };
        if order == 1 {
            let s = (-chi).powi(k as i32);
            put([k, 0], s)?;
            put([k + 1, 1], (t * (k + 1) as f64).sqrt() * s * -chi * gain)?;
        } else {
            for n in k..=k + 3 {
                let v = chi.powi(n as i32)
                    * gain.powi((n - k) as i32)
                    * binomial(n, k).sqrt()
                    * t.powf((n - k) as f64 / 2.0);
                put([n, n - k], v)?;
            }
        }
        rho.add_pure(1.0, &psi);
    }
    Ok(rho)
}
