//! Pure-loss channels.
//!
//! `K_k |n> = √(C(n,k) τ^{n−k} (1−τ)^k) |n−k>`. Loss only moves population
//! downward, so it is exact on a truncated space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_unit_interval, Result};
use crate::fock::{binomial, DensityOperator, PureState, QuantumState};

/// Amplitude of `K_k` on `|n>`.
fn kraus_amplitude(tau: f64, n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (binomial(n, k) * tau.powi((n - k) as i32) * (1.0 - tau).powi(k as i32)).sqrt()
}

/// A pure-loss channel of power transmissivity `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    transmissivity: f64,
}

impl LossChannel {
    pub fn new(transmissivity: f64) -> Result<Self> {
        check_unit_interval("transmissivity", transmissivity)?;
        Ok(Self { transmissivity })
    }

    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }

    /// Kraus matrices `K_0 … K_cutoff` on a single mode of the given cutoff.
    pub fn kraus_operators(&self, cutoff: usize) -> Vec<DMatrix<f64>> {
        (0..=cutoff)
            .map(|k| {
                DMatrix::from_fn(cutoff + 1, cutoff + 1, |row, col| {
                    if col >= k && row == col - k {
                        kraus_amplitude(self.transmissivity, col, k)
                    } else {
                        0.0
                    }
                })
            })
            .collect()
    }

    /// `max |Σ_k K_k†K_k − 1|` entrywise.
    pub fn completeness_defect(&self, cutoff: usize) -> f64 {
        let d = cutoff + 1;
        let mut sum = DMatrix::<f64>::zeros(d, d);
        for k in self.kraus_operators(cutoff) {
            sum += k.transpose() * &k;
        }
        (sum - DMatrix::identity(d, d)).abs().max()
    }

    pub fn apply<S: QuantumState>(&self, state: &S, mode: usize) -> Result<DensityOperator> {
        pure_loss(state, mode, self.transmissivity)
    }
}

/// Applies pure loss of transmissivity `tau` to `mode`.
pub fn pure_loss<S: QuantumState>(state: &S, mode: usize, tau: f64) -> Result<DensityOperator> {
    check_unit_interval("transmissivity", tau)?;
    let rho = state.density();
    let space = rho.space().clone();
    space.check_mode(mode)?;
    if tau == 1.0 {
        return Ok(rho.into_owned());
    }
    let stride = space.stride(mode);
    let cutoff = space.cutoff(mode);
    let amps: Vec<Vec<f64>> = (0..=cutoff)
        .map(|n| (0..=n).map(|k| kraus_amplitude(tau, n, k)).collect())
        .collect();
    let d = space.dim();
    let src = rho.matrix();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        let nj = space.mode_occupation(j, mode);
        for i in 0..d {
            let v = src[(i, j)];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let ni = space.mode_occupation(i, mode);
            for k in 0..=ni.min(nj) {
                let w = amps[ni][k] * amps[nj][k];
                out[(i - k * stride, j - k * stride)] += v * w;
            }
        }
    }
    Ok(DensityOperator::from_parts(space, out))
}

/// Kraus branches of a pure state sent through loss.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausBranches {
    /// `K_k |ψ>` for `k = 0 … k_max`, unnormalized.
    pub branches: Vec<PureState>,
    /// `‖ψ‖² − Σ_k ‖K_k ψ‖²`, the weight in branches beyond `k_max`.
    pub residual: f64,
}

/// Splits `psi` into the unnormalized branches `K_k |ψ>` with `k ≤ k_max`.
/// `k_max` is clamped to the cutoff of `mode`.
pub fn loss_on_kraus_branches(
    psi: &PureState,
    mode: usize,
    tau: f64,
    k_max: usize,
) -> Result<KrausBranches> {
    check_unit_interval("transmissivity", tau)?;
    let space = psi.space().clone();
    space.check_mode(mode)?;
    let k_max = k_max.min(space.cutoff(mode));
    let stride = space.stride(mode);
    let amps = psi.amplitudes();
    let mut branches = Vec::with_capacity(k_max + 1);
    let mut kept = 0.0;
    for k in 0..=k_max {
        let mut out = vec![Complex64::new(0.0, 0.0); space.dim()];
        for (i, a) in amps.iter().enumerate() {
            let n = space.mode_occupation(i, mode);
            if n < k || a.norm_sqr() == 0.0 {
                continue;
            }
            out[i - k * stride] = a * kraus_amplitude(tau, n, k);
        }
        let b = PureState::from_parts(space.clone(), out);
        kept += b.norm_sq();
        branches.push(b);
        if tau == 1.0 {
            break;
        }
    }
    Ok(KrausBranches {
        branches,
        residual: (psi.norm_sq() - kept).max(0.0),
    })
}
