//! Closed-form scissor transforms.
//!
//! Every transform here is diagonal in the Fock basis,
//! `|n> → f_n |n>`, with a single-pattern prefactor folded into `f_n`.
//! The heralding probability is `credit · ‖out‖²`, where the credit counts
//! the click patterns that feed-forward maps onto the same state.

use num_complex::Complex64;

use super::spec::NlaSpec;
use crate::error::{Error, Result};
use crate::fock::{
    apply_diagonal, factorial, DensityOperator, PureState, DEFAULT_TOLERANCE,
};

/// Relative sign of the one-photon term heralded by a 1-scissor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// `|n> → factors[n] |n>`, zero beyond the listed factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTransform {
    factors: Vec<Complex64>,
    credit: f64,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl DiagonalTransform {
    pub fn new(factors: Vec<Complex64>, credit: f64) -> Self {
        Self { factors, credit }
    }

    /// Single-photon scissor: `√(1/(2(g²+1))) (c0 ± g c1)`, credit 2.
    pub fn one_scissor(gain: f64, sign: Sign) -> Self {
        let pre = (1.0 / (2.0 * (gain * gain + 1.0))).sqrt();
        let s = match sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        Self::new(vec![real(pre), real(s * pre * gain)], 2.0)
    }

    /// Three-photon scissor: `(√6/8)(1/(g²+1))^{3/2} Σ_{n≤3} gⁿ c_n`, credit 4.
    pub fn three_scissor(gain: f64) -> Self {
        let pre = 6f64.sqrt() / 8.0 * (1.0 / (gain * gain + 1.0)).powf(1.5);
        Self::new((0..=3).map(|n| real(pre * gain.powi(n))).collect(), 4.0)
    }

    /// `N` parallel 1-scissors with feed-forward on each:
    /// `(1/(2(g²+1)))^{N/2} N!/((N−n)! Nⁿ) gⁿ c_n`, credit `2^N`.
    pub fn parallel(spec: NlaSpec) -> Self {
        let n_sc = spec.scissors();
        let g = spec.gain();
        let pre = (1.0 / (2.0 * (g * g + 1.0))).powf(n_sc as f64 / 2.0);
        let factors = (0..=n_sc)
            .map(|n| {
                let distortion =
                    factorial(n_sc) / (factorial(n_sc - n) * (n_sc as f64).powi(n as i32));
                real(pre * distortion * g.powi(n as i32))
            })
            .collect();
        Self::new(factors, 2f64.powi(n_sc as i32))
    }

    /// Ideal amplification `gⁿ` up to `cutoff`, credit 1.
    pub fn ideal(gain: f64, cutoff: usize) -> Self {
        Self::new((0..=cutoff).map(|n| real(gain.powi(n as i32))).collect(), 1.0)
    }

    pub fn factors(&self) -> &[Complex64] {
        &self.factors
    }

    pub fn credit(&self) -> f64 {
        self.credit
    }

    /// Applies the transform to `mode`; returns the unnormalized output and
    /// the heralding probability `credit · ‖out‖² / ‖in‖²`.
    pub fn apply(&self, psi: &PureState, mode: usize) -> Result<(PureState, f64)> {
        let out = apply_diagonal(psi, mode, &self.factors)?;
        let norm_in = psi.norm_sq();
        if norm_in <= 0.0 {
            return Err(Error::ZeroProbability(norm_in));
        }
        let p = self.credit * out.norm_sq() / norm_in;
        Ok((out, p))
    }

    /// Applies the transform to every branch of `ρ = Σ |ψ_i><ψ_i|`.
    /// Returns the single-pattern heralded operator and the credited probability.
    pub fn apply_branches(&self, branches: &[PureState], mode: usize) -> Result<(DensityOperator, f64)> {
        let outs = branches
            .iter()
            .map(|b| apply_diagonal(b, mode, &self.factors))
            .collect::<Result<Vec<_>>>()?;
        let rho = DensityOperator::from_ensemble(&outs)?;
        let norm_in: f64 = branches.iter().map(|b| b.norm_sq()).sum();
        if norm_in <= 0.0 {
            return Err(Error::ZeroProbability(norm_in));
        }
        let p = self.credit * rho.trace() / norm_in;
        Ok((rho, p))
    }
}

fn single_mode(psi: &PureState) -> Result<()> {
    if psi.space().num_modes() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a single-mode state, got {} modes",
            psi.space().num_modes()
        )));
    }
    Ok(())
}

/// Ideal noiseless amplification `c_n → gⁿ c_n` of a single-mode state.
///
/// Fails with `CutoffTooSmall` when the amplified top Fock level carries
/// more than the default tolerance of the output norm.
pub fn ideal_nla(psi: &PureState, gain: f64) -> Result<PureState> {
    single_mode(psi)?;
    let cutoff = psi.space().cutoff(0);
    let out = apply_diagonal(psi, 0, DiagonalTransform::ideal(gain, cutoff).factors())?;
    let total = out.norm_sq();
    let top = out.amplitudes()[cutoff].norm_sqr();
    if total > 0.0 && top / total > DEFAULT_TOLERANCE {
        return Err(Error::CutoffTooSmall {
            leakage: top / total,
            tolerance: DEFAULT_TOLERANCE,
        });
    }
    Ok(out)
}

/// Single-photon scissor on a single-mode state.
pub fn t1_apply(psi: &PureState, gain: f64, sign: Sign) -> Result<(PureState, f64)> {
    single_mode(psi)?;
    DiagonalTransform::one_scissor(gain, sign).apply(psi, 0)
}

/// Three-photon scissor on a single-mode state.
pub fn t3_apply(psi: &PureState, gain: f64) -> Result<(PureState, f64)> {
    single_mode(psi)?;
    DiagonalTransform::three_scissor(gain).apply(psi, 0)
}

/// `N` parallel 1-scissors on a single-mode state.
pub fn tn_parallel(psi: &PureState, gain: f64, scissors: usize) -> Result<(PureState, f64)> {
    single_mode(psi)?;
    DiagonalTransform::parallel(NlaSpec::new(scissors, gain)?).apply(psi, 0)
}

/// Two-photon scissor acting on the coherent state `|γ>`:
/// `γ (√2/8)(1/(g²+1)) e^{−|γ|²/2} (|0> + gγ|1> + (g²γ²/√2)|2>)`, credit 4.
pub fn t2_coherent(gamma: Complex64, gain: f64, cutoff: usize) -> Result<(PureState, f64)> {
    if cutoff < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "cutoff",
            value: cutoff as f64,
        });
    }
    let pre = gamma * (2f64.sqrt() / 8.0) / (gain * gain + 1.0) * (-gamma.norm_sqr() / 2.0).exp();
    let gg = gamma * gain;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    coeffs[0] = pre;
    coeffs[1] = pre * gg;
    coeffs[2] = pre * gg * gg / 2f64.sqrt();
    let out = PureState::from_coefficients(cutoff, &coeffs)?;
    let p = 4.0 * out.norm_sq();
    Ok((out, p))
}
