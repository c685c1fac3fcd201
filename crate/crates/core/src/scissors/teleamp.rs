//! Tele-amplification with cat-state resources.
//!
//! The resource on `B` is the `L`-lobe cat `Σ_k ω^k |β ω^k>`, `ω = e^{2πi/L}`,
//! which tends to `|L−1>` as `β → 0`. Every lobe stays a product of coherent
//! states through the interferometer, so projecting the detectors onto a
//! click pattern `m` leaves
//!
//! `Σ_k ω^k P(β ω^k) |U_BB β ω^k>` with `P(z) = Π_p (a_p + b_p z)^{m_p} / √(m_p!)`
//!
//! on the output, where `a_p + b_p z` is the amplitude reaching detector `p`.
//! The sum over lobes keeps only the powers `z^j z^n` with `j + n + 1 ≡ 0
//! (mod L)`, which is evaluated exactly instead of summing nearly
//! cancelling coherent states.

use num_complex::Complex64;

use super::network::{Layout, INPUT, OUTPUT};
use crate::error::{check_unit_interval, Error, Result};
use crate::fock::{factorial, PureState};

fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::ParameterOutOfRange { name, value });
    }
    Ok(())
}

/// Cat amplitude `β = α √(T_A / ((1−T_A)(1−T_B)))` that makes the output lobes `gα`.
pub fn cat_amplitude(alpha: Complex64, t_a: f64, t_b: f64) -> Result<Complex64> {
    check_open_unit("t_a", t_a)?;
    check_open_unit("t_b", t_b)?;
    Ok(alpha * (t_a / ((1.0 - t_a) * (1.0 - t_b))).sqrt())
}

/// Gain `g = √(T_A T_B / ((1−T_A)(1−T_B)))` of tele-amplification.
pub fn teleamp_gain(t_a: f64, t_b: f64) -> Result<f64> {
    check_open_unit("t_a", t_a)?;
    check_open_unit("t_b", t_b)?;
    Ok((t_a * t_b / ((1.0 - t_a) * (1.0 - t_b))).sqrt())
}

/// Coherent amplitudes after the order-3 network, one set per lobe `k = 0…3`
/// of the 4-cat, in the order `(B, A, C, A', C')`.
pub fn teleamp_amplitudes(
    gamma: Complex64,
    alpha: Complex64,
    t_a: f64,
    t_b: f64,
) -> Result<Vec<[Complex64; 5]>> {
    let beta = cat_amplitude(alpha, t_a, t_b)?;
    let u = Layout::new(3)?.transfer_matrix(t_b, t_a)?;
    let order = [OUTPUT, INPUT, 2, 3, 4];
    Ok((0..4)
        .map(|k| {
            let z = beta * Complex64::i().powi(k);
            order.map(|m| u[(m, INPUT)] * gamma + u[(m, OUTPUT)] * z)
        })
        .collect())
}

/// `Σ_{n ≡ L−1 (mod L)} x^n / n!`.
fn residue_series(x: f64, lobes: usize) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0f64;
    for n in 0..2000 {
        if n > 0 {
            term *= x / n as f64;
        }
        if n % lobes == lobes - 1 {
            sum += term;
            if term < sum * 1e-17 && n as f64 > x {
                break;
            }
        }
    }
    sum
}

/// Heralded output of `L`-lobe cat tele-amplification for the detector
/// counts `counts` (detector order of the matching scissor network).
///
/// Returns the normalized output on `0..=cutoff` photons and the
/// single-pattern heralding probability.
pub fn teleamp_cat(
    lobes: usize,
    gamma: Complex64,
    beta: Complex64,
    t_a: f64,
    t_b: f64,
    counts: &[usize],
    cutoff: usize,
) -> Result<(PureState, f64)> {
    check_open_unit("t_a", t_a)?;
    check_open_unit("t_b", t_b)?;
    let layout = Layout::new(lobes.checked_sub(1).ok_or(Error::UnsupportedOrder(0))?)?;
    if counts.len() != layout.detector_modes.len() {
        return Err(Error::PatternMismatch(format!(
            "{} counts for {} detectors",
            counts.len(),
            layout.detector_modes.len()
        )));
    }
    if beta.norm() == 0.0 {
        return Err(Error::DegenerateCat);
    }
    let u = layout.transfer_matrix(t_b, t_a)?;
    // P(z) as coefficients in z.
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for (&det, &m) in layout.detector_modes.iter().zip(counts) {
        let a = u[(det, INPUT)] * gamma;
        let b = u[(det, OUTPUT)];
        for _ in 0..m {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (j, &p) in poly.iter().enumerate() {
                next[j] += p * a;
                next[j + 1] += p * b;
            }
            poly = next;
        }
        poly.iter_mut().for_each(|p| *p /= factorial(m).sqrt());
    }
    let ubb = u[(OUTPUT, OUTPUT)];
    let norm = (-gamma.norm_sqr() / 2.0).exp() / residue_series(beta.norm_sqr(), lobes).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for (n, amp) in amps.iter_mut().enumerate() {
        for (j, &p) in poly.iter().enumerate() {
            if (j + n + 1) % lobes == 0 {
                *amp += p * beta.powu((j + n) as u32) * ubb.powu(n as u32) / factorial(n).sqrt();
            }
        }
        *amp *= norm;
    }
    let out = PureState::from_coefficients(cutoff, &amps)?;
    let p = out.norm_sq();
    Ok((out.normalized()?, p))
}

/// 2-cat tele-amplification heralded on no photon at `A` and one at `C`.
pub fn teleamp_2cat(
    gamma: Complex64,
    beta: Complex64,
    t_a: f64,
    t_b: f64,
    cutoff: usize,
) -> Result<(PureState, f64)> {
    teleamp_cat(2, gamma, beta, t_a, t_b, &[0, 1], cutoff)
}

/// 4-cat tele-amplification heralded on `(A, A', C, C') = (0, 1, 1, 1)`.
pub fn teleamp_4cat(
    gamma: Complex64,
    beta: Complex64,
    t_a: f64,
    t_b: f64,
    cutoff: usize,
) -> Result<(PureState, f64)> {
    teleamp_cat(4, gamma, beta, t_a, t_b, &[0, 1, 1, 1], cutoff)
}

/// 8-cat tele-amplification through the order-7 network, heralded on
/// vacuum at `A` and single photons elsewhere.
pub fn teleamp_8cat(
    gamma: Complex64,
    beta: Complex64,
    t_b: f64,
    cutoff: usize,
) -> Result<(PureState, f64)> {
    check_unit_interval("t_b", t_b)?;
    teleamp_cat(8, gamma, beta, 0.5, t_b, &[0, 1, 1, 1, 1, 1, 1, 1], cutoff)
}
