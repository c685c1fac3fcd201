use num_complex::Complex64;

use super::PureState;
use crate::error::{check_unit_interval, Error, Result};

/// `C(n, k)` in floating point.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0f64, |acc, k| acc * k as f64)
}

/// Photon-number-conserving blocks of the two-mode mixing unitary.
///
/// Creation operators transform as `a† → t a† − r b†`, `b† → r a† + t b†`
/// with `t = cos θ`, `r = sin θ`, so coherent amplitudes map as
/// `(u, v) → (t u + r v, t v − r u)`.
struct MixingBlocks {
    c1: usize,
    c2: usize,
    /// `blocks[N][p - lo][n - lo]` for total photon number `N`.
    blocks: Vec<Vec<Vec<f64>>>,
}

impl MixingBlocks {
    fn new(theta: f64, c1: usize, c2: usize) -> Self {
        let (r, t) = theta.sin_cos();
        let mut blocks = Vec::with_capacity(c1 + c2 + 1);
        for total in 0..=c1 + c2 {
            let (lo, hi) = Self::range(total, c1, c2);
            let size = hi + 1 - lo;
            let mut m = vec![vec![0.0; size]; size];
            for n in lo..=hi {
                let k = total - n;
                let norm_in = (factorial(n) * factorial(k)).sqrt();
                // (t a† − r b†)^n (r a† + t b†)^k
                for j in 0..=n {
                    let left = binomial(n, j) * t.powi(j as i32) * (-r).powi((n - j) as i32);
                    if left == 0.0 {
                        continue;
                    }
                    for l in 0..=k {
                        let p = j + l;
                        if p < lo || p > hi {
                            continue;
                        }
                        let right = binomial(k, l) * r.powi(l as i32) * t.powi((k - l) as i32);
                        let norm_out = (factorial(p) * factorial(total - p)).sqrt();
                        m[p - lo][n - lo] += left * right * norm_out / norm_in;
                    }
                }
            }
            blocks.push(m);
        }
        Self { c1, c2, blocks }
    }

    fn range(total: usize, c1: usize, c2: usize) -> (usize, usize) {
        (total.saturating_sub(c2), total.min(c1))
    }
}

/// Applies the mixing rotation by angle `theta` to modes `(m1, m2)`.
/// Returns the output and the norm pushed past the cutoff.
pub(crate) fn mix_modes(
    state: &PureState,
    m1: usize,
    m2: usize,
    theta: f64,
) -> Result<(PureState, f64)> {
    let space = state.space();
    space.check_mode(m1)?;
    space.check_mode(m2)?;
    if m1 == m2 {
        return Err(Error::ModeCollision(m1));
    }
    let (c1, c2) = (space.cutoff(m1), space.cutoff(m2));
    let (s1, s2) = (space.stride(m1), space.stride(m2));
    let blocks = MixingBlocks::new(theta, c1, c2);
    let before = state.norm_sq();

    let mut out = state.clone();
    let amps = state.amplitudes();
    let dst = out.amplitudes_mut();
    let mut buf_in = Vec::new();
    let mut buf_out = Vec::new();
    for base in 0..space.dim() {
        if space.mode_occupation(base, m1) != 0 || space.mode_occupation(base, m2) != 0 {
            continue;
        }
        for total in 0..=blocks.c1 + blocks.c2 {
            let (lo, hi) = MixingBlocks::range(total, blocks.c1, blocks.c2);
            buf_in.clear();
            let mut any = false;
            for n in lo..=hi {
                let a = amps[base + n * s1 + (total - n) * s2];
                any |= a.norm_sqr() != 0.0;
                buf_in.push(a);
            }
            if !any {
                continue;
            }
            let m = &blocks.blocks[total];
            buf_out.clear();
            for row in m {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, a) in row.iter().zip(&buf_in) {
                    acc += a * *w;
                }
                buf_out.push(acc);
            }
            for (p, v) in (lo..=hi).zip(&buf_out) {
                dst[base + p * s1 + (total - p) * s2] = *v;
            }
        }
    }
    let leaked = (before - out.norm_sq()).max(0.0);
    Ok((out, leaked))
}

/// Beamsplitter of power transmissivity `T` on modes `(m1, m2)`.
///
/// Coherent amplitudes map as `(u, v) → (√T u + √(1−T) v, √T v − √(1−T) u)`.
pub fn apply_beamsplitter(state: &PureState, m1: usize, m2: usize, t: f64) -> Result<PureState> {
    Ok(apply_beamsplitter_reporting(state, m1, m2, t)?.0)
}

/// As [`apply_beamsplitter`], also returning the norm lost past the cutoff.
pub fn apply_beamsplitter_reporting(
    state: &PureState,
    m1: usize,
    m2: usize,
    t: f64,
) -> Result<(PureState, f64)> {
    check_unit_interval("transmissivity", t)?;
    mix_modes(state, m1, m2, t.sqrt().acos())
}

/// Mixing rotation with an explicit angle; `θ = arccos √T` for a beamsplitter.
pub fn apply_mixing_angle(state: &PureState, m1: usize, m2: usize, theta: f64) -> Result<PureState> {
    Ok(mix_modes(state, m1, m2, theta)?.0)
}

/// `|n>_m → e^{inθ} |n>_m`.
pub fn apply_phase(state: &PureState, mode: usize, theta: f64) -> Result<PureState> {
    let space = state.space().clone();
    space.check_mode(mode)?;
    let mut out = state.clone();
    let phases: Vec<Complex64> = (0..=space.cutoff(mode))
        .map(|n| Complex64::from_polar(1.0, theta * n as f64))
        .collect();
    for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
        *a *= phases[space.mode_occupation(i, mode)];
    }
    Ok(out)
}

/// Multiplies the amplitude of `|n>_mode` by `factors[n]` (zero beyond the slice).
pub fn apply_diagonal(state: &PureState, mode: usize, factors: &[Complex64]) -> Result<PureState> {
    let space = state.space().clone();
    space.check_mode(mode)?;
    let mut out = state.clone();
    for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let n = space.mode_occupation(i, mode);
        *a *= factors.get(n).copied().unwrap_or(Complex64::new(0.0, 0.0));
    }
    Ok(out)
}
