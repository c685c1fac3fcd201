//! Fidelity, entropies, reverse coherent information and Gaussian
//! entanglement measures of two-mode states.
//!
//! Quadratures are `x = a + a†` and `p = −i(a − a†)`, so the vacuum has
//! identity covariance and entropies of Gaussian states follow from
//! `g(ν) = ((ν+1)/2) log₂((ν+1)/2) − ((ν−1)/2) log₂((ν−1)/2)`.

mod covariance;
mod geof;

pub use covariance::{covariance_matrix, gaussian_rci, symplectic_eigenvalues, CovarianceMatrix};
pub use geof::{deterministic_bound, gaussian_eof, lossy_epr_covariance};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, PureState, QuantumState};

/// Eigenvalues at or below this are dropped from entropy sums.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;

const TRACE_TOLERANCE: f64 = 1e-8;

/// `<target|ρ|target>` after normalizing both.
///
/// The spaces may have different cutoffs: target amplitudes beyond the
/// state's cutoff count toward the target's norm but meet no support.
pub fn fidelity<S: QuantumState>(state: &S, target: &PureState) -> Result<f64> {
    let rho = state.density();
    let space = rho.space();
    if target.space().num_modes() != space.num_modes() {
        return Err(Error::DimensionMismatch(format!(
            "target has {} modes, state has {}",
            target.space().num_modes(),
            space.num_modes()
        )));
    }
    let tr = rho.trace();
    let nt = target.norm_sq();
    if tr <= 0.0 || nt <= 0.0 {
        return Err(Error::ZeroProbability(tr.min(nt)));
    }
    let t: Vec<Complex64> = (0..space.dim())
        .map(|i| {
            target
                .amplitude(&space.occupation(i))
                .unwrap_or(Complex64::new(0.0, 0.0))
        })
        .collect();
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ti) in t.iter().enumerate() {
        if ti.norm_sqr() == 0.0 {
            continue;
        }
        for (j, tj) in t.iter().enumerate() {
            acc += ti.conj() * m[(i, j)] * tj;
        }
    }
    Ok((acc.re / (tr * nt)).clamp(0.0, 1.0))
}

/// Binary entropy `−Σ λ log₂ λ` of a spectrum, dropping eigenvalues at the floor.
fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > EIGENVALUE_FLOOR)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

fn check_normalized(rho: &DensityOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::NotNormalized(tr));
    }
    Ok(())
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    check_normalized(rho)?;
    Ok(spectrum_entropy(&rho.eigenvalues()))
}

/// Reverse coherent information `H(A) − H(AB)` of a two-mode state, with
/// `A` the first mode.
pub fn rci(rho: &DensityOperator) -> Result<f64> {
    check_two_mode(rho)?;
    check_normalized(rho)?;
    let h_ab = spectrum_entropy(&rho.eigenvalues());
    let h_a = spectrum_entropy(&rho.partial_trace(&[0])?.eigenvalues());
    Ok(h_a - h_ab)
}

fn check_two_mode(rho: &DensityOperator) -> Result<()> {
    if rho.space().num_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-mode state, got {} modes",
            rho.space().num_modes()
        )));
    }
    Ok(())
}

/// Entropy `g(ν)` of a single-mode thermal state with symplectic eigenvalue `ν`.
pub fn thermal_entropy(nu: f64) -> f64 {
    if nu <= 1.0 {
        return 0.0;
    }
    let up = (nu + 1.0) / 2.0;
    let down = (nu - 1.0) / 2.0;
    up * up.log2() - down * down.log2()
}

/// Entanglement figures of a heralded two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Gaussian entanglement of formation of the state's covariance, in ebits.
    pub geof: f64,
    pub rci: f64,
    pub gaussian_rci: f64,
    /// Heralding probability of the state.
    pub probability: f64,
}

impl EntanglementReport {
    /// Evaluates every figure on `rho`, which may be unnormalized.
    pub fn evaluate(rho: &DensityOperator, probability: f64) -> Result<Self> {
        let tr = rho.trace();
        if tr <= 0.0 {
            return Err(Error::ZeroProbability(tr));
        }
        let rho = rho.scaled(1.0 / tr);
        let cov = covariance_matrix(&rho)?;
        Ok(Self {
            geof: gaussian_eof(&cov)?,
            rci: rci(&rho)?,
            gaussian_rci: gaussian_rci(&cov)?,
            probability,
        })
    }
}

/// `Tr(ρ O)` for a product `O` of ladder operators, applied right to left.
/// Each factor is `(mode, creation)`. The operator acts on the full Fock
/// space, so the result is exact for `ρ` supported on its truncated space.
pub(crate) fn ladder_expectation(rho: &DensityOperator, ops: &[(usize, bool)]) -> Complex64 {
    let space = rho.space();
    let m: &DMatrix<Complex64> = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    'basis: for j in 0..space.dim() {
        let mut occ = space.occupation(j);
        let mut coeff = 1.0;
        for &(mode, create) in ops.iter().rev() {
            if create {
                occ[mode] += 1;
                coeff *= (occ[mode] as f64).sqrt();
            } else {
                if occ[mode] == 0 {
                    continue 'basis;
                }
                coeff *= (occ[mode] as f64).sqrt();
                occ[mode] -= 1;
            }
        }
        if let Ok(i) = space.index_of(&occ) {
            acc += m[(j, i)] * coeff;
        }
    }
    acc
}
