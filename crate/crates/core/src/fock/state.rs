use num_complex::Complex64;

use super::{DensityOperator, FockSpace};
use crate::error::{Error, Result};

/// Default truncation tolerance used by the state constructors.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A pure state, possibly unnormalized, on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: FockSpace,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(space: FockSpace, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amps.len(),
                space.dim()
            )));
        }
        Ok(Self { space, amps })
    }

    pub(crate) fn from_parts(space: FockSpace, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), space.dim());
        Self { space, amps }
    }

    /// The zero vector.
    pub fn zeros(space: FockSpace) -> Self {
        let dim = space.dim();
        Self {
            space,
            amps: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Single-mode state from Fock coefficients `c_0, c_1, ...`.
    pub fn from_coefficients(cutoff: usize, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() > cutoff + 1 {
            return Err(Error::OccupationOutOfRange {
                mode: 0,
                occupation: coeffs.len() - 1,
                cutoff,
            });
        }
        let space = FockSpace::new(vec![cutoff])?;
        let mut amps = vec![Complex64::new(0.0, 0.0); space.dim()];
        amps[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Result<Complex64> {
        Ok(self.amps[self.space.index_of(occupation)?])
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Copy scaled to unit norm. Fails on a zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n < 1e-300 {
            return Err(Error::ZeroProbability(n));
        }
        Ok(self.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&mut self, factor: Complex64, other: &PureState) -> Result<()> {
        self.check_same_space(other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
        Ok(())
    }

    pub(crate) fn check_same_space(&self, other: &PureState) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(format!(
                "spaces {:?} and {:?} differ",
                self.space.cutoffs(),
                other.space.cutoffs()
            )));
        }
        Ok(())
    }

    /// `self ⊗ other`, modes of `self` first.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let space = self.space.concat(&other.space);
        let mut amps = Vec::with_capacity(space.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { space, amps }
    }

    /// `|ψ><ψ|`.
    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    /// Population sitting in the top Fock level of each mode, summed over modes.
    pub fn truncation_leakage(&self) -> f64 {
        let space = &self.space;
        let mut total = 0.0;
        for m in 0..space.num_modes() {
            let top = space.cutoff(m);
            total += self
                .amps
                .iter()
                .enumerate()
                .filter(|(i, _)| space.mode_occupation(*i, m) == top)
                .map(|(_, a)| a.norm_sqr())
                .sum::<f64>();
        }
        total
    }

    /// `<n_mode>` for this (possibly unnormalized) vector.
    pub fn mean_photons(&self, mode: usize) -> Result<f64> {
        self.space.check_mode(mode)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| self.space.mode_occupation(i, mode) as f64 * a.norm_sqr())
            .sum())
    }

    /// `<N_total>`.
    pub fn mean_total_photons(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| self.space.total_photons(i) as f64 * a.norm_sqr())
            .sum()
    }

    /// Re-expresses the state on a space with the same number of modes but
    /// different cutoffs. Fails if amplitude would be dropped.
    pub fn embed(&self, space: &FockSpace) -> Result<PureState> {
        if space.num_modes() != self.space.num_modes() {
            return Err(Error::DimensionMismatch(
                "embedding requires equal mode counts".into(),
            ));
        }
        let mut out = PureState::zeros(space.clone());
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let j = space.index_of(&self.space.occupation(i))?;
            out.amps[j] = *a;
        }
        Ok(out)
    }

    /// Rotates the global phase so that the first nonzero amplitude is real
    /// and positive.
    pub(crate) fn fix_global_phase(mut self) -> Self {
        if let Some(first) = self.amps.iter().find(|a| a.norm() > 1e-300) {
            let phase = first.conj() / first.norm();
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        self
    }
}

/// `|n_0, n_1, ...>`.
pub fn fock_state(space: &FockSpace, occupation: &[usize]) -> Result<PureState> {
    let idx = space.index_of(occupation)?;
    let mut s = PureState::zeros(space.clone());
    s.amps[idx] = Complex64::new(1.0, 0.0);
    Ok(s)
}

/// Places single-mode Fock coefficients on `mode`, vacuum elsewhere.
fn single_mode_on(space: &FockSpace, mode: usize, coeffs: &[Complex64]) -> Result<PureState> {
    space.check_mode(mode)?;
    let mut s = PureState::zeros(space.clone());
    let stride = space.stride(mode);
    for (n, c) in coeffs.iter().enumerate().take(space.cutoff(mode) + 1) {
        s.amps[n * stride] = *c;
    }
    Ok(s)
}

/// Coherent state `|γ>` on `mode` with the default truncation tolerance.
pub fn coherent_state(space: &FockSpace, mode: usize, gamma: Complex64) -> Result<PureState> {
    coherent_state_with_tolerance(space, mode, gamma, DEFAULT_TOLERANCE)
}

/// Coherent state with Poissonian amplitudes `e^{-|γ|²/2} γ^n / √n!`.
/// Amplitudes are not renormalized after truncation.
pub fn coherent_state_with_tolerance(
    space: &FockSpace,
    mode: usize,
    gamma: Complex64,
    tolerance: f64,
) -> Result<PureState> {
    space.check_mode(mode)?;
    let coeffs = coherent_coefficients(gamma, space.cutoff(mode));
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let leakage = (1.0 - kept).max(0.0);
    if leakage > tolerance {
        return Err(Error::CutoffTooSmall { leakage, tolerance });
    }
    single_mode_on(space, mode, &coeffs)
}

/// Poissonian amplitudes for `n = 0..=cutoff`.
pub fn coherent_coefficients(gamma: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-gamma.norm_sqr() / 2.0).exp(), 0.0);
    out.push(c);
    for n in 1..=cutoff {
        c = c * gamma / (n as f64).sqrt();
        out.push(c);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatParity {
    Even,
    Odd,
}

/// Two-lobe cat `|β> ± |-β>` on `mode`.
pub fn cat2_state(
    space: &FockSpace,
    mode: usize,
    beta: Complex64,
    parity: CatParity,
) -> Result<PureState> {
    let residue = match parity {
        CatParity::Even => 0,
        CatParity::Odd => 1,
    };
    cat_state(space, mode, beta, 2, residue, DEFAULT_TOLERANCE)
}

/// Four-lobe cat `Σ_k i^{-rk} |β i^k>` on `mode`; Fock support is `n ≡ r (mod 4)`.
pub fn cat4_state(space: &FockSpace, mode: usize, beta: Complex64, residue: usize) -> Result<PureState> {
    cat_state(space, mode, beta, 4, residue, DEFAULT_TOLERANCE)
}

/// Ring cat `Σ_k ω^{-rk} |β ω^k>` with `ω = e^{2πi/lobes}`.
///
/// The superposition collapses to `Σ_{n ≡ r} β^n/√n! |n>`, which is what is
/// evaluated; the norm is taken from the untruncated series so truncation
/// shows up as leakage rather than being hidden by renormalization.
pub fn cat_state(
    space: &FockSpace,
    mode: usize,
    beta: Complex64,
    lobes: usize,
    residue: usize,
    tolerance: f64,
) -> Result<PureState> {
    space.check_mode(mode)?;
    if lobes == 0 || residue >= lobes {
        return Err(Error::ParameterOutOfRange {
            name: "residue",
            value: residue as f64,
        });
    }
    let cutoff = space.cutoff(mode);
    let x = beta.norm_sqr();
    if beta.norm() == 0.0 {
        if residue == 0 {
            return fock_state(space, &vacuum_with(space, mode, 0));
        }
        return Err(Error::DegenerateCat);
    }

    // Unnormalized amplitudes β^n/√n! and the full-series norm.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    let mut a = Complex64::new(1.0, 0.0);
    let mut term = 1.0f64;
    let mut full = 0.0f64;
    let mut kept = 0.0f64;
    let mut n = 0usize;
    loop {
        if n > 0 {
            a = a * beta / (n as f64).sqrt();
            term *= x / n as f64;
        }
        if n % lobes == residue {
            full += term;
            if n <= cutoff {
                coeffs[n] = a;
                kept += term;
            }
        }
        if n > cutoff && n as f64 > x && term <= full * 1e-20 {
            break;
        }
        n += 1;
        if n > 100_000 {
            return Err(Error::ConvergenceFailure("cat norm series".into()));
        }
    }
    if full <= 0.0 || !full.is_finite() {
        return Err(Error::DegenerateCat);
    }
    let leakage = 1.0 - kept / full;
    if leakage > tolerance {
        return Err(Error::CutoffTooSmall { leakage, tolerance });
    }
    let scale = 1.0 / full.sqrt();
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(single_mode_on(space, mode, &coeffs)?.fix_global_phase())
}

fn vacuum_with(space: &FockSpace, mode: usize, n: usize) -> Vec<usize> {
    let mut occ = vec![0; space.num_modes()];
    occ[mode] = n;
    occ
}

/// Two-mode squeezed vacuum `√(1-χ²) Σ χ^n |nn>` with both modes cut at `cutoff`.
pub fn epr_state(chi: f64, cutoff: usize) -> Result<PureState> {
    epr_state_with_tolerance(chi, cutoff, DEFAULT_TOLERANCE)
}

pub fn epr_state_with_tolerance(chi: f64, cutoff: usize, tolerance: f64) -> Result<PureState> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::ParameterOutOfRange {
            name: "chi",
            value: chi,
        });
    }
    let space = FockSpace::uniform(2, cutoff)?;
    let leakage = chi.powi(2 * (cutoff as i32 + 1));
    if leakage > tolerance {
        return Err(Error::CutoffTooSmall { leakage, tolerance });
    }
    let mut s = PureState::zeros(space.clone());
    let norm = (1.0 - chi * chi).sqrt();
    for n in 0..=cutoff {
        let idx = space.index_of(&[n, n])?;
        s.amps[idx] = Complex64::new(norm * chi.powi(n as i32), 0.0);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fock_state_basics() {
        let s1 = FockSpace::uniform(1, 3).unwrap();
        let k = fock_state(&s1, &[3]).unwrap();
        assert_eq!(k.norm_sq(), 1.0);
        assert_eq!(k.amplitude(&[3]).unwrap(), c(1.0));
        assert!(matches!(
            fock_state(&s1, &[4]),
            Err(Error::OccupationOutOfRange { .. })
        ));
        let s2 = FockSpace::uniform(2, 2).unwrap();
        let k = fock_state(&s2, &[0, 1]).unwrap();
        assert_eq!(k.amplitude(&[0, 1]).unwrap(), c(1.0));
    }

    #[test]
    fn coherent_amplitudes() {
        let s = FockSpace::uniform(1, 10).unwrap();
        let v = coherent_state(&s, 0, c(0.0)).unwrap();
        assert_eq!(v.amplitude(&[0]).unwrap(), c(1.0));
        let g = coherent_state(&s, 0, c(0.1)).unwrap();
        assert!((g.amplitudes()[0].re - (-0.005f64).exp()).abs() < 1e-15);
        assert!((g.amplitudes()[0].re - 0.995012).abs() < 1e-6);
        assert!((g.amplitudes()[1].re - 0.0995012).abs() < 1e-7);
        assert!(g.truncation_leakage() < 1e-12);
        let small = FockSpace::uniform(1, 3).unwrap();
        assert!(matches!(
            coherent_state(&small, 0, c(2.0)),
            Err(Error::CutoffTooSmall { .. })
        ));
        let loose = coherent_state_with_tolerance(&small, 0, c(2.0), 1.0).unwrap();
        assert!(loose.truncation_leakage() > 0.1);
    }

    #[test]
    fn cat_parity_and_limits() {
        let s = FockSpace::uniform(1, 22).unwrap();
        let odd = cat2_state(&s, 0, c(1.0), CatParity::Odd).unwrap();
        for n in [0, 2, 4] {
            assert_eq!(odd.amplitudes()[n], c(0.0));
        }
        assert!((odd.norm_sq() - 1.0).abs() < 1e-12);
        let even0 = cat2_state(&s, 0, c(0.0), CatParity::Even).unwrap();
        assert_eq!(even0.amplitudes()[0], c(1.0));
        assert_eq!(
            cat2_state(&s, 0, c(0.0), CatParity::Odd),
            Err(Error::DegenerateCat)
        );
        let small = cat2_state(&s, 0, c(1e-3), CatParity::Odd).unwrap();
        assert!(small.amplitudes()[1].norm_sqr() >= 1.0 - 1e-5);

        let c3 = cat4_state(&s, 0, c(1e-2), 3).unwrap();
        assert!(c3.amplitudes()[3].norm_sqr() >= 1.0 - 1e-3);
        let c2 = cat4_state(&s, 0, c(1e-2), 2).unwrap();
        assert!(c2.amplitudes()[2].norm_sqr() >= 1.0 - 1e-3);
        let big = cat4_state(&s, 0, c(1.3), 3).unwrap();
        for n in [0, 1, 2, 4, 5, 6] {
            assert_eq!(big.amplitudes()[n], c(0.0));
        }
        assert_eq!(cat4_state(&s, 0, c(0.0), 3), Err(Error::DegenerateCat));
    }

    #[test]
    fn cat4_norm_matches_closed_form() {
        // residue-3 norm: Σ_{n≡3} x^n/n! = (sinh x - sin x)/2
        let s = FockSpace::uniform(1, 30).unwrap();
        let beta = 1.1f64;
        let st = cat4_state(&s, 0, c(beta), 3).unwrap();
        let x = beta * beta;
        let expect = x.powi(3) / 6.0 / ((x.sinh() - x.sin()) / 2.0);
        assert!((st.amplitudes()[3].norm_sqr() - expect).abs() < 1e-12);
    }

    #[test]
    fn epr_amplitudes() {
        let e = epr_state(0.0, 3).unwrap();
        assert_eq!(e.amplitude(&[0, 0]).unwrap(), c(1.0));
        let e = epr_state(0.3, 12).unwrap();
        let a11 = e.amplitude(&[1, 1]).unwrap().re;
        assert!((a11 - (1.0f64 - 0.09).sqrt() * 0.3).abs() < 1e-15);
        assert!((a11 - 0.28618).abs() < 1e-5);
        let nbar = e.mean_photons(0).unwrap();
        assert!((nbar - 0.09 / 0.91).abs() < 1e-10);
        assert!(matches!(epr_state(0.3, 5), Err(Error::CutoffTooSmall { .. })));
        assert!(epr_state(1.0, 5).is_err());
    }

    #[test]
    fn leakage_of_finite_support_is_zero() {
        let s = FockSpace::uniform(1, 5).unwrap();
        assert_eq!(fock_state(&s, &[3]).unwrap().truncation_leakage(), 0.0);
    }
}
