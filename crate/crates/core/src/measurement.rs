//! Heralded photon detection.
//!
//! Every detector here has a POVM that is diagonal in the Fock basis, so a
//! click pattern reduces to a weight `w(m)` per occupation of each measured
//! mode. An inefficient detector is a pure loss of transmissivity `τ_d`
//! followed by an ideal one, which folds into the weights:
//! `w_n(m) = C(m, n) τ^n (1−τ)^{m−n}` for a PNR count `n`, `(1−τ)^m` for an
//! off click and `1 − (1−τ)^m` for an on click.
//!
//! Measured modes are removed from the heralded state. Heralded outputs are
//! unnormalized; the returned probability is their squared norm or trace.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_unit_interval, Error, Result};
use crate::fock::{binomial, DensityOperator, FockSpace, PureState, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    /// Photon-number resolving.
    Pnr,
    /// Click / no-click.
    OnOff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub kind: DetectorKind,
    /// Detection efficiency `τ_d`.
    pub efficiency: f64,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, efficiency: f64) -> Result<Self> {
        check_unit_interval("efficiency", efficiency)?;
        Ok(Self { kind, efficiency })
    }

    pub fn ideal_pnr() -> Self {
        Self {
            kind: DetectorKind::Pnr,
            efficiency: 1.0,
        }
    }

    pub fn is_ideal_pnr(&self) -> bool {
        self.kind == DetectorKind::Pnr && self.efficiency == 1.0
    }

    /// Probability of `outcome` given `m` photons impinging, for `m = 0..=cutoff`.
    pub fn weights(&self, outcome: Outcome, cutoff: usize) -> Result<Vec<f64>> {
        check_unit_interval("efficiency", self.efficiency)?;
        let tau = self.efficiency;
        let miss = |m: usize| (1.0 - tau).powi(m as i32);
        let w = match (self.kind, outcome) {
            (DetectorKind::Pnr, Outcome::Photons(n)) => (0..=cutoff)
                .map(|m| {
                    if m < n {
                        0.0
                    } else {
                        binomial(m, n) * tau.powi(n as i32) * miss(m - n)
                    }
                })
                .collect(),
            (DetectorKind::OnOff, Outcome::Off) => (0..=cutoff).map(miss).collect(),
            (DetectorKind::OnOff, Outcome::On) => (0..=cutoff).map(|m| 1.0 - miss(m)).collect(),
            (kind, outcome) => {
                return Err(Error::PatternMismatch(format!(
                    "{outcome:?} is not an outcome of a {kind:?} detector"
                )))
            }
        };
        Ok(w)
    }

    /// Converts an ideal photon count into this detector's reading.
    pub fn outcome_for_count(&self, n: usize) -> Outcome {
        match self.kind {
            DetectorKind::Pnr => Outcome::Photons(n),
            DetectorKind::OnOff if n == 0 => Outcome::Off,
            DetectorKind::OnOff => Outcome::On,
        }
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self::ideal_pnr()
    }
}

/// Reading of one detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Photons(usize),
    On,
    Off,
}

/// One outcome per measured mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClickPattern(Vec<Outcome>);

impl ClickPattern {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        Self(outcomes)
    }

    /// PNR counts.
    pub fn from_counts(counts: &[usize]) -> Self {
        Self(counts.iter().map(|&n| Outcome::Photons(n)).collect())
    }

    /// The same nominal counts as read by `model`.
    pub fn for_detector(counts: &[usize], model: &DetectorModel) -> Self {
        Self(counts.iter().map(|&n| model.outcome_for_count(n)).collect())
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_modes(space: &FockSpace, modes: &[usize]) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        space.check_mode(m)?;
        if modes[..i].contains(&m) {
            return Err(Error::ModeCollision(m));
        }
    }
    Ok(())
}

fn remaining_space(space: &FockSpace, modes: &[usize]) -> FockSpace {
    if modes.len() == space.num_modes() {
        FockSpace::scalar()
    } else {
        space.without_modes(modes)
    }
}

/// `<occupation|_modes ψ>` on the remaining modes.
pub(crate) fn project_pure(psi: &PureState, modes: &[usize], occupation: &[usize]) -> Result<PureState> {
    let space = psi.space();
    check_modes(space, modes)?;
    let kept = space.subspace(modes);
    let target = kept.index_of(occupation)?;
    let rest = remaining_space(space, modes);
    let mut out = vec![Complex64::new(0.0, 0.0); rest.dim()];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        let (k, r) = space.split_index(i, &kept, modes, &rest);
        if k == target {
            out[r] = *a;
        }
    }
    Ok(PureState::from_parts(rest, out))
}

/// `Σ_m Π_j w_j(m_j) <m|ρ|m>` over the measured modes.
pub(crate) fn herald_diagonal(
    rho: &DensityOperator,
    modes: &[usize],
    weights: &[Vec<f64>],
) -> Result<DensityOperator> {
    let space = rho.space();
    check_modes(space, modes)?;
    if weights.len() != modes.len() {
        return Err(Error::PatternMismatch(format!(
            "{} weight vectors for {} modes",
            weights.len(),
            modes.len()
        )));
    }
    let kept = space.subspace(modes);
    let rest = remaining_space(space, modes);
    let w_kept: Vec<f64> = (0..kept.dim())
        .map(|k| {
            (0..modes.len())
                .map(|j| {
                    let n = kept.mode_occupation(k, j);
                    weights[j].get(n).copied().unwrap_or(0.0)
                })
                .product()
        })
        .collect();
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); kept.dim()];
    for i in 0..space.dim() {
        let (k, r) = space.split_index(i, &kept, modes, &rest);
        if w_kept[k] != 0.0 {
            groups[k].push((i, r));
        }
    }
    let src = rho.matrix();
    let mut out = DMatrix::<Complex64>::zeros(rest.dim(), rest.dim());
    for (k, g) in groups.iter().enumerate() {
        let w = w_kept[k];
        for &(i, a) in g {
            for &(j, b) in g {
                out[(a, b)] += src[(i, j)] * w;
            }
        }
    }
    Ok(DensityOperator::from_parts(rest, out))
}

/// Ideal PNR projection of one mode onto `n` photons.
pub fn project_pnr(state: &PureState, mode: usize, n: usize) -> Result<(PureState, f64)> {
    let out = project_pure(state, &[mode], &[n])?;
    let p = out.norm_sq();
    Ok((out, p))
}

/// Ideal PNR projection of one mode of a density operator.
pub fn project_pnr_density(rho: &DensityOperator, mode: usize, n: usize) -> Result<(DensityOperator, f64)> {
    rho.space().check_mode(mode)?;
    let cutoff = rho.space().cutoff(mode);
    if n > cutoff {
        return Err(Error::OccupationOutOfRange {
            mode,
            occupation: n,
            cutoff,
        });
    }
    let w = DetectorModel::ideal_pnr().weights(Outcome::Photons(n), cutoff)?;
    let out = herald_diagonal(rho, &[mode], &[w])?;
    let p = out.trace();
    Ok((out, p))
}

/// Ideal on-off POVM `{|0><0|, 1 − |0><0|}` on one mode.
pub fn measure_on_off<S: QuantumState>(state: &S, mode: usize, outcome: Outcome) -> Result<(DensityOperator, f64)> {
    let model = DetectorModel {
        kind: DetectorKind::OnOff,
        efficiency: 1.0,
    };
    detect(state, &[mode], &ClickPattern::new(vec![outcome]), &model)
}

/// Joint heralding of `modes` with `pattern` by detectors of the given model.
pub fn detect<S: QuantumState>(
    state: &S,
    modes: &[usize],
    pattern: &ClickPattern,
    model: &DetectorModel,
) -> Result<(DensityOperator, f64)> {
    if pattern.len() != modes.len() {
        return Err(Error::PatternMismatch(format!(
            "pattern of length {} for {} measured modes",
            pattern.len(),
            modes.len()
        )));
    }
    let space = state.fock_space();
    check_modes(space, modes)?;
    let weights = modes
        .iter()
        .zip(pattern.outcomes())
        .map(|(&m, &o)| model.weights(o, space.cutoff(m)))
        .collect::<Result<Vec<_>>>()?;
    let rho = state.density();
    let out = herald_diagonal(&rho, modes, &weights)?;
    let p = out.trace();
    Ok((out, p))
}

/// Ensemble form of [`detect`] for a pure input: the heralded operator is
/// `Σ_m |φ_m><φ_m|` with `φ_m = √w(m) <m|ψ>`. Zero branches are dropped.
pub fn detect_pure_branches(
    psi: &PureState,
    modes: &[usize],
    pattern: &ClickPattern,
    model: &DetectorModel,
) -> Result<Vec<PureState>> {
    if pattern.len() != modes.len() {
        return Err(Error::PatternMismatch(format!(
            "pattern of length {} for {} measured modes",
            pattern.len(),
            modes.len()
        )));
    }
    let space = psi.space();
    check_modes(space, modes)?;
    let weights = modes
        .iter()
        .zip(pattern.outcomes())
        .map(|(&m, &o)| model.weights(o, space.cutoff(m)))
        .collect::<Result<Vec<_>>>()?;
    let kept = space.subspace(modes);
    let rest = remaining_space(space, modes);
    let w_kept: Vec<f64> = (0..kept.dim())
        .map(|k| {
            let occ = kept.occupation(k);
            occ.iter().zip(&weights).map(|(&n, w)| w[n]).product()
        })
        .collect();
    let mut amps: Vec<Option<Vec<Complex64>>> = vec![None; kept.dim()];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let (k, r) = space.split_index(i, &kept, modes, &rest);
        if w_kept[k] == 0.0 {
            continue;
        }
        amps[k].get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); rest.dim()])[r] = a * w_kept[k].sqrt();
    }
    let branches = amps
        .into_iter()
        .flatten()
        .map(|v| PureState::from_parts(rest.clone(), v))
        .collect();
    Ok(branches)
}
