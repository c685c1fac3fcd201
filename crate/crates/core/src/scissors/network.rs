//! Linear-optical scissor networks and their heralded action.
//!
//! Mode layout:
//!
//! * order 1: `[A, B, C]`. Gain beamsplitter `B–C`, then 50:50 on `A–C`.
//!   Detectors on `(A, C)`.
//! * order 3 (and 2): `[A, B, C, A', C']`. The order-1 network followed by
//!   50:50 splits `A → A'`, `C → C'`, a π/2 shift on `A'` and a 50:50 on
//!   `A'–C'`. Detectors on `(A, A', C, C')`.
//! * order 7: `[A, B, C, A', C', A2, C2, A2', C2']`. After the gain
//!   beamsplitter, `A` and `C` are split 50:50 into a second branch, `C2`
//!   takes a π/4 shift, and each branch runs the order-3 detection stage.
//!   Detectors on `(A, A', C, C', A2, A2', C2, C2')`.
//!
//! `A` takes the input, `B` the resource Fock state and is the output. On
//! pattern `(0,1,1,1)` the order-3 network heralds `−T₃|ψ>`, a global sign.
//! An accepted pattern has one empty detector and a single photon in each
//! of the others. Each pattern is followed by a phase correction
//! `e^{iφ n̂}` on the output so that all patterns herald the same state.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::spec::ScissorSpec;
use crate::error::{Error, Result};
use crate::fock::{binomial, evolve_fock, hermitian_eigen, two_mode_input_amplitude, Circuit, DensityOperator, Element, FockSpace, PureState};
use crate::measurement::{detect_pure_branches, ClickPattern};

pub(crate) const INPUT: usize = 0;
pub(crate) const OUTPUT: usize = 1;

/// One accepted click pattern and its feed-forward phase.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldPattern {
    /// Photon counts on the detector modes, in detector order.
    pub counts: Vec<usize>,
    /// Phase `φ` of the correction `e^{iφ n̂}` applied to the output.
    pub correction: f64,
}

/// A scissor interferometer with its heralding rules.
#[derive(Debug, Clone, PartialEq)]
pub struct ScissorCircuit {
    spec: ScissorSpec,
    circuit: Circuit,
    detector_modes: Vec<usize>,
    patterns: Vec<HeraldPattern>,
}

/// Appends the order-3 detection stage on `(a, c, a2, c2)`.
fn three_stage(c: &mut Circuit, a: usize, cm: usize, a2: usize, c2: usize, t_a: f64) -> Result<()> {
    c.beamsplitter(a, cm, t_a)?
        .beamsplitter(a, a2, 0.5)?
        .beamsplitter(cm, c2, 0.5)?
        .phase(a2, FRAC_PI_2)?
        .beamsplitter(a2, c2, 0.5)?;
    Ok(())
}

/// Mode count and detector order of a network.
pub(crate) struct Layout {
    order: usize,
    pub(crate) num_modes: usize,
    pub(crate) detector_modes: Vec<usize>,
}

impl Layout {
    pub(crate) fn new(order: usize) -> Result<Self> {
        let (num_modes, detector_modes) = match order {
            1 => (3, vec![0, 2]),
            3 => (5, vec![0, 3, 2, 4]),
            7 => (9, vec![0, 3, 2, 4, 5, 7, 6, 8]),
            other => return Err(Error::UnsupportedOrder(other)),
        };
        Ok(Self {
            order,
            num_modes,
            detector_modes,
        })
    }

    /// Appends the lossless network with gain transmissivity `eta` and input
    /// splitting transmissivity `t_a` (1/2 for the scissors).
    pub(crate) fn append(&self, c: &mut Circuit, eta: f64, t_a: f64) -> Result<()> {
        c.beamsplitter(OUTPUT, 2, eta)?;
        match self.order {
            1 => {
                c.beamsplitter(INPUT, 2, t_a)?;
            }
            3 => three_stage(c, INPUT, 2, 3, 4, t_a)?,
            _ => {
                c.beamsplitter(INPUT, 5, 0.5)?
                    .beamsplitter(2, 6, 0.5)?
                    .phase(6, FRAC_PI_4)?;
                three_stage(c, INPUT, 2, 3, 4, t_a)?;
                three_stage(c, 5, 6, 7, 8, t_a)?;
            }
        }
        Ok(())
    }

    /// Transfer matrix of the lossless network.
    pub(crate) fn transfer_matrix(&self, eta: f64, t_a: f64) -> Result<DMatrix<Complex64>> {
        let mut c = Circuit::new(FockSpace::uniform(self.num_modes, 1)?);
        self.append(&mut c, eta, t_a)?;
        c.transfer_matrix()
    }
}

/// Builds the interferometer for `spec`.
///
/// `input_cutoff` sizes the Fock space of the returned [`Circuit`] so that a
/// dense simulation of any input up to that cutoff is exact: the resource
/// mode never holds more than the resource photons, and no other mode can
/// hold more than the total photon number.
pub fn build_scissor_circuit(spec: &ScissorSpec, input_cutoff: usize) -> Result<ScissorCircuit> {
    if input_cutoff == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "input_cutoff",
            value: 0.0,
        });
    }
    let r = spec.resource_photons();
    let layout = Layout::new(spec.network_order())?;
    let mut cutoffs = vec![input_cutoff + r; layout.num_modes];
    cutoffs[OUTPUT] = r;
    let mut c = Circuit::new(FockSpace::new(cutoffs)?);
    if spec.resource_efficiency() < 1.0 {
        c.loss(OUTPUT, spec.resource_efficiency())?;
    }
    layout.append(&mut c, spec.transmissivity(), 0.5)?;
    let detector_modes = layout.detector_modes;
    let mut out = ScissorCircuit {
        spec: *spec,
        circuit: c,
        detector_modes,
        patterns: Vec::new(),
    };
    out.patterns = out.calibrate_patterns()?;
    Ok(out)
}

/// Snaps `phi` to a multiple of π/4 when it is one up to round-off.
fn snap_phase(phi: f64) -> f64 {
    let step = FRAC_PI_4;
    let k = (phi / step).round();
    let snapped = if (phi - k * step).abs() < 1e-9 { k * step } else { phi };
    snapped.rem_euclid(2.0 * PI)
}

impl ScissorCircuit {
    pub fn spec(&self) -> &ScissorSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn input_mode(&self) -> usize {
        INPUT
    }

    pub fn output_mode(&self) -> usize {
        OUTPUT
    }

    pub fn detector_modes(&self) -> &[usize] {
        &self.detector_modes
    }

    pub fn patterns(&self) -> &[HeraldPattern] {
        &self.patterns
    }

    /// Largest input photon number the dense circuit space holds exactly.
    pub fn input_cutoff(&self) -> usize {
        self.circuit.space().cutoff(INPUT) - self.spec.resource_photons()
    }

    /// Transfer matrix of the lossless part of the network.
    pub fn transfer_matrix(&self) -> Result<DMatrix<Complex64>> {
        let mut lossless = Circuit::new(self.circuit.space().clone());
        for el in self.circuit.elements() {
            if !matches!(el, Element::Loss { .. }) {
                lossless.push(*el)?;
            }
        }
        lossless.transfer_matrix()
    }

    /// `(photons entering the network, amplitude)` for each resource-loss branch.
    pub fn resource_branches(&self) -> Vec<(usize, f64)> {
        let r = self.spec.resource_photons();
        let tau = self.spec.resource_efficiency();
        (0..=r)
            .rev()
            .map(|kept| {
                let lost = r - kept;
                let w = binomial(r, lost) * tau.powi(kept as i32) * (1.0 - tau).powi(lost as i32);
                (kept, w.sqrt())
            })
            .filter(|&(_, a)| a > 0.0)
            .collect()
    }

    fn unit_patterns(&self) -> Vec<Vec<usize>> {
        let d = self.detector_modes.len();
        (0..d)
            .map(|empty| (0..d).map(|j| usize::from(j != empty)).collect())
            .collect()
    }

    /// Phase corrections that align every pattern with the first one,
    /// fitted on the lossless network with ideal detectors. The input photon
    /// numbers `n0` and `n0 + 1` are the lowest two that herald anything.
    fn calibrate_patterns(&self) -> Result<Vec<HeraldPattern>> {
        let u = self.transfer_matrix()?;
        let r = self.spec.resource_photons();
        let clicks = self.detector_modes.len() - 1;
        let n0 = clicks.saturating_sub(r);
        let units = self.unit_patterns();
        let mut amps = vec![[Complex64::new(0.0, 0.0); 2]; units.len()];
        for (slot, n) in [n0, n0 + 1].into_iter().enumerate() {
            let mut input = vec![0; u.nrows()];
            input[INPUT] = n;
            input[OUTPUT] = r;
            for (occ, a) in evolve_fock(&u, &input)?.amplitudes() {
                let counts: Vec<usize> = self.detector_modes.iter().map(|&m| occ[m]).collect();
                if let Some(p) = units.iter().position(|c| *c == counts) {
                    amps[p][slot] += a;
                }
            }
        }
        let phase = |a: &[Complex64; 2]| {
            if a[0].norm() > 0.0 && a[1].norm() > 0.0 {
                Some((a[1] / a[0]).arg())
            } else {
                None
            }
        };
        let reference = phase(&amps[0]).unwrap_or(0.0);
        Ok(units
            .into_iter()
            .zip(&amps)
            .map(|(counts, a)| HeraldPattern {
                counts,
                correction: phase(a).map_or(0.0, |p| snap_phase(reference - p)),
            })
            .collect())
    }

    /// Kraus representation of the heralded map from the input mode to the
    /// output mode, for inputs with at most `input_cutoff` photons.
    pub fn heralding_map(&self, input_cutoff: usize) -> Result<HeraldingMap> {
        let u = self.transfer_matrix()?;
        let r = self.spec.resource_photons();
        let model = self.spec.detector();
        let max_photons = input_cutoff + r;
        let ideal = model.is_ideal_pnr();
        // weights[p][j][m]: probability that detector j reads pattern p's outcome with m photons.
        let weights: Vec<Vec<Vec<f64>>> = self
            .patterns
            .iter()
            .map(|p| {
                p.counts
                    .iter()
                    .map(|&n| model.weights(model.outcome_for_count(n), max_photons))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        // Raw Kraus columns per pattern, keyed by (resource branch, detector occupation).
        type Columns = BTreeMap<(usize, Vec<usize>), Vec<Complex64>>;
        let mut raw: Vec<Columns> = vec![BTreeMap::new(); self.patterns.len()];
        for (kept, amp) in self.resource_branches() {
            let mut input = vec![0; u.nrows()];
            input[OUTPUT] = kept;
            for n in 0..=input_cutoff {
                input[INPUT] = n;
                for (occ, a) in self.outputs(&u, &input, ideal)? {
                    let m: Vec<usize> = self.detector_modes.iter().map(|&d| occ[d]).collect();
                    let b = occ[OUTPUT];
                    for (p, pattern) in self.patterns.iter().enumerate() {
                        let w: f64 = m.iter().enumerate().map(|(j, &k)| weights[p][j][k]).product();
                        if w == 0.0 {
                            continue;
                        }
                        let phase = Complex64::from_polar(1.0, pattern.correction * b as f64);
                        let col = raw[p]
                            .entry((kept, m.clone()))
                            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); input_cutoff + 1]);
                        col[n] += a * phase * (amp * w.sqrt());
                    }
                }
            }
        }
        let per_pattern = raw
            .into_iter()
            .map(|cols| compress_kraus(cols, r, input_cutoff))
            .collect::<Result<Vec<_>>>()?;
        Ok(HeraldingMap {
            input_cutoff,
            output_cutoff: r,
            kraus: per_pattern,
        })
    }

    /// Output occupations and amplitudes of `U |input>`. With ideal PNR
    /// detectors only the accepted patterns matter, and their amplitudes are
    /// computed one by one.
    fn outputs(
        &self,
        u: &DMatrix<Complex64>,
        input: &[usize],
        ideal: bool,
    ) -> Result<Vec<(Vec<usize>, Complex64)>> {
        if !ideal {
            return Ok(evolve_fock(u, input)?.amplitudes());
        }
        let total = input[INPUT] + input[OUTPUT];
        let mut out = Vec::with_capacity(self.patterns.len());
        for pattern in &self.patterns {
            let clicks: usize = pattern.counts.iter().sum();
            if clicks > total {
                continue;
            }
            let mut occ = vec![0; u.nrows()];
            for (&d, &k) in self.detector_modes.iter().zip(&pattern.counts) {
                occ[d] = k;
            }
            occ[OUTPUT] = total - clicks;
            let a = two_mode_input_amplitude(u, (INPUT, input[INPUT]), (OUTPUT, input[OUTPUT]), &occ)?;
            if a != Complex64::new(0.0, 0.0) {
                out.push((occ, a));
            }
        }
        Ok(out)
    }

    /// Heralds a single-mode input through the network with feed-forward.
    pub fn run_heralded(&self, input: &PureState) -> Result<HeraldedState> {
        if input.space().num_modes() != 1 {
            return Err(Error::DimensionMismatch(
                "scissor input must be a single-mode state".into(),
            ));
        }
        let map = self.heralding_map(input.space().cutoff(0))?;
        map.apply(input, 0)?.into_normalized()
    }

    /// Dense simulation of the full network on `input ⊗ |resource> ⊗ |0…0>`,
    /// heralded on every accepted pattern with feed-forward. Exact, but its
    /// cost grows with the Fock-space dimension of all modes.
    pub fn run_dense(&self, input: &PureState) -> Result<HeraldedState> {
        if input.space().num_modes() != 1 || input.space().cutoff(0) > self.input_cutoff() {
            return Err(Error::DimensionMismatch(format!(
                "dense run needs a single-mode input with cutoff at most {}",
                self.input_cutoff()
            )));
        }
        let space = self.circuit.space();
        let r = self.spec.resource_photons();
        let mut full = PureState::zeros(space.clone());
        let mut occ = vec![0; space.num_modes()];
        occ[OUTPUT] = r;
        for (n, c) in input.amplitudes().iter().enumerate() {
            occ[INPUT] = n;
            let idx = space.index_of(&occ)?;
            full.amplitudes_mut()[idx] = *c;
        }
        let branches = self.circuit.run_ensemble(vec![full])?;
        let model = self.spec.detector();
        let out_space = FockSpace::new(vec![r])?;
        let mut state = DensityOperator::zeros(out_space);
        let mut probs = Vec::with_capacity(self.patterns.len());
        for pattern in &self.patterns {
            let pat = ClickPattern::for_detector(&pattern.counts, &model);
            let mut p = 0.0;
            for b in &branches {
                for h in detect_pure_branches(b, &self.detector_modes, &pat, &model)? {
                    let h = crate::fock::apply_phase(&h, 0, pattern.correction)?;
                    p += h.norm_sq();
                    state.add_pure(1.0, &h);
                }
            }
            probs.push(p);
        }
        HeraldOutcome {
            state,
            pattern_probabilities: probs,
        }
        .into_normalized()
    }
}

/// Reduces raw Kraus columns to a minimal Kraus set through the Choi matrix.
fn compress_kraus(
    raw: BTreeMap<(usize, Vec<usize>), Vec<Complex64>>,
    out_cutoff: usize,
    in_cutoff: usize,
) -> Result<Vec<DMatrix<Complex64>>> {
    let rows = out_cutoff + 1;
    let cols = in_cutoff + 1;
    let to_matrix = |(kept, m): &(usize, Vec<usize>), col: &[Complex64]| {
        let clicks: usize = m.iter().sum();
        let mut k = DMatrix::<Complex64>::zeros(rows, cols);
        for (n, v) in col.iter().enumerate() {
            let b = n + kept;
            if *v != Complex64::new(0.0, 0.0) && b >= clicks && b - clicks < rows {
                k[(b - clicks, n)] = *v;
            }
        }
        k
    };
    let dim = rows * cols;
    if raw.len() <= 1 || raw.len() <= dim / 4 {
        return Ok(raw.iter().map(|(key, col)| to_matrix(key, col)).collect());
    }
    let mut choi = DMatrix::<Complex64>::zeros(dim, dim);
    for (key, col) in &raw {
        let k = to_matrix(key, col);
        let v: Vec<(usize, Complex64)> = k
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
            .map(|(i, z)| (i, *z))
            .collect();
        for &(i, a) in &v {
            for &(j, b) in &v {
                choi[(i, j)] += a * b.conj();
            }
        }
    }
    let Some((values, vectors)) = hermitian_eigen(&choi) else {
        // The raw set is exact, only larger.
        return Ok(raw.iter().map(|(key, col)| to_matrix(key, col)).collect());
    };
    let top = values.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut out = Vec::new();
    for (i, &lambda) in values.iter().enumerate() {
        if lambda <= top * 1e-15 || lambda <= 0.0 {
            continue;
        }
        let v = vectors.column(i) * Complex64::new(lambda.sqrt(), 0.0);
        out.push(DMatrix::from_column_slice(rows, cols, v.as_slice()));
    }
    Ok(out)
}

/// Kraus operators of a scissor's heralded map, one set per accepted pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldingMap {
    input_cutoff: usize,
    output_cutoff: usize,
    kraus: Vec<Vec<DMatrix<Complex64>>>,
}

/// Unnormalized result of heralding.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    /// Sum of the feed-forward corrected heralded operators.
    pub state: DensityOperator,
    pub pattern_probabilities: Vec<f64>,
}

/// Normalized heralded state with its success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedState {
    pub state: DensityOperator,
    /// Total probability over all accepted patterns.
    pub probability: f64,
    pub pattern_probabilities: Vec<f64>,
}

impl HeraldOutcome {
    pub fn probability(&self) -> f64 {
        self.pattern_probabilities.iter().sum()
    }

    pub fn into_normalized(self) -> Result<HeraldedState> {
        let p = self.probability();
        if !(p >= 1e-300) {
            return Err(Error::ZeroProbability(p));
        }
        Ok(HeraldedState {
            state: self.state.scaled(1.0 / self.state.trace()),
            probability: p,
            pattern_probabilities: self.pattern_probabilities,
        })
    }
}

impl HeraldingMap {
    pub fn input_cutoff(&self) -> usize {
        self.input_cutoff
    }

    pub fn output_cutoff(&self) -> usize {
        self.output_cutoff
    }

    /// Kraus operators for pattern `p`, each `(output_cutoff+1) × (input_cutoff+1)`.
    pub fn kraus(&self, p: usize) -> &[DMatrix<Complex64>] {
        &self.kraus[p]
    }

    pub fn num_patterns(&self) -> usize {
        self.kraus.len()
    }

    /// Applies one Kraus operator to `mode` of a multimode state. The output
    /// space has the cutoff of `mode` replaced by the map's output cutoff.
    fn apply_kraus(&self, k: &DMatrix<Complex64>, psi: &PureState, mode: usize) -> Result<PureState> {
        let space = psi.space();
        let mut cutoffs = space.cutoffs().to_vec();
        cutoffs[mode] = self.output_cutoff;
        let out_space = FockSpace::new(cutoffs)?;
        let inner: usize = (mode + 1..space.num_modes()).map(|m| space.cutoff(m) + 1).product();
        let c_in = space.cutoff(mode) + 1;
        let c_out = self.output_cutoff + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); out_space.dim()];
        for (i, a) in psi.amplitudes().iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let outer = i / (inner * c_in);
            let n = (i / inner) % c_in;
            let rest = i % inner;
            for b in 0..c_out {
                let kv = k[(b, n)];
                if kv != Complex64::new(0.0, 0.0) {
                    out[(outer * c_out + b) * inner + rest] += kv * a;
                }
            }
        }
        Ok(PureState::from_parts(out_space, out))
    }

    /// Heralds `mode` of `psi`. Probabilities are relative to `‖ψ‖²`.
    pub fn apply(&self, psi: &PureState, mode: usize) -> Result<HeraldOutcome> {
        self.apply_branches(std::slice::from_ref(psi), mode)
    }

    /// Heralds `mode` of the mixed state `Σ |ψ_i><ψ_i|`. Probabilities are
    /// relative to the trace of the input.
    pub fn apply_branches(&self, branches: &[PureState], mode: usize) -> Result<HeraldOutcome> {
        let first = branches
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no input branches".into()))?;
        let space = first.space();
        space.check_mode(mode)?;
        if space.cutoff(mode) > self.input_cutoff {
            return Err(Error::DimensionMismatch(format!(
                "input cutoff {} exceeds the map's {}",
                space.cutoff(mode),
                self.input_cutoff
            )));
        }
        let norm_in: f64 = branches.iter().map(|b| b.norm_sq()).sum();
        if norm_in <= 0.0 {
            return Err(Error::ZeroProbability(norm_in));
        }
        // Restrict Kraus columns to the input's own cutoff.
        let cols = space.cutoff(mode) + 1;
        let mut state: Option<DensityOperator> = None;
        let mut probs = Vec::with_capacity(self.kraus.len());
        for set in &self.kraus {
            let mut p = 0.0;
            for k in set {
                let k = k.columns(0, cols).into_owned();
                for b in branches {
                    let out = self.apply_kraus(&k, b, mode)?;
                    let w = out.norm_sq();
                    if w == 0.0 {
                        continue;
                    }
                    p += w;
                    state
                        .get_or_insert_with(|| DensityOperator::zeros(out.space().clone()))
                        .add_pure(1.0 / norm_in, &out);
                }
            }
            probs.push(p / norm_in);
        }
        let state = match state {
            Some(s) => s,
            None => {
                let mut cutoffs = space.cutoffs().to_vec();
                cutoffs[mode] = self.output_cutoff;
                DensityOperator::zeros(FockSpace::new(cutoffs)?)
            }
        };
        Ok(HeraldOutcome {
            state,
            pattern_probabilities: probs,
        })
    }
}

/// Builds the network for `spec` and heralds a single-mode input.
pub fn run_heralded(spec: &ScissorSpec, input: &PureState) -> Result<HeraldedState> {
    let cutoff = input.space().cutoff(0);
    build_scissor_circuit(spec, cutoff)?.run_heralded(input)
}
