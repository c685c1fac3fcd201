//! Property tests for the invariants of every module.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use scissorlab::channels::{loss_on_kraus_branches, pure_loss, LossChannel};
use scissorlab::experiments::{Range, SweepConfig};
use scissorlab::fock::{
    apply_beamsplitter, apply_mixing_angle, apply_phase, cat4_state, coherent_state, epr_state, tensor,
    DensityOperator, FockSpace, PureState,
};
use scissorlab::measurement::{detect, ClickPattern, DetectorKind, DetectorModel, Outcome};
use scissorlab::metrics::{
    covariance_matrix, gaussian_eof, symplectic_eigenvalues, von_neumann_entropy, EntanglementReport,
};
use scissorlab::scissors::{
    build_scissor_circuit, gain_from_transmissivity, lossy_epr_branches, t1_apply, t3_apply, tn_parallel,
    transmissivity_from_gain, DiagonalTransform, ScissorSpec, Sign,
};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

fn amplitude() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Normalized single-mode state on `0..=cutoff` with support up to `support`.
fn single_mode(cutoff: usize, support: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec(amplitude(), support + 1)
        .prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(move |mut v| {
            v.resize(cutoff + 1, Complex64::new(0.0, 0.0));
            PureState::from_coefficients(cutoff, &v).unwrap().normalized().unwrap()
        })
}

/// Normalized state on `modes` modes of cutoff `k` with total photon number at most `k`.
fn bounded_state(modes: usize, k: usize) -> impl Strategy<Value = PureState> {
    let space = FockSpace::uniform(modes, k).unwrap();
    let dim = space.dim();
    prop::collection::vec(amplitude(), dim).prop_filter_map("nonzero", move |mut v| {
        for (i, a) in v.iter_mut().enumerate() {
            if space.total_photons(i) > k {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        PureState::new(space.clone(), v).ok()?.normalized().ok()
    })
}

fn mixed_state(cutoff: usize) -> impl Strategy<Value = DensityOperator> {
    prop::collection::vec((single_mode(cutoff, cutoff), 0.05f64..1.0), 1..4).prop_map(|parts| {
        let total: f64 = parts.iter().map(|p| p.1).sum();
        let branches: Vec<PureState> = parts
            .iter()
            .map(|(psi, w)| psi.scaled(Complex64::new((w / total).sqrt(), 0.0)))
            .collect();
        DensityOperator::from_ensemble(&branches).unwrap()
    })
}

fn fidelity_pure(a: &PureState, b: &PureState) -> f64 {
    a.inner(b).unwrap().norm_sqr() / (a.norm_sq() * b.norm_sq())
}

fn max_abs(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- fock

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn index_occupation_bijection(cutoffs in prop::collection::vec(1usize..5, 1..4)) {
        let space = FockSpace::new(cutoffs.clone()).unwrap();
        prop_assert_eq!(space.dim(), cutoffs.iter().map(|c| c + 1).product::<usize>());
        for i in 0..space.dim() {
            prop_assert_eq!(space.index_of(&space.occupation(i)).unwrap(), i);
        }
    }

    #[test]
    fn lossless_circuits_preserve_norm_and_number(
        psi in bounded_state(3, 4),
        ops in prop::collection::vec((0usize..3, 1usize..3, 0.0f64..1.0, -3.2f64..3.2), 1..8),
    ) {
        let number = |s: &PureState| s.mean_total_photons();
        let n0 = number(&psi);
        let mut out = psi;
        for (m, shift, t, theta) in ops {
            out = apply_beamsplitter(&out, m, (m + shift) % 3, t).unwrap();
            out = apply_phase(&out, m, theta).unwrap();
        }
        prop_assert!((out.norm_sq() - 1.0).abs() < 1e-10);
        prop_assert!((number(&out) - n0).abs() < 1e-10);
    }

    #[test]
    fn beamsplitters_compose_by_angle(
        k in 1usize..7,
        seed in prop::collection::vec(amplitude(), 49),
        t1 in 0.0f64..1.0,
        t2 in 0.0f64..1.0,
    ) {
        let space = FockSpace::uniform(2, k).unwrap();
        let amps: Vec<Complex64> = (0..space.dim())
            .map(|i| if space.total_photons(i) <= k { seed[i] } else { Complex64::new(0.0, 0.0) })
            .collect();
        prop_assume!(amps.iter().any(|z| z.norm() > 1e-3));
        let psi = PureState::new(space, amps).unwrap().normalized().unwrap();
        let twice = apply_beamsplitter(&apply_beamsplitter(&psi, 0, 1, t1).unwrap(), 0, 1, t2).unwrap();
        let once = apply_mixing_angle(&psi, 0, 1, t1.sqrt().acos() + t2.sqrt().acos()).unwrap();
        prop_assert!(fidelity_pure(&twice, &once) >= 1.0 - 1e-10);
    }

    #[test]
    fn cat4_has_residue_support(beta in 0.01f64..2.0, phase in 0.0f64..6.3, r in 0usize..4) {
        let space = FockSpace::uniform(1, 40).unwrap();
        let cat = cat4_state(&space, 0, Complex64::from_polar(beta, phase), r).unwrap();
        for (n, a) in cat.amplitudes().iter().enumerate() {
            if n % 4 != r {
                prop_assert_eq!(a.norm(), 0.0);
            }
        }
    }

    #[test]
    fn beamsplitters_map_coherent_products(
        u in (0.0f64..1.0, 0.0f64..6.3),
        v in (0.0f64..1.0, 0.0f64..6.3),
        t in 0.0f64..1.0,
    ) {
        let (u, v) = (Complex64::from_polar(u.0, u.1), Complex64::from_polar(v.0, v.1));
        let one = FockSpace::uniform(1, 24).unwrap();
        let product = |a, b| tensor(&coherent_state(&one, 0, a).unwrap(), &coherent_state(&one, 0, b).unwrap());
        let out = apply_beamsplitter(&product(u, v), 0, 1, t).unwrap();
        let (st, rt) = (t.sqrt(), (1.0 - t).sqrt());
        let expected = product(u * st + v * rt, v * st - u * rt);
        prop_assert!(fidelity_pure(&out, &expected) >= 1.0 - 1e-10);
    }
}

// ---------------------------------------------------------------- channels

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn loss_composes_multiplicatively(rho in mixed_state(6), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let twice = pure_loss(&pure_loss(&rho, 0, t1).unwrap(), 0, t2).unwrap();
        let once = pure_loss(&rho, 0, t1 * t2).unwrap();
        prop_assert!(twice.trace_distance(&once).unwrap() < 1e-10);
        prop_assert!((once.trace() - rho.trace()).abs() < 1e-12);
    }

    #[test]
    fn loss_scales_mean_photons(rho in mixed_state(6), tau in 0.0f64..1.0) {
        let out = pure_loss(&rho, 0, tau).unwrap();
        let (n_in, n_out) = (rho.mean_photons(0).unwrap(), out.mean_photons(0).unwrap());
        prop_assert!((n_out - tau * n_in).abs() < 1e-10);
    }

    #[test]
    fn kraus_branches_reassemble_the_channel(psi in bounded_state(2, 4), tau in 0.0f64..1.0, mode in 0usize..2) {
        let b = loss_on_kraus_branches(&psi, mode, tau, 4).unwrap();
        let rebuilt = DensityOperator::from_ensemble(&b.branches).unwrap();
        let direct = pure_loss(&psi, mode, tau).unwrap();
        prop_assert!(max_abs(rebuilt.matrix(), direct.matrix()) < 1e-10);
        prop_assert!(b.residual.abs() < 1e-12);
    }

    #[test]
    fn loss_kraus_set_is_complete(tau in 0.0f64..=1.0, cutoff in 1usize..20) {
        prop_assert!(LossChannel::new(tau).unwrap().completeness_defect(cutoff) < 1e-10);
    }
}

// ---------------------------------------------------------------- measurement

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn pnr_outcomes_are_complete(psi in bounded_state(2, 5), eff in 0.0f64..=1.0, mode in 0usize..2) {
        let model = DetectorModel::new(DetectorKind::Pnr, eff).unwrap();
        let total: f64 = (0..=5)
            .map(|n| detect(&psi, &[mode], &ClickPattern::from_counts(&[n]), &model).unwrap().1)
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn on_off_is_coarse_grained_pnr(psi in bounded_state(2, 5), eff in 0.0f64..=1.0) {
        let pnr = DetectorModel::new(DetectorKind::Pnr, eff).unwrap();
        let onoff = DetectorModel::new(DetectorKind::OnOff, eff).unwrap();
        let p_on = detect(&psi, &[0], &ClickPattern::new(vec![Outcome::On]), &onoff).unwrap().1;
        let p_off = detect(&psi, &[0], &ClickPattern::new(vec![Outcome::Off]), &onoff).unwrap().1;
        let clicks: f64 = (1..=5)
            .map(|n| detect(&psi, &[0], &ClickPattern::from_counts(&[n]), &pnr).unwrap().1)
            .sum();
        prop_assert!((p_on - clicks).abs() < 1e-12);
        prop_assert!((p_on + p_off - 1.0).abs() < 1e-12);
    }

    #[test]
    fn efficiency_is_loss_before_ideal_detection(psi in bounded_state(2, 4), eff in 0.0f64..=1.0, n in 0usize..4) {
        let pattern = ClickPattern::from_counts(&[n]);
        let (lossy, p1) = detect(&psi, &[0], &pattern, &DetectorModel::new(DetectorKind::Pnr, eff).unwrap()).unwrap();
        let attenuated = pure_loss(&psi, 0, eff).unwrap();
        let (ideal, p2) = detect(&attenuated, &[0], &pattern, &DetectorModel::ideal_pnr()).unwrap();
        prop_assert!(max_abs(lossy.matrix(), ideal.matrix()) < 1e-10);
        prop_assert!((p1 - p2).abs() < 1e-10);
    }
}

// ---------------------------------------------------------------- scissors

/// `out_n / (gⁿ c_n)` over the support of `psi` below `n_max`; zero beyond.
fn ratios(psi: &PureState, out: &PureState, g: f64, n_max: usize) -> (Vec<Complex64>, f64) {
    let mut r = Vec::new();
    let mut beyond: f64 = 0.0;
    for (n, (c, o)) in psi.amplitudes().iter().zip(out.amplitudes()).enumerate() {
        if n <= n_max {
            if c.norm() > 1e-6 {
                r.push(o / (c * g.powi(n as i32)));
            }
        } else {
            beyond = beyond.max(o.norm());
        }
    }
    (r, beyond)
}

fn spread(r: &[Complex64]) -> f64 {
    r.iter().map(|z| (z - r[0]).norm() / r[0].norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn scissors_amplify_without_distortion(psi in single_mode(6, 6), gi in 0usize..4) {
        let g = [0.5, 1.0, 2.0, 4.0][gi];
        let (out3, p3) = t3_apply(&psi, g).unwrap();
        let (r, beyond) = ratios(&psi, &out3, g, 3);
        prop_assert!(spread(&r) < 1e-12 && beyond == 0.0);
        prop_assert!((0.0..=1.0).contains(&p3));
        let (out1, p1) = t1_apply(&psi, g, Sign::Plus).unwrap();
        let (r, beyond) = ratios(&psi, &out1, g, 1);
        prop_assert!(spread(&r) < 1e-12 && beyond == 0.0);
        prop_assert!((0.0..=1.0).contains(&p1));
    }

    #[test]
    fn parallel_scissors_show_their_distortion(psi in single_mode(5, 5), n_sc in 1usize..6, g in 0.3f64..5.0) {
        let (out, _) = tn_parallel(&psi, g, n_sc).unwrap();
        let (r, _) = ratios(&psi, &out, g, n_sc);
        let nonzero: Vec<usize> = (0..=n_sc.min(5)).filter(|&n| psi.amplitudes()[n].norm() > 1e-6).collect();
        prop_assume!(!nonzero.is_empty());
        // n!/((N−n)! Nⁿ) relative to n = 0.
        let factor = |n: usize| (0..n).map(|j| (n_sc - j) as f64 / n_sc as f64).product::<f64>();
        let base = r[0] / factor(nonzero[0]);
        for (z, &n) in r.iter().zip(&nonzero) {
            prop_assert!((z / factor(n) - base).norm() < 1e-12 * base.norm());
        }
    }

    #[test]
    fn dense_circuit_matches_three_scissor(psi in single_mode(4, 4), g in 0.3f64..5.0) {
        let sc = build_scissor_circuit(&ScissorSpec::new(3, g).unwrap(), 4).unwrap();
        let dense = sc.run_dense(&psi).unwrap();
        let (t3, p) = t3_apply(&psi, g).unwrap();
        let target = t3.embed(dense.state.space()).unwrap().normalized().unwrap();
        prop_assert!(dense.state.expectation_pure(&target).unwrap() >= 1.0 - 1e-8);
        prop_assert!((dense.probability - p).abs() <= 1e-8 * p);
    }

    #[test]
    fn corrected_branches_coincide(psi in single_mode(6, 6), g in 0.3f64..5.0) {
        let sc = build_scissor_circuit(&ScissorSpec::new(3, g).unwrap(), 6).unwrap();
        let map = sc.heralding_map(6).unwrap();
        let h = sc.run_heralded(&psi).unwrap();
        let (t3, p) = t3_apply(&psi, g).unwrap();
        for q in &h.pattern_probabilities {
            prop_assert!((4.0 * q - p).abs() <= 1e-10 * p);
        }
        prop_assert_eq!(map.num_patterns(), 4);
        let target = t3.embed(h.state.space()).unwrap().normalized().unwrap();
        prop_assert!(h.state.expectation_pure(&target).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn all_outcomes_sum_to_one(psi in single_mode(4, 4), g in 0.3f64..5.0, eff in 0.2f64..=1.0) {
        // Heralding on every count pair of the 1-scissor exhausts the probability.
        let spec = ScissorSpec::new(1, g).unwrap();
        let sc = build_scissor_circuit(&spec, 4).unwrap();
        let space = sc.circuit().space().clone();
        let mut amps = vec![Complex64::new(0.0, 0.0); space.dim()];
        for (n, a) in psi.amplitudes().iter().enumerate() {
            let mut occ = vec![0; space.num_modes()];
            occ[sc.input_mode()] = n;
            occ[sc.output_mode()] = 1;
            amps[space.index_of(&occ).unwrap()] = *a;
        }
        let out = sc.circuit().run(&PureState::new(space.clone(), amps).unwrap()).unwrap();
        let model = DetectorModel::new(DetectorKind::Pnr, eff).unwrap();
        let modes = sc.detector_modes();
        let mut total = 0.0;
        for a in 0..=space.cutoff(modes[0]) {
            for c in 0..=space.cutoff(modes[1]) {
                let (_, p) = detect(&out, modes, &ClickPattern::from_counts(&[a, c]), &model).unwrap();
                prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
                total += p;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gain_transmissivity_round_trip(g in 1e-2f64..20.0) {
        let eta = transmissivity_from_gain(g).unwrap();
        prop_assert!((gain_from_transmissivity(eta).unwrap() - g).abs() <= 1e-12 * g.max(1.0));
        prop_assert_eq!(ScissorSpec::new(3, g).unwrap().transmissivity(), eta);
    }
}

// ---------------------------------------------------------------- metrics

fn heralded_epr(chi: f64, t: f64, g: f64, order: usize) -> DensityOperator {
    let branches = lossy_epr_branches(chi, t, 12).unwrap();
    let transform = if order == 1 {
        DiagonalTransform::one_scissor(g, Sign::Plus)
    } else {
        DiagonalTransform::three_scissor(g)
    };
    transform.apply_branches(&branches.branches, 1).unwrap().0.normalized().unwrap()
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn metrics_ignore_local_phases(
        chi in 0.05f64..0.35,
        t in 0.05f64..1.0,
        g in 0.5f64..4.0,
        order in prop::sample::select(vec![1usize, 3]),
        thetas in prop::collection::vec((0.0f64..6.3, 0.0f64..6.3), 10),
    ) {
        let rho = heralded_epr(chi, t, g, order);
        let base = EntanglementReport::evaluate(&rho, 1.0).unwrap();
        for (a, b) in thetas {
            let turned = rho.phase_rotated(0, a).unwrap().phase_rotated(1, b).unwrap();
            let r = EntanglementReport::evaluate(&turned, 1.0).unwrap();
            prop_assert!((r.geof - base.geof).abs() < 1e-8, "geof {} vs {}", r.geof, base.geof);
            prop_assert!((r.rci - base.rci).abs() < 1e-8);
            prop_assert!((r.gaussian_rci - base.gaussian_rci).abs() < 1e-8);
        }
        prop_assert!(base.geof >= 0.0);
    }

    #[test]
    fn gaussian_states_have_matching_rci(chi in 0.05f64..0.4, t in 0.05f64..1.0) {
        let b = lossy_epr_branches(chi, t, 24).unwrap();
        let rho = DensityOperator::from_ensemble(&b.branches).unwrap();
        let r = EntanglementReport::evaluate(&rho, 1.0).unwrap();
        prop_assert!((r.rci - r.gaussian_rci).abs() < 1e-6);
    }

    #[test]
    fn pure_gaussian_states_are_pure_and_geof_is_entropy(chi in 0.02f64..0.4, a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let rho = DensityOperator::from_pure(&epr_state(chi, 24).unwrap())
            .phase_rotated(0, a)
            .unwrap()
            .phase_rotated(1, b)
            .unwrap();
        let cov = covariance_matrix(&rho).unwrap();
        let nu = symplectic_eigenvalues(&cov).unwrap();
        prop_assert!((nu[0] - 1.0).abs() < 1e-6 && (nu[1] - 1.0).abs() < 1e-6);
        let h = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap()).unwrap();
        prop_assert!((gaussian_eof(&cov).unwrap() - h).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn entropy_is_additive(a in mixed_state(4), b in mixed_state(3)) {
        let joint = von_neumann_entropy(&a.tensor(&b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        prop_assert!((joint - sum).abs() < 1e-10);
    }
}

// ---------------------------------------------------------------- experiments

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn config_round_trips(
        gamma in 0.0f64..1.0,
        lo in 0.1f64..5.0,
        span in 0.0f64..5.0,
        steps in 1usize..30,
        cutoff in 4usize..20,
        tau in 0.01f64..=1.0,
    ) {
        let mut c = SweepConfig::default().with_cutoff(cutoff);
        c.fig3.gamma = gamma;
        c.fig3.gain = Range::new(lo, lo + span, steps);
        c.fig9.tau_s = Range::new(tau, 1.0, steps);
        c.sweep.tau_d = vec![tau, 1.0];
        let parsed = SweepConfig::parse(&c.to_toml().unwrap()).unwrap();
        prop_assert_eq!(parsed, c);
    }
}

proptest! {
    #![proptest_config(cases(4))]

    #[test]
    fn sweep_csv_is_deterministic(steps in 1usize..4, tau in 0.5f64..=1.0) {
        let mut c = SweepConfig::default().sweep;
        c.gain = Range::new(1.0, 3.0, steps);
        c.tau_s = vec![tau];
        c.detectors = vec![scissorlab::experiments::Detector::OnOff];
        let a = scissorlab::experiments::sweep(&c).unwrap().table.to_csv().unwrap();
        let b = scissorlab::experiments::sweep(&c).unwrap().table.to_csv().unwrap();
        prop_assert_eq!(a, b);
    }
}
