//! End-to-end acceptance criteria. Each prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::time::Instant;

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;
use scissorlab::channels::LossChannel;
use scissorlab::experiments::{
    run_fig3, run_fig4, run_fig5, run_fig8, Fig3Config, Fig4Config, Fig5Config, Fig8Config, Range,
    SweepConfig,
};
use scissorlab::fock::{coherent_coefficients, epr_state, DensityOperator, FockSpace, PureState};
use scissorlab::measurement::{project_pnr, DetectorKind, DetectorModel, Outcome};
use scissorlab::metrics::{gaussian_eof, rci, CovarianceMatrix};
use scissorlab::scissors::{
    build_scissor_circuit, cat_amplitude, epr_scissor_state, lossy_epr_branches, t3_apply, teleamp_4cat,
    DiagonalTransform, ScissorSpec, Sign,
};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn coherent(gamma: f64, cutoff: usize) -> Vec<Complex64> {
    coherent_coefficients(c(gamma), cutoff)
}

fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().min(b.len());
    let dot: Complex64 = (0..n).map(|i| a[i].conj() * b[i]).sum();
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    dot.norm_sqr() / (na * nb)
}

/// Dense simulation of the network on `|ψ> ⊗ |r> ⊗ |0…>` with the detectors
/// projected onto `counts`; returns the unnormalized output amplitudes.
fn dense_herald(spec: &ScissorSpec, psi: &[Complex64], counts: &[usize]) -> Vec<Complex64> {
    let cutoff = psi.len() - 1;
    let sc = build_scissor_circuit(spec, cutoff).unwrap();
    let space = sc.circuit().space().clone();
    let mut amps = vec![c(0.0); space.dim()];
    for (n, a) in psi.iter().enumerate() {
        let mut occ = vec![0; space.num_modes()];
        occ[sc.input_mode()] = n;
        occ[sc.output_mode()] = spec.resource_photons();
        amps[space.index_of(&occ).unwrap()] = *a;
    }
    let input = PureState::new(space, amps).unwrap();
    let mut out = sc.circuit().run(&input).unwrap();
    let mut order: Vec<(usize, usize)> = sc.detector_modes().iter().copied().zip(counts.iter().copied()).collect();
    order.sort_by_key(|o| std::cmp::Reverse(o.0));
    for (mode, n) in order {
        out = project_pnr(&out, mode, n).unwrap().0;
    }
    assert_eq!(out.space().num_modes(), 1);
    out.into_amplitudes()
}

fn verdict(n: usize, ok: bool, detail: String) -> bool {
    println!("{} criterion {n}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn master_oracle() -> bool {
    let start = Instant::now();
    let mut worst_f: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for gamma in [0.05, 0.1, 0.3] {
        for g in [1.0f64, 2.0, 4.0] {
            let psi = coherent(gamma, 12);
            let pre = 6f64.sqrt() / 8.0 * (1.0 / (g * g + 1.0)).powf(1.5);
            let t3: Vec<Complex64> = (0..=3).map(|n| psi[n] * pre * g.powi(n as i32)).collect();
            let p_formula =
                4.0 * 3.0 / 32.0 * (1.0 / (g * g + 1.0)).powi(3) * (0..=3).map(|n| (g.powi(n) * psi[n as usize]).norm_sqr()).sum::<f64>();
            let out = dense_herald(&ScissorSpec::new(3, g).unwrap(), &psi, &[0, 1, 1, 1]);
            worst_f = worst_f.max(1.0 - overlap(&out, &t3));
            let p_pattern: f64 = out.iter().map(|z| z.norm_sqr()).sum();
            worst_p = worst_p.max((4.0 * p_pattern - p_formula).abs() / p_formula);
            let h = scissorlab::scissors::run_heralded(
                &ScissorSpec::new(3, g).unwrap(),
                &PureState::from_coefficients(12, &psi).unwrap(),
            )
            .unwrap();
            worst_p = worst_p.max((h.probability - p_formula).abs() / p_formula);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        worst_f <= 1e-8 && worst_p <= 1e-8 && secs < 10.0,
        format!("3-scissor circuit vs closed form: max 1−F {worst_f:.2e}, max rel ΔP {worst_p:.2e}, {secs:.2} s"),
    )
}

fn one_scissor_oracle() -> bool {
    let mut worst_f: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for gamma in [0.05, 0.1, 0.3] {
        for g in [1.0f64, 2.0, 4.0] {
            let psi = coherent(gamma, 12);
            let pre = (1.0 / (2.0 * (g * g + 1.0))).sqrt();
            let p_formula = (psi[0].norm_sqr() + (g * psi[1]).norm_sqr()) / (g * g + 1.0);
            for (counts, sign) in [([0, 1], 1.0), ([1, 0], -1.0)] {
                let target = [psi[0] * pre, psi[1] * pre * g * sign];
                let out = dense_herald(&ScissorSpec::new(1, g).unwrap(), &psi, &counts);
                worst_f = worst_f.max(1.0 - overlap(&out, &target));
                let p: f64 = out.iter().map(|z| z.norm_sqr()).sum();
                worst_p = worst_p.max((2.0 * p - p_formula).abs() / p_formula);
            }
        }
    }
    verdict(
        2,
        worst_f <= 1e-8 && worst_p <= 1e-8,
        format!("1-scissor circuit, both patterns incl. phase flip: max 1−F {worst_f:.2e}, max rel ΔP {worst_p:.2e}"),
    )
}

fn teleamp_convergence() -> bool {
    let (gamma, g) = (0.1, 2.0);
    let t_b = g * g / (1.0 + g * g);
    let psi = PureState::from_coefficients(14, &coherent(gamma, 14)).unwrap();
    let (t3, _) = t3_apply(&psi, g).unwrap();
    let deficits: Vec<f64> = [0.1, 0.03, 0.01, 0.003]
        .iter()
        .map(|&alpha| {
            let beta = cat_amplitude(c(alpha), 0.5, t_b).unwrap();
            let (out, _) = teleamp_4cat(c(gamma), beta, 0.5, t_b, 14).unwrap();
            1.0 - overlap(out.amplitudes(), t3.amplitudes())
        })
        .collect();
    let monotone = deficits.windows(2).all(|w| w[1] < w[0]);
    verdict(
        3,
        monotone && deficits[3] < 1e-4,
        format!(
            "4-cat fidelity deficits {}",
            deficits.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

/// Returns `(passed, probability_claims_fail_as_documented)`.
fn fig3_ordering() -> (bool, bool) {
    let start = Instant::now();
    let r = run_fig3(&Fig3Config::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let col = |k: &str| r.table.column(k).unwrap();
    let (p3s, f3s) = (col("P_3scissor"), col("infidelity_3scissor"));
    let mut lines = Vec::new();
    let mut ok = true;
    let mut fidelity_ok = true;
    for n in [3, 4] {
        let (p, f) = (col(&format!("P_nla{n}")), col(&format!("infidelity_nla{n}")));
        let p_bad = (0..p.len()).filter(|&i| p3s[i] <= p[i] || p3s[i].is_nan()).count();
        let f_bad = (0..p.len()).filter(|&i| f3s[i] >= f[i] || f3s[i].is_nan()).count();
        ok &= p_bad == 0 && f_bad == 0;
        fidelity_ok &= f_bad == 0;
        lines.push(format!("vs N={n}: P violated at {p_bad}/20, F violated at {f_bad}/20"));
    }
    // At g = 1 the closed-form prefactors give P(3-scissor) = (3/64)·Σ_{n≤3} |c_n|²
    // and P(N=3) = (1/8)·Σ_n w_n |c_n|² with w = 1, 1, 4/9, 4/81.
    let w = coherent(0.1, 3);
    let p_3s = 3.0 / 64.0 * w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let p_n3 = 0.125 * [1.0, 1.0, 4.0 / 9.0, 4.0 / 81.0].iter().zip(&w).map(|(f, z)| f * z.norm_sqr()).sum::<f64>();
    let documented = fidelity_ok
        && (p3s[0] - p_3s).abs() < 1e-12
        && (col("P_nla3")[0] - p_n3).abs() < 1e-12
        && p_3s < p_n3;
    let passed = verdict(4, ok && secs < 5.0, format!("{} ({secs:.2} s)", lines.join("; ")));
    (passed, documented)
}

fn fig4_crossing() -> bool {
    let r = run_fig4(&Fig4Config::default()).unwrap();
    let t: f64 = 0.1;
    let x = (1.0 + t) / (1.0 - t);
    let thermal = |x: f64| {
        let (p, m) = ((x + 1.0) / 2.0, (x - 1.0) / 2.0);
        p * p.log2() - m * m.log2()
    };
    let bound = r.table.column("deterministic_bound").unwrap()[0];
    let mut ok = (bound - thermal(x)).abs() < 1e-4;
    let mut lines = vec![format!("bound {bound:.6} (closed form {:.6})", thermal(x))];
    for s in ["perfect", "ts0.7_td0.7"] {
        let one = r.table.column(&format!("geof_1scissor_{s}")).unwrap();
        let three = r.table.column(&format!("geof_3scissor_{s}")).unwrap();
        let above = one.iter().zip(&three).all(|(a, b)| *b > a + 1e-6);
        let max3 = three.iter().copied().fold(0.0, f64::max);
        let max1 = one.iter().copied().fold(0.0, f64::max);
        ok &= above && max3 > bound + 1e-6 && max1 < bound - 1e-6;
        lines.push(format!("{s}: 3>1 everywhere {above}, max3 {max3:.4}, max1 {max1:.4}"));
    }
    verdict(5, ok, lines.join("; "))
}

fn fig5_gaps() -> bool {
    let r = run_fig5(&Fig5Config::default()).unwrap();
    let gap = |o: usize| -> Vec<f64> {
        let a = r.table.column(&format!("rci_{o}scissor")).unwrap();
        let b = r.table.column(&format!("gaussian_rci_{o}scissor")).unwrap();
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect()
    };
    let (one, three) = (gap(1), gap(3));
    let bad = one.iter().zip(&three).filter(|(a, b)| b >= a || b.is_nan()).count();
    verdict(
        6,
        bad == 0 && one.len() == 12,
        format!("gap3 < gap1 at {}/{} gains", one.len() - bad, one.len()),
    )
}

fn epr_closed_forms() -> bool {
    let (chi, t) = (0.3, 0.1);
    let branches = lossy_epr_branches(chi, t, 16).unwrap();
    let mut worst: f64 = 0.0;
    for order in [1, 3] {
        for g in [1.0, 3.0] {
            let closed = epr_scissor_state(chi, t, g, order, 16).unwrap();
            let transform = match order {
                1 => DiagonalTransform::one_scissor(g, Sign::Minus),
                _ => DiagonalTransform::three_scissor(g),
            };
            let (piped, _) = transform.apply_branches(&branches.branches, 1).unwrap();
            let space = FockSpace::new(vec![16 + order, order.max(piped.space().cutoff(1))]).unwrap();
            let d = closed
                .normalized()
                .unwrap()
                .embed(&space)
                .unwrap()
                .trace_distance(&piped.normalized().unwrap().embed(&space).unwrap())
                .unwrap();
            worst = worst.max(d);
        }
    }
    verdict(7, worst < 1e-8, format!("max trace distance {worst:.2e}"))
}

fn two_photon_resource() -> bool {
    let gamma: f64 = 0.1;
    let mut worst_f: f64 = 0.0;
    let mut worst_top: f64 = 0.0;
    for g in [1.0f64, 2.0, 4.0] {
        let psi = coherent(gamma, 12);
        let spec = ScissorSpec::new(3, g).unwrap().with_resource_photons(2).unwrap();
        // Widen the output mode so that a |3> component would be visible.
        let cutoff = 12;
        let sc = build_scissor_circuit(&spec, cutoff).unwrap();
        let mut cutoffs = sc.circuit().space().cutoffs().to_vec();
        cutoffs[sc.output_mode()] = 4;
        let mut wide = scissorlab::fock::Circuit::new(FockSpace::new(cutoffs).unwrap());
        for el in sc.circuit().elements() {
            wide.push(*el).unwrap();
        }
        let space = wide.space().clone();
        let mut amps = vec![c(0.0); space.dim()];
        for (n, a) in psi.iter().enumerate() {
            let mut occ = vec![0; space.num_modes()];
            occ[0] = n;
            occ[1] = 2;
            amps[space.index_of(&occ).unwrap()] = *a;
        }
        let mut out = wide.run(&PureState::new(space, amps).unwrap()).unwrap();
        for (mode, n) in [(4, 1), (3, 1), (2, 1), (0, 0)] {
            out = project_pnr(&out, mode, n).unwrap().0;
        }
        let out = out.into_amplitudes();
        let pre = gamma * 2f64.sqrt() / 8.0 / (g * g + 1.0) * (-gamma * gamma / 2.0).exp();
        let gg = g * gamma;
        let t2 = [c(pre), c(pre * gg), c(pre * gg * gg / 2f64.sqrt())];
        worst_f = worst_f.max(1.0 - overlap(&out, &t2));
        let norm: f64 = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst_top = worst_top.max(out[3].norm() / norm);
    }
    verdict(
        8,
        worst_f <= 1e-8 && worst_top < 1e-14,
        format!("2-photon resource: max 1−F {worst_f:.2e}, max |<3|out>|/‖out‖ {worst_top:.1e}"),
    )
}

fn on_off_small() -> bool {
    let r = run_fig8(&Fig8Config::default()).unwrap();
    let g = r.table.column("g").unwrap();
    let mut worst: f64 = 0.0;
    for o in [1, 3] {
        let a = r.table.column(&format!("infidelity_{o}scissor_pnr")).unwrap();
        let b = r.table.column(&format!("infidelity_{o}scissor_on-off")).unwrap();
        worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
    }
    let span = g[0] == 1.0 && *g.last().unwrap() == 10.0;
    verdict(9, worst < 1e-2 && span, format!("max |ΔF| {worst:.2e} over g ∈ [1, 10]"))
}

fn metric_anchors() -> bool {
    let chi: f64 = 0.3;
    let nbar = chi * chi / (1.0 - chi * chi);
    let h_a = (nbar + 1.0) * (nbar + 1.0).log2() - nbar * nbar.log2();
    let epr = epr_state(chi, 20).unwrap();
    let r = rci(&DensityOperator::from_pure(&epr)).unwrap();
    let mut ok = (r - h_a).abs() < 1e-3 && (h_a - 0.480).abs() < 1e-3;
    let mut worst: f64 = 0.0;
    for sq in [0.1f64, 0.3, 0.5] {
        let (a, b) = ((2.0 * sq).cosh(), (2.0 * sq).sinh());
        let v = Matrix4::new(
            a, 0.0, b, 0.0, //
            0.0, a, 0.0, -b, //
            b, 0.0, a, 0.0, //
            0.0, -b, 0.0, a,
        );
        let (ch, sh) = (sq.cosh().powi(2), sq.sinh().powi(2));
        let expected = ch * ch.log2() - sh * sh.log2();
        let got = gaussian_eof(&CovarianceMatrix::new(Vector4::zeros(), v).unwrap()).unwrap();
        worst = worst.max((got - expected).abs());
    }
    ok &= worst < 1e-5;
    verdict(
        10,
        ok,
        format!("RCI(EPR 0.3) {r:.6} vs H(A) {h_a:.6}; max |ΔGEOF| on TMSV {worst:.1e}"),
    )
}

fn invariant_spot_checks() -> bool {
    let start = Instant::now();
    let mut notes = Vec::new();
    // Unitarity of every network.
    let mut unit: f64 = 0.0;
    for order in [1, 3, 7] {
        let u = build_scissor_circuit(&ScissorSpec::new(order, 2.5).unwrap(), 1)
            .unwrap()
            .transfer_matrix()
            .unwrap();
        let d = &u.adjoint() * &u - DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
        unit = unit.max(d.norm());
    }
    notes.push(format!("‖U†U−I‖ {unit:.1e}"));
    // Trace preservation of loss.
    let defect = LossChannel::new(0.37).unwrap().completeness_defect(20);
    notes.push(format!("loss completeness {defect:.1e}"));
    // POVM completeness for both detector kinds.
    let mut povm: f64 = 0.0;
    for model in [
        DetectorModel::new(DetectorKind::Pnr, 0.6).unwrap(),
        DetectorModel::new(DetectorKind::OnOff, 0.6).unwrap(),
    ] {
        let outcomes: Vec<Outcome> = match model.kind {
            DetectorKind::Pnr => (0..=15).map(Outcome::Photons).collect(),
            DetectorKind::OnOff => vec![Outcome::On, Outcome::Off],
        };
        let mut sum = [0.0; 16];
        for o in outcomes {
            for (s, w) in sum.iter_mut().zip(model.weights(o, 15).unwrap()) {
                *s += w;
            }
        }
        povm = sum.iter().map(|s| (s - 1.0).abs()).fold(povm, f64::max);
    }
    notes.push(format!("POVM completeness {povm:.1e}"));
    // No distortion on inputs inside the scissor's photon range.
    let psi = PureState::from_coefficients(3, &[c(0.5), c(-0.3), Complex64::new(0.2, 0.6), c(0.4)])
        .unwrap()
        .normalized()
        .unwrap();
    let g = 1.7;
    let (out, _) = t3_apply(&psi, g).unwrap();
    let ideal: Vec<Complex64> = psi.amplitudes().iter().enumerate().map(|(n, a)| a * g.powi(n as i32)).collect();
    let distortion = 1.0 - overlap(out.amplitudes(), &ideal);
    notes.push(format!("no-distortion 1−F {distortion:.1e}"));
    // CSV determinism.
    let mut cfg = SweepConfig::default().sweep;
    cfg.gain = Range::new(1.0, 4.0, 4);
    let a = scissorlab::experiments::sweep(&cfg).unwrap().table.to_csv().unwrap();
    let b = scissorlab::experiments::sweep(&cfg).unwrap().table.to_csv().unwrap();
    notes.push(format!("CSV identical {}", a == b));
    let ok = unit < 1e-12 && defect < 1e-12 && povm < 1e-12 && distortion < 1e-14 && a == b;
    verdict(
        11,
        ok,
        format!("{} ({:.2} s; full property suites live in tests/invariants.rs)", notes.join(", "), start.elapsed().as_secs_f64()),
    )
}

// Runs without the libtest harness so the verdict lines are never captured.
fn main() {
    let mut fig3_documented = true;
    let criteria: [&mut dyn FnMut() -> bool; 11] = [
        &mut master_oracle,
        &mut one_scissor_oracle,
        &mut teleamp_convergence,
        &mut || {
            let (passed, documented) = fig3_ordering();
            fig3_documented = documented;
            passed
        },
        &mut fig4_crossing,
        &mut fig5_gaps,
        &mut epr_closed_forms,
        &mut two_photon_resource,
        &mut on_off_small,
        &mut metric_anchors,
        &mut invariant_spot_checks,
    ];
    let mut failed = Vec::new();
    for (i, criterion) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        if !criterion() {
            failed.push(i + 1);
        }
        println!("    ({:.2} s)", start.elapsed().as_secs_f64());
    }
    println!("failed criteria: {failed:?}");
    // Criterion 4 is held to its stated claims and reported as FAIL above.
    // Its success-probability half contradicts the closed-form prefactors
    // (the fidelity half holds), so the suite pins that exact failure mode
    // instead of letting it mask regressions elsewhere.
    if failed.contains(&4) {
        assert!(fig3_documented, "criterion 4 failed in an unexpected way");
    }
    assert!(failed.iter().all(|&n| n == 4), "criteria {failed:?} failed");
}
