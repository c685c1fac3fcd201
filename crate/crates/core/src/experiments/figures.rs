use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{
    Detector, Fig3Config, Fig4Config, Fig5Config, Fig8Config, Fig9Config, GridConfig, Imperfection,
    InputKind,
};
use super::{Cell, Check, Panel, Report, Series, Table, GEOF_MARGIN};
use crate::error::{Error, Result};
use crate::fock::{coherent_state, DensityOperator, FockSpace, PureState};
use crate::measurement::DetectorModel;
use crate::metrics::{
    covariance_matrix, deterministic_bound, fidelity, gaussian_eof, gaussian_rci,
    lossy_epr_covariance, rci, EntanglementReport,
};
use crate::scissors::{
    build_scissor_circuit, lossy_epr_branches, run_heralded, t1_apply, t3_apply, tn_parallel,
    ScissorSpec, Sign,
};

const TARGET_MAX_CUTOFF: usize = 400;

type GapTest<'a> = dyn Fn(&[f64], &[f64]) -> std::result::Result<(), String> + 'a;

fn coherent_input(gamma: f64, cutoff: usize) -> Result<PureState> {
    coherent_state(&FockSpace::uniform(1, cutoff)?, 0, Complex64::new(gamma, 0.0))
}

/// The ideally amplified coherent state `|gγ>` on the smallest adequate cutoff.
fn amplified_target(amplitude: f64) -> Result<PureState> {
    let mut cutoff = 8;
    loop {
        match coherent_input(amplitude, cutoff) {
            Err(Error::CutoffTooSmall { .. }) if cutoff < TARGET_MAX_CUTOFF => cutoff *= 2,
            other => return other,
        }
    }
}

fn device(order: usize, gain: f64, imp: Imperfection, detector: Detector) -> Result<ScissorSpec> {
    ScissorSpec::new(order, gain)?
        .with_resource_efficiency(imp.tau_s)?
        .with_detector(DetectorModel::new(detector.kind(), imp.tau_d)?)
}

/// Success probability and infidelity of a device on `|γ>`.
fn coherent_point(spec: &ScissorSpec, gamma: f64, cutoff: usize) -> Result<(f64, f64)> {
    let psi = coherent_input(gamma, cutoff)?;
    let h = run_heralded(spec, &psi)?;
    let f = fidelity(&h.state, &amplified_target(spec.gain() * gamma)?)?;
    Ok((h.probability, 1.0 - f))
}

/// Heralded state and report of a device acting on the lossy arm of an EPR state.
fn epr_point(spec: &ScissorSpec, chi: f64, t: f64, cutoff: usize) -> Result<EntanglementReport> {
    let branches = lossy_epr_branches(chi, t, cutoff)?;
    let map = build_scissor_circuit(spec, cutoff)?.heralding_map(cutoff)?;
    let out = map.apply_branches(&branches.branches, 1)?;
    let p = out.probability();
    EntanglementReport::evaluate(&out.state, p)
}

fn scissor_label(order: usize) -> String {
    format!("{order}scissor")
}

fn numbers(row: Vec<f64>) -> Vec<Cell> {
    row.into_iter().map(Cell::Number).collect()
}

fn col(table: &Table, name: &str) -> Vec<f64> {
    table.column(name).expect("column built by this module")
}

fn require(orders: &[usize], wanted: &[usize]) -> std::result::Result<(), String> {
    match wanted.iter().find(|w| !orders.contains(w)) {
        Some(w) => Err(format!("no {w}-device in the configured grid")),
        None => Ok(()),
    }
}

/// Success probability and infidelity against `|gγ>` for a generalized
/// scissor and for NLAs built from parallel 1-scissors.
pub fn run_fig3(config: &Fig3Config) -> Result<Report> {
    let gains = config.gain.points();
    let psi = coherent_input(config.gamma, config.cutoff)?;
    let own = scissor_label(config.order);
    let devices: Vec<String> = config
        .nla
        .iter()
        .map(|n| format!("nla{n}"))
        .chain(std::iter::once(own.clone()))
        .collect();
    let mut header = vec!["g".to_string()];
    header.extend(devices.iter().map(|d| format!("P_{d}")));
    header.extend(devices.iter().map(|d| format!("infidelity_{d}")));
    let rows = gains
        .par_iter()
        .map(|&g| -> Result<Vec<f64>> {
            let target = amplified_target(g * config.gamma)?;
            let mut probs = Vec::new();
            let mut infid = Vec::new();
            for &n in &config.nla {
                let (out, p) = tn_parallel(&psi, g, n)?;
                probs.push(p);
                infid.push(1.0 - fidelity(&out, &target)?);
            }
            let (p, inf) = match config.order {
                1 => {
                    let (out, p) = t1_apply(&psi, g, Sign::Plus)?;
                    (p, 1.0 - fidelity(&out, &target)?)
                }
                3 => {
                    let (out, p) = t3_apply(&psi, g)?;
                    (p, 1.0 - fidelity(&out, &target)?)
                }
                o => coherent_point(&ScissorSpec::new(o, g)?, config.gamma, config.cutoff)?,
            };
            probs.push(p);
            infid.push(inf);
            Ok(std::iter::once(g).chain(probs).chain(infid).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(header);
    for r in rows {
        table.push(numbers(r));
    }

    let panel = |suffix: &str, title: &str, y: &str, prefix: &str| Panel {
        name: suffix.into(),
        title: title.into(),
        x_label: "gain g".into(),
        y_label: y.into(),
        log_y: true,
        series: devices
            .iter()
            .map(|d| {
                let label = d.strip_prefix("nla").map_or_else(|| d.replace("scissor", "-scissor"), |n| format!("N={n}"));
                Series::new(label, &gains, &col(&table, &format!("{prefix}_{d}")))
            })
            .collect(),
    };
    let panels = vec![
        panel("a", &format!("Probability of success, γ = {}", config.gamma), "P", "P"),
        panel("b", &format!("Infidelity with |gγ>, γ = {}", config.gamma), "1 − F", "infidelity"),
    ];

    let beats = |n: usize| -> std::result::Result<(), String> {
        if !config.nla.contains(&n) {
            return Err(format!("N={n} is not in the configured NLA list"));
        }
        let (p_own, p_n) = (col(&table, &format!("P_{own}")), col(&table, &format!("P_nla{n}")));
        let (f_own, f_n) = (
            col(&table, &format!("infidelity_{own}")),
            col(&table, &format!("infidelity_nla{n}")),
        );
        let mut bad = Vec::new();
        for (i, g) in gains.iter().enumerate() {
            if !(p_own[i] > p_n[i]) {
                bad.push(format!("g={g:.3}: P {:.4e} ≤ {:.4e}", p_own[i], p_n[i]));
            }
            if !(f_own[i] < f_n[i]) {
                bad.push(format!("g={g:.3}: 1−F {:.4e} ≥ {:.4e}", f_own[i], f_n[i]));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("{} violations, first: {}", bad.len(), bad[0]))
        }
    };
    let d = &config.disabled_checks;
    let checks = vec![
        Check::evaluate(
            "beats_three_parallel",
            "generalized scissor has higher P and F than three parallel 1-scissors at every gain",
            d,
            || beats(3),
        ),
        Check::evaluate(
            "beats_four_parallel",
            "generalized scissor has higher P and F than four parallel 1-scissors at every gain",
            d,
            || beats(4),
        ),
    ];
    Ok(Report {
        name: config.name.clone(),
        table,
        panels,
        checks,
    })
}

/// GEOF and success probability of scissors on the lossy arm of an EPR state.
pub fn run_fig4(config: &Fig4Config) -> Result<Report> {
    let gains = config.gain.points();
    let (chi, t) = (config.chi, config.transmissivity);
    let baseline = gaussian_eof(&lossy_epr_covariance(chi, t)?)?;
    let bound = deterministic_bound(t)?;
    let mut header = vec!["g".to_string(), "geof_loss_channel".into(), "deterministic_bound".into()];
    let mut keys = Vec::new();
    for s in &config.settings {
        for &o in &config.orders {
            keys.push(format!("{}_{}", scissor_label(o), s.label()));
        }
    }
    header.extend(keys.iter().map(|k| format!("geof_{k}")));
    header.extend(keys.iter().map(|k| format!("P_{k}")));
    let jobs: Vec<(f64, Imperfection, usize)> = gains
        .iter()
        .flat_map(|&g| {
            config
                .settings
                .iter()
                .flat_map(move |&s| config.orders.iter().map(move |&o| (g, s, o)))
        })
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(g, s, o)| epr_point(&device(o, g, s, Detector::Pnr)?, chi, t, config.cutoff))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(header);
    for (i, &g) in gains.iter().enumerate() {
        let chunk = &reports[i * keys.len()..(i + 1) * keys.len()];
        let mut row = vec![g, baseline, bound];
        row.extend(chunk.iter().map(|r| r.geof));
        row.extend(chunk.iter().map(|r| r.probability));
        table.push(numbers(row));
    }

    let pretty = |k: &str| k.replace("scissor", "-scissor").replace('_', " ");
    let mut geof_series: Vec<Series> = keys
        .iter()
        .map(|k| Series::new(pretty(k), &gains, &col(&table, &format!("geof_{k}"))))
        .collect();
    geof_series.push(Series::new("loss channel", &gains, &col(&table, "geof_loss_channel")).dashed());
    geof_series.push(Series::new("deterministic bound", &gains, &col(&table, "deterministic_bound")).dashed());
    let panels = vec![
        Panel {
            name: "a".into(),
            title: format!("GEOF, χ = {chi}, T = {t}"),
            x_label: "gain g".into(),
            y_label: "GEOF (ebits)".into(),
            log_y: false,
            series: geof_series,
        },
        Panel {
            name: "b".into(),
            title: format!("Probability of success, χ = {chi}, T = {t}"),
            x_label: "gain g".into(),
            y_label: "P".into(),
            log_y: true,
            series: keys
                .iter()
                .map(|k| Series::new(pretty(k), &gains, &col(&table, &format!("P_{k}"))))
                .collect(),
        },
    ];

    let per_setting = |test: &GapTest<'_>| {
        require(&config.orders, &[1, 3])?;
        for s in &config.settings {
            let one = col(&table, &format!("geof_1scissor_{}", s.label()));
            let three = col(&table, &format!("geof_3scissor_{}", s.label()));
            test(&one, &three).map_err(|e| format!("{}: {e}", s.label()))?;
        }
        Ok(())
    };
    let d = &config.disabled_checks;
    let checks = vec![
        Check::evaluate(
            "three_above_one",
            "3-scissor GEOF exceeds 1-scissor GEOF at every gain",
            d,
            || {
                per_setting(&|one, three| {
                    match (0..gains.len()).find(|&i| !(three[i] > one[i] + GEOF_MARGIN)) {
                        Some(i) => Err(format!("g={:.3}: {:.6} vs {:.6}", gains[i], three[i], one[i])),
                        None => Ok(()),
                    }
                })
            },
        ),
        Check::evaluate(
            "three_crosses_bound",
            "3-scissor GEOF exceeds the deterministic bound for some gain",
            d,
            || {
                per_setting(&|_, three| {
                    let best = three.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    if best > bound + GEOF_MARGIN {
                        Ok(())
                    } else {
                        Err(format!("max {best:.6} vs bound {bound:.6}"))
                    }
                })
            },
        ),
        Check::evaluate(
            "one_below_bound",
            "1-scissor GEOF stays below the deterministic bound at every gain",
            d,
            || {
                per_setting(&|one, _| {
                    let best = one.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    if best < bound - GEOF_MARGIN {
                        Ok(())
                    } else {
                        Err(format!("max {best:.6} vs bound {bound:.6}"))
                    }
                })
            },
        ),
    ];
    Ok(Report {
        name: config.name.clone(),
        table,
        panels,
        checks,
    })
}

/// Total and Gaussian RCI of scissor-heralded lossy EPR states.
pub fn run_fig5(config: &Fig5Config) -> Result<Report> {
    let gains = config.gain.points();
    let (chi, t) = (config.chi, config.transmissivity);
    // Gaussian reference: the lossy EPR state itself, where both RCIs agree.
    let branches = lossy_epr_branches(chi, t, config.cutoff)?;
    let reference = DensityOperator::from_ensemble(&branches.branches)?.normalized()?;
    let ref_rci = rci(&reference)?;
    let ref_grci = gaussian_rci(&covariance_matrix(&reference)?)?;

    let mut header = vec!["g".to_string(), "rci_loss_channel".into(), "gaussian_rci_loss_channel".into()];
    for &o in &config.orders {
        header.push(format!("rci_{}", scissor_label(o)));
        header.push(format!("gaussian_rci_{}", scissor_label(o)));
    }
    let jobs: Vec<(f64, usize)> = gains
        .iter()
        .flat_map(|&g| config.orders.iter().map(move |&o| (g, o)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(g, o)| {
            epr_point(&device(o, g, Imperfection::PERFECT, Detector::Pnr)?, chi, t, config.cutoff)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(header);
    let k = config.orders.len();
    for (i, &g) in gains.iter().enumerate() {
        let mut row = vec![g, ref_rci, ref_grci];
        for r in &reports[i * k..(i + 1) * k] {
            row.push(r.rci);
            row.push(r.gaussian_rci);
        }
        table.push(numbers(row));
    }

    let mut series = Vec::new();
    for &o in &config.orders {
        let l = scissor_label(o);
        series.push(Series::new(format!("RCI {o}-scissor"), &gains, &col(&table, &format!("rci_{l}"))));
        series.push(
            Series::new(format!("Gaussian RCI {o}-scissor"), &gains, &col(&table, &format!("gaussian_rci_{l}")))
                .dashed(),
        );
    }
    let panels = vec![Panel {
        name: "a".into(),
        title: format!("RCI and Gaussian RCI, χ = {chi}, T = {t}"),
        x_label: "gain g".into(),
        y_label: "RCI (bits)".into(),
        log_y: false,
        series,
    }];

    let checks = vec![Check::evaluate(
        "less_non_gaussianity",
        "|RCI − Gaussian RCI| of the 3-scissor is below that of the 1-scissor at every gain",
        &config.disabled_checks,
        || {
            require(&config.orders, &[1, 3])?;
            let gap = |o: usize| -> Vec<f64> {
                let l = scissor_label(o);
                let r = col(&table, &format!("rci_{l}"));
                let gr = col(&table, &format!("gaussian_rci_{l}"));
                r.iter().zip(&gr).map(|(a, b)| (a - b).abs()).collect()
            };
            let (one, three) = (gap(1), gap(3));
            match (0..gains.len()).find(|&i| !(three[i] < one[i])) {
                Some(i) => Err(format!("g={:.3}: gap {:.6} vs {:.6}", gains[i], three[i], one[i])),
                None => Ok(()),
            }
        },
    )];
    Ok(Report {
        name: config.name.clone(),
        table,
        panels,
        checks,
    })
}

/// Infidelity with photon-number-resolving versus on-off detectors.
pub fn run_fig8(config: &Fig8Config) -> Result<Report> {
    let gains = config.gain.points();
    let mut keys = Vec::new();
    for &o in &config.orders {
        for &d in &config.detectors {
            keys.push((o, d));
        }
    }
    let name = |(o, d): &(usize, Detector)| format!("{}_{}", scissor_label(*o), d.label());
    let mut header = vec!["g".to_string()];
    header.extend(keys.iter().map(|k| format!("infidelity_{}", name(k))));
    header.extend(keys.iter().map(|k| format!("P_{}", name(k))));
    let jobs: Vec<(f64, usize, Detector)> = gains
        .iter()
        .flat_map(|&g| keys.iter().map(move |&(o, d)| (g, o, d)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(g, o, d)| coherent_point(&device(o, g, Imperfection::PERFECT, d)?, config.gamma, config.cutoff))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(header);
    for (i, &g) in gains.iter().enumerate() {
        let chunk = &points[i * keys.len()..(i + 1) * keys.len()];
        let mut row = vec![g];
        row.extend(chunk.iter().map(|p| p.1));
        row.extend(chunk.iter().map(|p| p.0));
        table.push(numbers(row));
    }
    let panels = vec![Panel {
        name: "a".into(),
        title: format!("Infidelity, PNR versus on-off detectors, γ = {}", config.gamma),
        x_label: "gain g".into(),
        y_label: "1 − F".into(),
        log_y: true,
        series: keys
            .iter()
            .map(|&(o, d)| {
                let label = format!("{o}-scissor {}", if d == Detector::Pnr { "SPD" } else { "on-off" });
                Series::new(label, &gains, &col(&table, &format!("infidelity_{}", name(&(o, d)))))
            })
            .collect(),
    }];
    let checks = vec![Check::evaluate(
        "on_off_small",
        "on-off detection changes the fidelity by less than the threshold at every gain",
        &config.disabled_checks,
        || {
            if !(config.detectors.contains(&Detector::Pnr) && config.detectors.contains(&Detector::OnOff)) {
                return Err("both detector kinds are needed".into());
            }
            for &o in &config.orders {
                let pnr = col(&table, &format!("infidelity_{}", name(&(o, Detector::Pnr))));
                let onoff = col(&table, &format!("infidelity_{}", name(&(o, Detector::OnOff))));
                if let Some(i) = (0..gains.len()).find(|&i| !((pnr[i] - onoff[i]).abs() < config.threshold)) {
                    return Err(format!(
                        "{o}-scissor at g={:.3}: |ΔF| = {:.3e}",
                        gains[i],
                        (pnr[i] - onoff[i]).abs()
                    ));
                }
            }
            Ok(())
        },
    )];
    Ok(Report {
        name: config.name.clone(),
        table,
        panels,
        checks,
    })
}

/// Success probability and infidelity versus resource transmissivity.
pub fn run_fig9(config: &Fig9Config) -> Result<Report> {
    let taus = config.tau_s.points();
    let g = config.gain;
    let mut header = vec!["tau_s".to_string()];
    for &o in &config.orders {
        header.push(format!("P_{}", scissor_label(o)));
        header.push(format!("infidelity_{}", scissor_label(o)));
    }
    header.push("infidelity_2scissor_perfect".into());
    let two = coherent_point(&ScissorSpec::new(2, g)?, config.gamma, config.cutoff)?.1;
    let jobs: Vec<(f64, usize)> = taus
        .iter()
        .flat_map(|&ts| config.orders.iter().map(move |&o| (ts, o)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(ts, o)| {
            let imp = Imperfection { tau_s: ts, tau_d: 1.0 };
            coherent_point(&device(o, g, imp, Detector::Pnr)?, config.gamma, config.cutoff)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(header);
    let k = config.orders.len();
    for (i, &ts) in taus.iter().enumerate() {
        let mut row = vec![ts];
        for p in &points[i * k..(i + 1) * k] {
            row.push(p.0);
            row.push(p.1);
        }
        row.push(two);
        table.push(numbers(row));
    }

    let mut infid: Vec<Series> = config
        .orders
        .iter()
        .map(|&o| Series::new(format!("{o}-scissor"), &taus, &col(&table, &format!("infidelity_{}", scissor_label(o)))))
        .collect();
    infid.push(Series::new("2-scissor, perfect", &taus, &col(&table, "infidelity_2scissor_perfect")).dashed());
    let panels = vec![
        Panel {
            name: "a".into(),
            title: format!("Probability of success, γ = {}, g = {g}", config.gamma),
            x_label: "resource transmissivity τs".into(),
            y_label: "P".into(),
            log_y: true,
            series: config
                .orders
                .iter()
                .map(|&o| Series::new(format!("{o}-scissor"), &taus, &col(&table, &format!("P_{}", scissor_label(o)))))
                .collect(),
        },
        Panel {
            name: "b".into(),
            title: format!("Infidelity, γ = {}, g = {g}", config.gamma),
            x_label: "resource transmissivity τs".into(),
            y_label: "1 − F".into(),
            log_y: true,
            series: infid,
        },
    ];

    let d = &config.disabled_checks;
    let checks = vec![
        Check::evaluate(
            "resource_loss_degrades",
            "lowering τs lowers both the success probability and the fidelity",
            d,
            || {
                for &o in &config.orders {
                    let p = col(&table, &format!("P_{}", scissor_label(o)));
                    let f = col(&table, &format!("infidelity_{}", scissor_label(o)));
                    for i in 1..taus.len() {
                        if !(p[i] >= p[i - 1] && f[i] <= f[i - 1]) {
                            return Err(format!("{o}-scissor between τs={:.3} and {:.3}", taus[i - 1], taus[i]));
                        }
                    }
                }
                Ok(())
            },
        ),
        Check::evaluate(
            "three_beats_one",
            "the 3-scissor keeps a higher fidelity than the 1-scissor at every τs",
            d,
            || {
                require(&config.orders, &[1, 3])?;
                let one = col(&table, "infidelity_1scissor");
                let three = col(&table, "infidelity_3scissor");
                match (0..taus.len()).find(|&i| !(three[i] < one[i])) {
                    Some(i) => Err(format!("τs={:.3}: {:.4e} vs {:.4e}", taus[i], three[i], one[i])),
                    None => Ok(()),
                }
            },
        ),
    ];
    Ok(Report {
        name: config.name.clone(),
        table,
        panels,
        checks,
    })
}

const SWEEP_HEADER: [&str; 14] = [
    "input",
    "order",
    "detector",
    "tau_s",
    "tau_d",
    "gamma",
    "chi",
    "transmissivity",
    "g",
    "probability",
    "infidelity",
    "geof",
    "rci",
    "gaussian_rci",
];

#[derive(Clone, Copy)]
struct GridPoint {
    order: usize,
    detector: Detector,
    imp: Imperfection,
    /// `γ` for coherent inputs, `(χ, T)` for EPR inputs.
    source: (f64, f64),
    gain: f64,
}

/// Every metric on the lexicographic grid order, detector, τs, τd, source
/// parameters, gain.
pub fn sweep(config: &GridConfig) -> Result<Report> {
    let mut points = Vec::new();
    let sources: Vec<(f64, f64)> = match config.input {
        InputKind::Coherent => config.gamma.iter().map(|&g| (g, f64::NAN)).collect(),
        InputKind::Epr => config
            .chi
            .iter()
            .flat_map(|&c| config.transmissivity.iter().map(move |&t| (c, t)))
            .collect(),
    };
    for &order in &config.orders {
        for &detector in &config.detectors {
            for &tau_s in &config.tau_s {
                for &tau_d in &config.tau_d {
                    for &source in &sources {
                        for gain in config.gain.points() {
                            points.push(GridPoint {
                                order,
                                detector,
                                imp: Imperfection { tau_s, tau_d },
                                source,
                                gain,
                            });
                        }
                    }
                }
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|pt| -> Result<Vec<Cell>> {
            let spec = device(pt.order, pt.gain, pt.imp, pt.detector)?;
            let mut row = vec![
                Cell::Text(
                    match config.input {
                        InputKind::Coherent => "coherent",
                        InputKind::Epr => "epr",
                    }
                    .into(),
                ),
                Cell::Number(pt.order as f64),
                Cell::Text(pt.detector.label().into()),
                pt.imp.tau_s.into(),
                pt.imp.tau_d.into(),
            ];
            match config.input {
                InputKind::Coherent => {
                    let (p, inf) = coherent_point(&spec, pt.source.0, config.cutoff)?;
                    row.extend([
                        pt.source.0.into(),
                        Cell::Empty,
                        Cell::Empty,
                        pt.gain.into(),
                        p.into(),
                        inf.into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                    ]);
                }
                InputKind::Epr => {
                    let r = epr_point(&spec, pt.source.0, pt.source.1, config.cutoff)?;
                    row.extend([
                        Cell::Empty,
                        pt.source.0.into(),
                        pt.source.1.into(),
                        pt.gain.into(),
                        r.probability.into(),
                        Cell::Empty,
                        r.geof.into(),
                        r.rci.into(),
                        r.gaussian_rci.into(),
                    ]);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(SWEEP_HEADER.iter().map(|s| s.to_string()).collect());
    for r in rows {
        table.push(r);
    }
    Ok(Report {
        name: config.name.clone(),
        table,
        panels: Vec::new(),
        checks: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{Range, SweepConfig};

    #[test]
    fn fig3_defaults_have_eight_curves() {
        let r = run_fig3(&Fig3Config {
            gain: Range::new(1.0, 10.0, 3),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(r.table.header.len(), 1 + 2 * 5);
        let curves: usize = r.panels.iter().map(|p| p.series.len()).sum();
        assert_eq!(curves, 10);
        // The library call and the table agree at g = 1.
        let psi = coherent_input(0.1, 12).unwrap();
        let (_, p) = t3_apply(&psi, 1.0).unwrap();
        assert_eq!(r.table.column("P_3scissor").unwrap()[0], p);
    }

    #[test]
    fn fig3_vacuum_input_is_a_fixed_point() {
        let r = run_fig3(&Fig3Config {
            gamma: 0.0,
            gain: Range::new(1.0, 10.0, 4),
            ..Default::default()
        })
        .unwrap();
        for h in r.table.header.iter().filter(|h| h.starts_with("infidelity")) {
            assert!(r.table.column(h).unwrap().iter().all(|v| v.abs() < 1e-14), "{h}");
        }
    }

    #[test]
    fn fig9_full_resource_matches_fig3() {
        let f9 = run_fig9(&Fig9Config {
            tau_s: Range::new(1.0, 1.0, 1),
            ..Default::default()
        })
        .unwrap();
        let f3 = run_fig3(&Fig3Config {
            gain: Range::new(4.0, 4.0, 1),
            ..Default::default()
        })
        .unwrap();
        for key in ["P_3scissor", "infidelity_3scissor"] {
            let (a, b) = (f9.table.column(key).unwrap()[0], f3.table.column(key).unwrap()[0]);
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300) || (a - b).abs() < 1e-14, "{key}: {a} vs {b}");
        }
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let mut c = SweepConfig::default().sweep;
        c.gain = Range::new(1.0, 3.0, 3);
        c.detectors = vec![Detector::Pnr, Detector::OnOff];
        let a = sweep(&c).unwrap();
        assert_eq!(a.table.rows.len(), 2 * 2 * 3);
        assert_eq!(a.table.to_csv().unwrap(), sweep(&c).unwrap().table.to_csv().unwrap());
        let g = a.table.column("g").unwrap();
        assert_eq!(&g[..3], &[1.0, 2.0, 3.0]);
        // P falls with g for the vacuum-dominated input.
        let p = a.table.column("probability").unwrap();
        assert!(p[0] > p[1] && p[1] > p[2]);

        c.gain = Range::new(2.0, 2.0, 1);
        c.orders = vec![3];
        c.detectors = vec![Detector::Pnr];
        assert_eq!(sweep(&c).unwrap().table.rows.len(), 1);
    }

    #[test]
    fn epr_sweep_fills_entanglement_columns() {
        let mut c = SweepConfig::default().sweep;
        c.input = InputKind::Epr;
        c.gain = Range::new(2.0, 2.0, 1);
        c.orders = vec![1];
        let r = sweep(&c).unwrap();
        assert!(r.table.column("geof").unwrap()[0] > 0.0);
        assert!(r.table.column("infidelity").unwrap()[0].is_nan());
    }
}
