//! Resource loss, detector inefficiency and on-off detection in a 3-scissor.

use num_complex::Complex64;
use scissorlab::fock::{coherent_state, FockSpace};
use scissorlab::measurement::{DetectorKind, DetectorModel};
use scissorlab::metrics::fidelity;
use scissorlab::scissors::{run_heralded, ScissorSpec};

fn main() -> scissorlab::Result<()> {
    let (gamma, g) = (0.1, 4.0);
    let psi = coherent_state(&FockSpace::uniform(1, 12)?, 0, Complex64::new(gamma, 0.0))?;
    let target = coherent_state(&FockSpace::uniform(1, 30)?, 0, Complex64::new(g * gamma, 0.0))?;
    let settings = [
        ("ideal", 1.0, DetectorModel::ideal_pnr()),
        ("resource τs = 0.7", 0.7, DetectorModel::ideal_pnr()),
        ("detectors τd = 0.7", 1.0, DetectorModel::new(DetectorKind::Pnr, 0.7)?),
        ("on-off detectors", 1.0, DetectorModel::new(DetectorKind::OnOff, 1.0)?),
        ("two photon resource", 1.0, DetectorModel::ideal_pnr()),
    ];
    for (i, (label, tau_s, detector)) in settings.into_iter().enumerate() {
        let mut spec = ScissorSpec::new(3, g)?.with_resource_efficiency(tau_s)?.with_detector(detector)?;
        if i == 4 {
            spec = spec.with_resource_photons(2)?;
        }
        let h = run_heralded(&spec, &psi)?;
        println!("{label:>20}: P = {:.4e}, 1 − F = {:.4e}", h.probability, 1.0 - fidelity(&h.state, &target)?);
    }
    Ok(())
}
