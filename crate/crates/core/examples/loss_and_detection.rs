//! Pure loss and imperfect photon counting on a two-photon state.

use scissorlab::channels::{loss_on_kraus_branches, pure_loss};
use scissorlab::fock::{fock_state, FockSpace};
use scissorlab::measurement::{detect, ClickPattern, DetectorKind, DetectorModel, Outcome};

fn main() -> scissorlab::Result<()> {
    let space = FockSpace::uniform(1, 2)?;
    let two = fock_state(&space, &[2])?;

    let branches = loss_on_kraus_branches(&two, 0, 0.5, 2)?;
    println!("|2> through loss τ = 0.5, weight of each lost-photon branch:");
    for (k, b) in branches.branches.iter().enumerate() {
        println!("  k = {k}: {:.3}", b.norm_sq());
    }
    let rho = pure_loss(&two, 0, 0.5)?;
    println!("  output photon distribution {:?}", rho.photon_distribution(0)?);

    for eff in [1.0, 0.7] {
        let pnr = DetectorModel::new(DetectorKind::Pnr, eff)?;
        let onoff = DetectorModel::new(DetectorKind::OnOff, eff)?;
        println!("\ndetectors with efficiency {eff} on |2>:");
        for n in 0..=2 {
            let (_, p) = detect(&two, &[0], &ClickPattern::from_counts(&[n]), &pnr)?;
            println!("  PNR reads {n}: {p:.3}");
        }
        let (_, p) = detect(&two, &[0], &ClickPattern::new(vec![Outcome::On]), &onoff)?;
        println!("  on-off clicks: {p:.3}");
    }
    Ok(())
}
