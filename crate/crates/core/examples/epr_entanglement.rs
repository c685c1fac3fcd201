//! Entanglement recovered by scissors after an EPR arm crosses a lossy channel.

use scissorlab::metrics::{deterministic_bound, gaussian_eof, lossy_epr_covariance, EntanglementReport};
use scissorlab::scissors::{build_scissor_circuit, lossy_epr_branches, ScissorSpec};

fn main() -> scissorlab::Result<()> {
    let (chi, t, cutoff) = (0.3, 0.1, 12);
    let bound = deterministic_bound(t)?;
    println!("loss channel alone: GEOF = {:.4}", gaussian_eof(&lossy_epr_covariance(chi, t)?)?);
    println!("deterministic bound at T = {t}: {bound:.4} ebits\n");

    let branches = lossy_epr_branches(chi, t, cutoff)?;
    println!("{:>4} {:>6} {:>8} {:>8} {:>8} {:>10}", "g", "order", "GEOF", "RCI", "G-RCI", "P");
    for g in [1.0, 3.0, 5.0] {
        for order in [1, 3] {
            let map = build_scissor_circuit(&ScissorSpec::new(order, g)?, cutoff)?.heralding_map(cutoff)?;
            let out = map.apply_branches(&branches.branches, 1)?;
            let r = EntanglementReport::evaluate(&out.state, out.probability())?;
            let mark = if r.geof > bound { " above bound" } else { "" };
            println!(
                "{g:>4} {order:>6} {:>8.4} {:>8.4} {:>8.4} {:>10.3e}{mark}",
                r.geof, r.rci, r.gaussian_rci, r.probability
            );
        }
    }
    Ok(())
}
