//! Noiseless amplification of a weak coherent state by 1- and 3-photon
//! scissors, from the closed forms and from the heralded interferometers.

use num_complex::Complex64;
use scissorlab::fock::{coherent_state, FockSpace};
use scissorlab::metrics::fidelity;
use scissorlab::scissors::{run_heralded, t1_apply, t3_apply, tn_parallel, ScissorSpec, Sign};

fn main() -> scissorlab::Result<()> {
    let gamma = 0.3;
    let psi = coherent_state(&FockSpace::uniform(1, 12)?, 0, Complex64::new(gamma, 0.0))?;
    println!("{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}", "g", "P(1-sc)", "1-F(1-sc)", "P(3-sc)", "1-F(3-sc)", "1-F(N=3)");
    for g in [1.0, 2.0, 3.0, 4.0] {
        let target = coherent_state(&FockSpace::uniform(1, 30)?, 0, Complex64::new(g * gamma, 0.0))?;
        let (one, p1) = t1_apply(&psi, g, Sign::Plus)?;
        let (three, p3) = t3_apply(&psi, g)?;
        let (nla, _) = tn_parallel(&psi, g, 3)?;
        println!(
            "{g:>4} {p1:>12.4e} {:>12.4e} {p3:>12.4e} {:>12.4e} {:>12.4e}",
            1.0 - fidelity(&one, &target)?,
            1.0 - fidelity(&three, &target)?,
            1.0 - fidelity(&nla, &target)?,
        );
    }

    let g = 2.0;
    let heralded = run_heralded(&ScissorSpec::new(3, g)?, &psi)?;
    let (closed, p) = t3_apply(&psi, g)?;
    println!("\n3-scissor interferometer at g = {g}:");
    println!("  P = {:.10e} (closed form {p:.10e})", heralded.probability);
    println!("  fidelity with closed form = {:.12}", fidelity(&heralded.state, &closed.normalized()?)?);
    println!("  per-pattern probabilities {:?}", heralded.pattern_probabilities);
    Ok(())
}
