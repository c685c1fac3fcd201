//! Cat-state tele-amplification approaching the 3-scissor as the cat shrinks.

use num_complex::Complex64;
use scissorlab::fock::{coherent_state, FockSpace};
use scissorlab::metrics::fidelity;
use scissorlab::scissors::{cat_amplitude, t3_apply, teleamp_4cat, teleamp_gain};

fn main() -> scissorlab::Result<()> {
    let (gamma, g) = (0.1, 2.0);
    let t_b = g * g / (1.0 + g * g);
    println!("gain of the tele-amplifier: {:.6}", teleamp_gain(0.5, t_b)?);
    let psi = coherent_state(&FockSpace::uniform(1, 14)?, 0, Complex64::new(gamma, 0.0))?;
    let (scissor, _) = t3_apply(&psi, g)?;
    for alpha in [0.3, 0.1, 0.03, 0.01, 0.003] {
        let beta = cat_amplitude(Complex64::new(alpha, 0.0), 0.5, t_b)?;
        let (out, p) = teleamp_4cat(Complex64::new(gamma, 0.0), beta, 0.5, t_b, 14)?;
        println!(
            "α = {alpha:<6} P = {p:.4e}  1 − F(3-scissor) = {:.3e}",
            1.0 - fidelity(&out, &scissor.normalized()?)?
        );
    }
    Ok(())
}
