//! Linear optics in a truncated Fock basis: Hong–Ou–Mandel interference and
//! a coherent state split on a beamsplitter.

use num_complex::Complex64;
use scissorlab::fock::{coherent_state, fock_state, tensor, Circuit, FockSpace};

fn main() -> scissorlab::Result<()> {
    let space = FockSpace::uniform(2, 2)?;
    let mut hom = Circuit::new(space.clone());
    hom.beamsplitter(0, 1, 0.5)?;
    let out = hom.run(&fock_state(&space, &[1, 1])?)?;
    println!("|1,1> through a 50:50 beamsplitter:");
    for occ in [[2, 0], [1, 1], [0, 2]] {
        println!("  P{occ:?} = {:.6}", out.amplitude(&occ)?.norm_sqr());
    }

    let one = FockSpace::uniform(1, 20)?;
    let alpha = Complex64::new(1.2, 0.0);
    let input = tensor(&coherent_state(&one, 0, alpha)?, &coherent_state(&one, 0, Complex64::new(0.0, 0.0))?);
    let mut split = Circuit::new(input.space().clone());
    split.beamsplitter(0, 1, 0.3)?.phase(1, std::f64::consts::FRAC_PI_2)?;
    let out = split.run(&input)?;
    println!("\n|{alpha}> on a T = 0.3 beamsplitter:");
    println!("  <n_0> = {:.6} (expected {:.6})", out.mean_photons(0)?, 0.3 * alpha.norm_sqr());
    println!("  <n_1> = {:.6} (expected {:.6})", out.mean_photons(1)?, 0.7 * alpha.norm_sqr());
    println!("  transfer matrix:\n{:.4}", split.transfer_matrix()?);
    Ok(())
}
