//! Critical speeds and momenta for negative kappa.

use qgpwave::criticals::{critical_values, kappa0};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("kappa0 = {:.9}", kappa0());
    for &k in &[-1.0, -3.0, -10.0, -50.0] {
        let cv = critical_values(k)?;
        println!(
            "kappa {k:6}: c_tilde {:?}, c_star {:.6}, q_star {:.6}, E_black {:.6}",
            cv.c_tilde, cv.c_star, cv.q_star, cv.e_black
        );
    }
    Ok(())
}
