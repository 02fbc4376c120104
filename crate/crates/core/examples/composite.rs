//! A composite wave: a central bubble glued to cuspon tails.

use qgpwave::profiles::{composite_profile, composite_spec, residual_first_integral_with, Grid};
use qgpwave::regions::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for &(c, k) in &[(1.0, 0.5), (1.0, 0.4)] {
        let spec = composite_spec(Params::new(c, k)?, -10.0, None)?;
        let prof = composite_profile(&spec, Grid::new(20.0, 1e-3)?)?;
        println!(
            "({c}, {k}): b0 = {:.6}, k0 = {:.6}, singular points {:?}, residual {:.2e}",
            spec.b0,
            spec.k0,
            prof.singular_points,
            residual_first_integral_with(&prof, 5.0 * prof.h)
        );
    }
    Ok(())
}
