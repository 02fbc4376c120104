//! Energy and momentum from closed forms against quadrature of sampled profiles.

use qgpwave::observables::{cuspon_observables, observables_quadrature, soliton_observables};
use qgpwave::profiles::{cuspon_profile, soliton_profile, Grid};
use qgpwave::regions::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(40.0, 1e-3)?;
    for &(c, k) in &[(0.5, -1.0), (1.0, 0.3), (2.0, 1.0)] {
        let p = Params::new(c, k)?;
        let closed = soliton_observables(p)?;
        let quad = observables_quadrature(&soliton_profile(p, grid)?)?;
        println!(
            "soliton ({c}, {k}): E = {:.10} (quad {:.10}), p = {:.10} (quad {:.10}), dp/dc = {:?}",
            closed.energy, quad.energy, closed.momentum, quad.momentum, closed.dp_dc
        );
    }
    let p = Params::new(1.0, 0.2)?;
    let closed = cuspon_observables(p)?;
    let quad = observables_quadrature(&cuspon_profile(p, grid)?)?;
    println!(
        "cuspon (1, 0.2): E = {:.10} (quad {:.10}), p = {:.10} (quad {:.10})",
        closed.energy, quad.energy, closed.momentum, quad.momentum
    );
    Ok(())
}
