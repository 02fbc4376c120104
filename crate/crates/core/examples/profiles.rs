//! Samples a dark soliton, a cuspon and a compacton and checks their residuals.

use qgpwave::profiles::{
    compacton_profile, cuspon_profile, residual_first_integral, residual_second_order,
    soliton_profile, Grid,
};
use qgpwave::regions::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(20.0, 1e-3)?;
    let sol = soliton_profile(Params::new(1.0, -5.0)?, grid)?;
    println!(
        "soliton  eta(0) = {:.6}, residual {:.2e}",
        sol.eta[sol.len() / 2],
        residual_first_integral(&sol)
    );

    let cus = cuspon_profile(Params::new(1.0, 0.2)?, grid)?;
    println!(
        "cuspon   eta(0) = {:.6}, singular at {:?}, residual {:.2e}",
        cus.eta[cus.len() / 2],
        cus.singular_points,
        residual_first_integral(&cus)
    );

    let comp = compacton_profile(1.0, 1, Grid::new(5.0, 1e-3)?)?;
    println!(
        "compacton zeros {:?}, residual {:.2e}",
        comp.singular_points,
        residual_second_order(&comp)
    );
    Ok(())
}
