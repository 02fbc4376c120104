//! The minimal energy at fixed momentum, and the energy-momentum diagram.

use qgpwave::criticals::{critical_values, energy_momentum_diagram, min_curve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = -50.0;
    let cv = critical_values(k)?;
    let qs: Vec<f64> = (0..=10).map(|i| 0.2 * cv.q_star * i as f64).collect();
    for pt in min_curve(k, &qs)? {
        println!("q = {:.4}  E_min = {:.6}  c = {:?}", pt.q, pt.e_min, pt.c);
    }
    // Tangent reversal of the diagram: dp/dc changes sign once.
    let diag = energy_momentum_diagram(k, 200)?;
    let turn = diag
        .windows(3)
        .find(|w| (w[1].2 - w[0].2).signum() != (w[2].2 - w[1].2).signum());
    if let Some(w) = turn {
        println!(
            "diagram cusp near c = {:.3} (E = {:.4}, p = {:.4})",
            w[1].0, w[1].1, w[1].2
        );
    }
    Ok(())
}
