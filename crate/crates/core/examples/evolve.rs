//! Transports a dark soliton and then perturbs it to watch the modulated distance.

use qgpwave::evolve::{run, stability_experiment, FieldState, RunOptions};
use qgpwave::profiles::{soliton_profile, Grid};
use qgpwave::regions::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::new(1.0, -1.0)?;
    let grid = Grid::new(50.0, 0.1)?;
    let state = FieldState::from_profile(&soliton_profile(p, Grid::new(50.0, 1e-3)?)?, grid)?;
    let (_, report) = run(
        state,
        RunOptions {
            t_end: 1.0,
            dt: None,
            record_every: 0.25,
        },
        None,
    )?;
    println!(
        "translate: dt {:.2e}, energy drift {:.1e}, momentum drift {:.1e}",
        report.dt,
        report.max_energy_drift(),
        report.max_momentum_drift()
    );

    let stab = stability_experiment(
        Params::new(1.0, -5.0)?,
        1e-3,
        2.0,
        Grid::new(30.0, 0.05)?,
        None,
        0.5,
    )?;
    for (t, d) in stab.times.iter().zip(&stab.modulated_distance) {
        println!("t = {t:.2}  distance {d:.3e}");
    }
    println!("min rho {:.4}", stab.lowest_rho());
    Ok(())
}
