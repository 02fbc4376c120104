//! Region and wave inventory for a few parameter pairs.

use qgpwave::regions::{classify, waves_at, Params, SQRT2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for &(c, k) in &[
        (1.0, 0.3),
        (1.0, -5.0),
        (2.0, 1.0),
        (SQRT2, 0.3),
        (SQRT2, 1.0),
        (0.5, 0.5),
    ] {
        let p = Params::new(c, k)?;
        println!(
            "c = {c:.4}, kappa = {k:5}: {} {:?}",
            classify(p),
            waves_at(p)
        );
    }
    Ok(())
}
