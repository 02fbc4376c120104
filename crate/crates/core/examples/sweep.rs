//! Region map over a parameter window, computed in parallel.

use qgpwave::regions::{classify, Params, Region};
use rayon::prelude::*;
use std::collections::BTreeMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 200;
    let cells: Vec<Region> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let c = 3.0 * (i % n) as f64 / (n - 1) as f64;
            let k = -2.0 + 4.0 * (i / n) as f64 / (n - 1) as f64;
            Params::new(c, k).map(classify)
        })
        .collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in cells {
        *counts.entry(r.to_string()).or_default() += 1;
    }
    for (r, n) in counts {
        println!("{r:>8}: {n}");
    }
    Ok(())
}
