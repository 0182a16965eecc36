//! Simulated stripe loss against the exact value at an inflated sector
//! failure rate.

use stair::reliability::{p_str, ChunkFailureDist, Coverage};
use stair::sim::simulate;

fn main() -> stair::Result<()> {
    let dist = ChunkFailureDist::independent(16, 1e-3)?;
    let codes: Vec<Coverage> = ["rs", "sd:1", "stair:1,2", "stair:3"].iter().map(|c| c.parse()).collect::<Result<_, _>>()?;
    let report = simulate(&codes, 7, &dist, 200_000, 42);
    for (code, est) in codes.iter().zip(&report.estimates) {
        let exact = p_str(code, 7, &dist);
        println!(
            "{:<10} exact {exact:.4e}  simulated {:.4e} +/- {:.1e}  within 3 sigma: {}",
            code.to_string(),
            est.p,
            est.sigma,
            est.within_sigmas(exact, 3.0)
        );
    }
    print!("{}", report.histogram_csv());
    Ok(())
}
