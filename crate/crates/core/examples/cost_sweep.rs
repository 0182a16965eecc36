//! Mult_XOR cost of every e vector with s = 4 on an 8-device array.
//! Upstairs wins for many small bursts, downstairs for few deep ones.

use stair::cli::{cost_row, e_sweep, render, Format};
use stair::StairConfig;

fn main() -> anyhow::Result<()> {
    let rows = e_sweep(8, 16, 2, 4)
        .into_iter()
        .map(|e| cost_row(StairConfig::new(8, 16, 2, &e, 8)?))
        .collect::<stair::Result<Vec<_>>>()?;
    print!("{}", render(&rows, Format::Csv)?);
    Ok(())
}
