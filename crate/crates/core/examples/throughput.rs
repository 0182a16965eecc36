//! Relative encode and decode speed on a 16x16 array. Pass a stripe size
//! in MiB as the first argument (default 8).

use stair::bench;
use stair::cli::{render, Format};
use stair::{StairCode, StairConfig};

fn main() -> anyhow::Result<()> {
    let mib: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(8);
    for e in [vec![1, 1, 1, 1], vec![4]] {
        let code = StairCode::new(StairConfig::new(16, 16, 2, &e, 8)?)?;
        let symbol = bench::symbol_size_for(code.config(), mib << 20);
        print!("{}", render(&bench::run(&code, symbol, 3)?, Format::Csv)?);
    }
    Ok(())
}
