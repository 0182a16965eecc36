//! Parity cells touched per data update, and which ones for a single cell.

use stair::{Cell, StairCode, StairConfig};

fn main() -> stair::Result<()> {
    for e in [vec![], vec![4], vec![2, 2], vec![1, 1, 1, 1]] {
        let code = StairCode::new(StairConfig::new(16, 16, 2, &e, 8)?)?;
        println!("n=16 r=16 m=2 e={e:?}: {:.3} parity cells per update", code.update_penalty());
    }

    let code = StairCode::new(StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?)?;
    let deps = code.parity_dependents(Cell::new(0, 0))?;
    let list: Vec<String> = deps.iter().map(|c| format!("({},{})", c.row, c.col)).collect();
    println!("cell (0,0) feeds {} parities: {}", deps.len(), list.join(" "));
    Ok(())
}
