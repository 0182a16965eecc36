//! Prints the line-by-line recovery plan for the worst-case loss of the
//! n=8, r=4, m=2, e=(1,1,2) code: chunks 6 and 7 plus the deepest sector
//! bursts allowed in chunks 3, 4 and 5.
//!
//! Coordinates are (row, col) in the canonical grid, where rows 4..6 are
//! virtual column parities and columns 8..11 hold the global parities.

use stair::stair::{Line, Strategy};
use stair::{Cell, StairCode, StairConfig};

fn main() -> stair::Result<()> {
    let code = StairCode::new(StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?)?;
    let mut lost: Vec<Cell> = (0..4).flat_map(|r| [Cell::new(r, 6), Cell::new(r, 7)]).collect();
    lost.extend([Cell::new(3, 3), Cell::new(3, 4), Cell::new(2, 5), Cell::new(3, 5)]);

    let plan = code.plan_decode(&lost, Strategy::Upstairs)?;
    let fmt = |cells: &[Cell]| cells.iter().map(|c| format!("({},{})", c.row, c.col)).collect::<Vec<_>>().join(" ");
    for (i, step) in plan.steps().iter().enumerate() {
        let line = match step.line {
            Line::Row(r) => format!("row {r}"),
            Line::Col(c) => format!("col {c}"),
        };
        println!("{:>2}  {line:<6}  {}  ->  {}", i + 1, fmt(&step.inputs), fmt(&step.outputs));
    }
    println!("{} Mult_XORs", plan.mult_xors());
    Ok(())
}
