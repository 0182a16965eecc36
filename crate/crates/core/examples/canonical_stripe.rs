//! Every row and column of the extended grid is a codeword of its
//! component code, including the virtual rows below the stripe.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stair::{Method, StairCode, StairConfig};

fn main() -> stair::Result<()> {
    let code = StairCode::new(StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?)?;
    let mut stripe = code.new_stripe(32)?;
    stripe.randomize_data(code.config(), &mut ChaCha8Rng::seed_from_u64(3));
    code.encode(&mut stripe, Method::Downstairs)?;

    let canon = code.canonical(&stripe)?;
    let col_code = code.col_code().expect("e is non-empty");
    let rows_ok = (0..canon.rows()).all(|i| code.row_code().check_codeword(&canon.row(i)));
    let cols_ok = (0..canon.cols()).all(|j| col_code.check_codeword(&canon.column(j)));
    println!("{}x{} grid: rows ok {rows_ok}, columns ok {cols_ok}", canon.rows(), canon.cols());
    println!("outside global parities all zero: {}", canon.outside_parities_zero());
    assert!(rows_ok && cols_ok);
    Ok(())
}
