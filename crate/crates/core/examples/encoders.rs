//! The three parity generators produce the same stripe at different cost.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stair::{Method, StairCode, StairConfig};

fn main() -> stair::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for e in [vec![4], vec![1, 1, 1, 1], vec![1, 3]] {
        let code = StairCode::new(StairConfig::new(8, 16, 2, &e, 8)?)?;
        let mut base = code.new_stripe(64)?;
        base.randomize_data(code.config(), &mut rng);

        let mut outputs = Vec::new();
        for m in Method::ALL {
            let mut s = base.clone();
            code.encode(&mut s, m)?;
            outputs.push(s);
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]));

        let c = code.cost();
        println!(
            "e={e:?}: standard {} upstairs {} downstairs {} -> {}",
            c.x_standard, c.x_up, c.x_down, c.chosen
        );
    }
    Ok(())
}
