//! Encode one stripe, lose two devices and a few sectors, decode.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stair::{FailurePattern, StairCode, StairConfig};

fn main() -> stair::Result<()> {
    // 8 devices, 4 sectors per chunk, 2 device failures, sector bursts (1,1,2)
    let cfg = StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?;
    let code = StairCode::new(cfg.clone())?;

    let mut stripe = code.new_stripe(512)?;
    stripe.randomize_data(&cfg, &mut ChaCha8Rng::seed_from_u64(7));
    code.encode(&mut stripe, code.choose_method())?;
    let clean = stripe.clone();

    let mut pattern = FailurePattern::new();
    pattern.fail_chunk(1).fail_chunk(6);
    pattern.fail_sector(0, 2).fail_sector(3, 4).fail_sector(1, 5).fail_sector(2, 5);
    stripe.erase(&pattern.lost_cells(&cfg));

    code.decode(&mut stripe, &pattern)?;
    assert_eq!(stripe, clean);
    println!("{cfg}: recovered {} lost sectors", pattern.lost_cells(&cfg).len());
    Ok(())
}
