//! Encode and decode throughput measurement.
//!
//! Figures are relative: every method runs on the same stripe in
//! interleaved rounds and the fastest round of each is kept.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::stair::{Cell, Method, StairCode, StairConfig, Strategy};

/// Stripe size used when none is given: 32 MiB.
pub const DEFAULT_STRIPE_BYTES: usize = 32 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub config: String,
    /// `encode-<method>` or `decode`.
    pub op: String,
    pub symbol_size: usize,
    pub mult_xors: usize,
    pub best_seconds: f64,
    /// User data processed per second, in 10^6 bytes.
    pub mb_per_s: f64,
}

/// Largest symbol size, a multiple of 64 bytes, such that a stripe fits in
/// `stripe_bytes`. Never below 64.
pub fn symbol_size_for(cfg: &StairConfig, stripe_bytes: usize) -> usize {
    (stripe_bytes / (cfg.n() * cfg.r()) / 64 * 64).max(64)
}

/// The decode case exercising every parity: chunks `0..m` lost whole and
/// chunk `m + l` losing its top `e_l` sectors.
pub fn worst_case_loss(cfg: &StairConfig) -> Vec<Cell> {
    let mut lost: Vec<Cell> = (0..cfg.m()).flat_map(|c| (0..cfg.r()).map(move |r| Cell::new(r, c))).collect();
    for (l, &e) in cfg.e().iter().enumerate() {
        lost.extend((0..e).map(|r| Cell::new(r, cfg.m() + l)));
    }
    lost
}

fn label(cfg: &StairConfig) -> String {
    let e: Vec<String> = cfg.e().iter().map(ToString::to_string).collect();
    format!("n={} r={} m={} e=({}) w={}", cfg.n(), cfg.r(), cfg.m(), e.join(","), cfg.w())
}

/// Times each encoder and the worst-case decode for `rounds` rounds.
pub fn run(code: &StairCode, symbol_size: usize, rounds: usize) -> Result<Vec<BenchRow>> {
    let cfg = code.config();
    let mut stripe = code.new_stripe(symbol_size)?;
    stripe.randomize_data(cfg, &mut ChaCha8Rng::seed_from_u64(1));
    let lost = worst_case_loss(cfg);
    let schedule = code.plan_decode(&lost, Strategy::Practical)?;

    let mut best = [Duration::MAX; 4];
    for _ in 0..rounds.max(1) {
        for (i, &m) in Method::ALL.iter().enumerate() {
            let t = Instant::now();
            code.encode(&mut stripe, m)?;
            best[i] = best[i].min(t.elapsed());
        }
        let mut damaged = stripe.clone();
        damaged.erase(&lost);
        let t = Instant::now();
        schedule.run(code.field(), &mut damaged);
        best[3] = best[3].min(t.elapsed());
        debug_assert!(damaged == stripe);
    }

    let data = (cfg.data_cells_per_stripe() * symbol_size) as f64;
    let row = |op: String, mult_xors, d: Duration| BenchRow {
        config: label(cfg),
        op,
        symbol_size,
        mult_xors,
        best_seconds: d.as_secs_f64(),
        mb_per_s: data / d.as_secs_f64().max(1e-12) / 1e6,
    };
    let mut rows: Vec<BenchRow> =
        Method::ALL.iter().zip(best).map(|(&m, d)| row(format!("encode-{m}"), code.xor_count(m), d)).collect();
    rows.push(row("decode".into(), schedule.mult_xors(), best[3]));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing() {
        let cfg = StairConfig::new(16, 16, 2, &[1, 2], 8).unwrap();
        assert_eq!(symbol_size_for(&cfg, DEFAULT_STRIPE_BYTES), 128 << 10);
        assert_eq!(symbol_size_for(&cfg, 10), 64);
    }

    #[test]
    fn tiny_stripes_bench_and_decode() {
        for e in [&[][..], &[1], &[1, 1, 2]] {
            let code = StairCode::new(StairConfig::new(8, 4, 2, e, 8).unwrap()).unwrap();
            let rows = run(&code, 64, 2).unwrap();
            assert_eq!(rows.len(), 4);
            assert!(rows.iter().all(|r| r.mb_per_s > 0.0));
            assert_eq!(rows[1].mult_xors, code.config().upstairs_mult_xors());
        }
    }

    #[test]
    fn worst_case_is_recoverable() {
        let cfg = StairConfig::new(8, 4, 2, &[1, 1, 2], 8).unwrap();
        let lost = worst_case_loss(&cfg);
        assert_eq!(lost.len(), 2 * 4 + 4);
        let code = StairCode::new(cfg.clone()).unwrap();
        let mut s = code.new_stripe(8).unwrap();
        s.randomize_data(&cfg, &mut ChaCha8Rng::seed_from_u64(3));
        code.encode(&mut s, Method::Upstairs).unwrap();
        let mut d = s.clone();
        d.erase(&lost);
        code.plan_decode(&lost, Strategy::Practical).unwrap().run(code.field(), &mut d);
        assert_eq!(d, s);
    }
}
