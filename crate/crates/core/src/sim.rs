//! Failure injection and Monte-Carlo estimates of stripe loss.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::reliability::{ChunkFailureDist, Coverage};
use crate::stair::{Cell, FailurePattern, StairConfig, Stripe};

/// Trials per independently seeded block. Fixed so results do not depend
/// on how many workers run the blocks.
const BLOCK: u64 = 1 << 14;

/// A random failure pattern, reproducible from `seed`.
///
/// With `within`, up to `m` chunks fail and the partially failed chunks
/// are assigned to distinct coverage slots, each losing at most its slot's
/// worth of sectors. Without it, every cell is lost independently with a
/// per-pattern rate drawn from `[0, 0.5)`.
pub fn sample_pattern(cfg: &StairConfig, seed: u64, within: bool) -> FailurePattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, r) = (cfg.n(), cfg.r());
    let mut p = FailurePattern::new();
    if !within {
        let rate = rng.gen_range(0.0..0.5);
        for col in 0..n {
            for row in 0..r {
                if rng.gen_bool(rate) {
                    p.fail_sector(row, col);
                }
            }
        }
        return FailurePattern::from_cells(cfg, &p.lost_cells(cfg));
    }
    let failed = rng.gen_range(0..=cfg.m());
    let chunks = sample(&mut rng, n, n).into_vec();
    for &c in &chunks[..failed] {
        p.fail_chunk(c);
    }
    let rest = &chunks[failed..];
    let partial = rng.gen_range(0..=cfg.m_prime().min(rest.len()));
    let slots = sample(&mut rng, cfg.m_prime(), partial).into_vec();
    for (&col, &slot) in rest.iter().zip(&slots) {
        let count = rng.gen_range(1..=cfg.e()[slot]);
        for row in sample(&mut rng, r, count) {
            p.fail_sector(row, col);
        }
    }
    p
}

/// Zeroes the lost cells of `pattern` and returns them.
pub fn inject(cfg: &StairConfig, stripe: &mut Stripe, pattern: &FailurePattern) -> Vec<Cell> {
    let lost = pattern.lost_cells(cfg);
    stripe.erase(&lost);
    lost
}

/// Per-chunk failure counts of one simulated stripe and, for each code
/// under test, whether it survives them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub counts: Vec<usize>,
    pub recoverable: Vec<bool>,
}

impl TrialOutcome {
    pub fn draw(codes: &[Coverage], chunks: usize, dist: &ChunkFailureDist, rng: &mut impl Rng) -> Self {
        let counts: Vec<usize> = (0..chunks).map(|_| dist.sample(rng.gen())).collect();
        let mut nz: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
        nz.sort_unstable();
        let recoverable = codes.iter().map(|c| c.recoverable(&nz)).collect();
        TrialOutcome { counts, recoverable }
    }
}

/// Fraction of unrecoverable trials with a normal-approximation interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub trials: u64,
    pub failures: u64,
    pub p: f64,
    /// Standard error, with the rate floored at `1 / trials` so a run
    /// without failures still reports a nonzero spread.
    pub sigma: f64,
    pub ci99: (f64, f64),
}

impl Estimate {
    pub fn new(failures: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = failures as f64 / n;
        let pf = p.max(1.0 / n).min(1.0 - 1.0 / n);
        let sigma = (pf * (1.0 - pf) / n).sqrt();
        let z = 2.575_829_303_548_901;
        Estimate { trials, failures, p, sigma, ci99: ((p - z * sigma).max(0.0), (p + z * sigma).min(1.0)) }
    }

    /// Whether `value` lies within `k` standard errors.
    pub fn within_sigmas(&self, value: f64, k: f64) -> bool {
        (value - self.p).abs() <= k * self.sigma
    }
}

/// Histogram bucket keyed by the total number of failed sectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    pub total_failures: usize,
    pub trials: u64,
    /// Unrecoverable trials per code, in the order the codes were given.
    pub unrecoverable: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub codes: Vec<String>,
    pub estimates: Vec<Estimate>,
    pub histogram: Vec<HistogramRow>,
}

impl SimReport {
    /// Histogram as CSV: `total_failures,trials,<code>...`.
    pub fn histogram_csv(&self) -> String {
        let mut out = format!("total_failures,trials,{}\n", self.codes.join(","));
        for row in &self.histogram {
            let u: Vec<String> = row.unrecoverable.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{},{},{}\n", row.total_failures, row.trials, u.join(",")));
        }
        out
    }
}

/// Draws `trials` stripes of `chunks` surviving chunks and checks every
/// code against the same draws. Deterministic for a given seed.
pub fn simulate(codes: &[Coverage], chunks: usize, dist: &ChunkFailureDist, trials: u64, seed: u64) -> SimReport {
    let blocks = trials.div_ceil(BLOCK);
    let hist = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut h: BTreeMap<usize, (u64, Vec<u64>)> = BTreeMap::new();
            for _ in 0..BLOCK.min(trials - b * BLOCK) {
                let t = TrialOutcome::draw(codes, chunks, dist, &mut rng);
                let e = h.entry(t.counts.iter().sum()).or_insert_with(|| (0, vec![0; codes.len()]));
                e.0 += 1;
                for (u, ok) in e.1.iter_mut().zip(&t.recoverable) {
                    *u += !ok as u64;
                }
            }
            h
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, (t, u)) in b {
                let e = a.entry(k).or_insert_with(|| (0, vec![0; u.len()]));
                e.0 += t;
                e.1.iter_mut().zip(u).for_each(|(x, y)| *x += y);
            }
            a
        });
    let estimates = (0..codes.len())
        .map(|i| Estimate::new(hist.values().map(|(_, u)| u[i]).sum(), trials))
        .collect();
    SimReport {
        codes: codes.iter().map(ToString::to_string).collect(),
        estimates,
        histogram: hist
            .into_iter()
            .map(|(total_failures, (trials, unrecoverable))| HistogramRow { total_failures, trials, unrecoverable })
            .collect(),
    }
}

pub fn monte_carlo_p_str(coverage: &Coverage, chunks: usize, dist: &ChunkFailureDist, trials: u64, seed: u64) -> Estimate {
    simulate(std::slice::from_ref(coverage), chunks, dist, trials, seed).estimates[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reliability::p_str;
    use crate::stair::pattern_within_coverage;

    #[test]
    fn within_samples_stay_within() {
        let cfg = StairConfig::new(8, 4, 2, &[1, 1, 2], 8).unwrap();
        let mut max_partial = 0;
        for seed in 0..10_000 {
            let p = sample_pattern(&cfg, seed, true);
            assert!(pattern_within_coverage(&cfg, &p), "seed {seed}: {p:?}");
            max_partial = max_partial.max(p.sector_counts().into_iter().max().unwrap_or(0));
        }
        assert_eq!(max_partial, cfg.e_max());
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = StairConfig::new(10, 6, 2, &[1, 3], 8).unwrap();
        for within in [true, false] {
            assert_eq!(sample_pattern(&cfg, 42, within), sample_pattern(&cfg, 42, within));
        }
        let outside = (0..200).filter(|&s| !pattern_within_coverage(&cfg, &sample_pattern(&cfg, s, false))).count();
        assert!(outside > 50);
    }

    #[test]
    fn inject_erases_exactly_the_pattern() {
        let cfg = StairConfig::new(6, 3, 2, &[1], 8).unwrap();
        let mut s = Stripe::new(&cfg, 2).unwrap();
        s.as_bytes_mut().fill(0xAB);
        let before = s.clone();
        assert!(inject(&cfg, &mut s, &FailurePattern::new()).is_empty());
        assert_eq!(s, before);
        let mut p = FailurePattern::new();
        p.fail_chunk(1).fail_chunk(4);
        assert_eq!(inject(&cfg, &mut s, &p).len(), 2 * 3);
        assert_eq!(s.as_bytes().iter().filter(|&&b| b == 0).count(), 6 * 2);
    }

    #[test]
    fn degenerate_distributions() {
        let cov = Coverage::stair(&[1, 2]);
        let none = ChunkFailureDist::point_mass(16, 0);
        assert_eq!(monte_carlo_p_str(&cov, 7, &none, 10_000, 1).p, 0.0);
        let heavy = ChunkFailureDist::point_mass(16, 3);
        assert_eq!(monte_carlo_p_str(&cov, 7, &heavy, 10_000, 1).p, 1.0);
    }

    #[test]
    fn independent_of_thread_count() {
        let d = ChunkFailureDist::independent(16, 1e-2).unwrap();
        let codes = [Coverage::Rs, Coverage::stair(&[1, 2])];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate(&codes, 7, &d, 100_000, 9))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn agrees_with_analysis() {
        let d = ChunkFailureDist::independent(16, 1e-2).unwrap();
        for cov in [Coverage::Rs, Coverage::stair(&[1, 2]), Coverage::Sd(2)] {
            let est = monte_carlo_p_str(&cov, 7, &d, 200_000, 5);
            let exact = p_str(&cov, 7, &d);
            assert!(est.within_sigmas(exact, 4.0), "{cov}: {est:?} vs {exact}");
        }
    }

    #[test]
    fn histogram_accounts_for_every_trial() {
        let d = ChunkFailureDist::independent(4, 0.1).unwrap();
        let rep = simulate(&[Coverage::Rs], 3, &d, 20_000, 3);
        assert_eq!(rep.histogram.iter().map(|h| h.trials).sum::<u64>(), 20_000);
        assert_eq!(rep.histogram[0].unrecoverable, vec![0]);
        assert!(rep.histogram_csv().starts_with("total_failures,trials,rs\n0,"));
    }
}
