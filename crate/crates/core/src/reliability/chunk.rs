use serde::Serialize;

use crate::error::{Error, Result};

/// Probability that a sector is unreadable, given independent bit errors.
pub fn p_sec(p_bit: f64, sector_bytes: usize) -> f64 {
    -f64::exp_m1(8.0 * sector_bytes as f64 * f64::ln_1p(-p_bit))
}

/// `P_chk(i)`: probability that a surviving chunk of `r` sectors has
/// exactly `i` failed sectors, for `i` in `0..=r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChunkFailureDist {
    p: Vec<f64>,
}

/// Burst-length distribution behind a correlated [`ChunkFailureDist`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BurstLengths {
    /// `b[i - 1]` is the fraction of bursts of length `i`.
    pub b: Vec<f64>,
    /// Mean burst length.
    pub mean: f64,
}

impl ChunkFailureDist {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParams("distribution needs at least P_chk(0)".into()));
        }
        if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParams(format!("probability {x} is negative or not finite")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("distribution sums to {sum}")));
        }
        Ok(ChunkFailureDist { p })
    }

    /// All mass on exactly `count` failures.
    pub fn point_mass(r: usize, count: usize) -> Self {
        let mut p = vec![0.0; r + 1];
        p[count] = 1.0;
        ChunkFailureDist { p }
    }

    /// Binomial in `r` trials with success probability `p_sec`.
    pub fn independent(r: usize, p_sec: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_sec) {
            return Err(Error::InvalidParams(format!("P_sec={p_sec} outside [0,1]")));
        }
        let ln_q = f64::ln_1p(-p_sec);
        let mut p = Vec::with_capacity(r + 1);
        let mut binom = 1.0;
        for i in 0..=r {
            if i > 0 {
                binom = binom * (r - i + 1) as f64 / i as f64;
            }
            let tail = if i == r { 1.0 } else { f64::exp((r - i) as f64 * ln_q) };
            p.push(binom * p_sec.powi(i as i32) * tail);
        }
        Ok(ChunkFailureDist { p })
    }

    /// Bursts start independently; a fraction `b1` has length one and the
    /// rest follow a Pareto tail of index `alpha` truncated at `r`.
    /// `P_chk(0)` uses the first-order form `1 - r P_sec / B`.
    pub fn correlated(r: usize, p_sec: f64, b1: f64, alpha: f64) -> Result<(Self, BurstLengths)> {
        if !(b1 > 0.0 && b1 <= 1.0) {
            return Err(Error::InvalidParams(format!("b1={b1} outside (0,1]")));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParams(format!("alpha={alpha} must be positive")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let bursts = burst_lengths(r, b1, alpha);
        let start = r as f64 * p_sec / bursts.mean;
        if start > 1.0 {
            return Err(Error::InvalidParams(format!(
                "P_sec={p_sec} gives P_chk(0) = {} < 0; the first-order model does not apply",
                1.0 - start
            )));
        }
        let mut p = vec![1.0 - start];
        p.extend(bursts.b.iter().map(|b| b * start));
        Ok((ChunkFailureDist { p }, bursts))
    }

    /// Sectors per chunk.
    pub fn r(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p(&self, i: usize) -> f64 {
        self.p.get(i).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// Inverse-CDF sample from a uniform `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, &p) in self.p.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // rounding left a sliver above the total; give it to the last nonzero entry
        self.p.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

fn burst_lengths(r: usize, b1: f64, alpha: f64) -> BurstLengths {
    let mut b = vec![0.0; r];
    if r == 1 {
        b[0] = 1.0;
    } else {
        b[0] = b1;
        let surv = |i: usize| ((i - 1) as f64).powf(-alpha);
        let norm = 1.0 - (r as f64).powf(-alpha);
        for i in 2..=r {
            b[i - 1] = (1.0 - b1) * (surv(i) - surv(i + 1)) / norm;
        }
    }
    let mean = b.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum();
    BurstLengths { b, mean }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_probability() {
        assert_eq!(p_sec(0.0, 512), 0.0);
        let p = p_sec(1e-14, 512);
        assert!((p - 4.096e-11).abs() / 4.096e-11 < 1e-6, "{p}");
        assert!(p_sec(1e-12, 512) > p && p_sec(1e-10, 512) > p_sec(1e-12, 512));
        // exact form against a direct power at a large bit error rate
        let direct = 1.0 - (1.0 - 1e-4f64).powi(4096);
        assert!((p_sec(1e-4, 512) - direct).abs() < 1e-12);
    }

    #[test]
    fn binomial_edges() {
        let d = ChunkFailureDist::independent(16, 0.0).unwrap();
        assert_eq!(d.p(0), 1.0);
        assert!(d.as_slice()[1..].iter().all(|&x| x == 0.0));
        let d = ChunkFailureDist::independent(1, 0.3).unwrap();
        assert!((d.p(0) - 0.7).abs() < 1e-15 && (d.p(1) - 0.3).abs() < 1e-15);
        let d = ChunkFailureDist::independent(16, 1e-3).unwrap();
        assert!((d.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // C(16,2) p^2 q^14
        let want = 120.0 * 1e-6 * (1.0 - 1e-3f64).powi(14);
        assert!((d.p(2) - want).abs() / want < 1e-12);
    }

    #[test]
    fn correlated_normalization() {
        let (d, bursts) = ChunkFailureDist::correlated(16, 1e-6, 0.98, 1.79).unwrap();
        assert!((bursts.b.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(bursts.mean > 1.0 && bursts.mean < 1.2, "{}", bursts.mean);
        assert!((d.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(bursts.b.windows(2).skip(1).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn unit_bursts_reduce_to_first_order() {
        let (d, bursts) = ChunkFailureDist::correlated(16, 1e-5, 1.0, 1.5).unwrap();
        assert_eq!(bursts.mean, 1.0);
        assert!((d.p(1) - 16e-5).abs() < 1e-18);
        assert!(d.as_slice()[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn correlated_rejects_out_of_range() {
        assert!(ChunkFailureDist::correlated(16, 0.5, 0.98, 1.79).is_err());
        assert!(ChunkFailureDist::correlated(16, 1e-3, 0.0, 1.79).is_err());
        assert!(ChunkFailureDist::correlated(16, 1e-3, 0.9, -1.0).is_err());
    }

    #[test]
    fn validation_and_sampling() {
        assert!(ChunkFailureDist::new(vec![0.5, 0.4]).is_err());
        assert!(ChunkFailureDist::new(vec![1.2, -0.2]).is_err());
        let d = ChunkFailureDist::new(vec![0.25, 0.0, 0.75]).unwrap();
        assert_eq!(d.sample(0.1), 0);
        assert_eq!(d.sample(0.25), 2);
        assert_eq!(d.sample(0.999_999_999), 2);
        assert_eq!(d.r(), 2);
    }
}
