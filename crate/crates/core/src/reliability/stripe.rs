//! Probability that a stripe in critical mode holds an unrecoverable set
//! of sector failures.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::chunk::ChunkFailureDist;
use crate::error::{Error, Result};
use crate::stair::StairConfig;

/// Which per-chunk failure counts a code can still repair once its device
/// failures are used up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Coverage {
    /// Any sector failure is fatal.
    Rs,
    /// Counts must fit the sorted coverage vector.
    Stair(Vec<usize>),
    /// At most `s` failures in total, anywhere.
    Sd(usize),
}

impl Coverage {
    pub fn stair(e: &[usize]) -> Self {
        let mut e = e.to_vec();
        e.sort_unstable();
        Coverage::Stair(e)
    }

    /// Extra sectors of parity per stripe.
    pub fn s(&self) -> usize {
        match self {
            Coverage::Rs => 0,
            Coverage::Stair(e) => e.iter().sum(),
            Coverage::Sd(s) => *s,
        }
    }

    /// `counts` lists the nonzero failure counts of the surviving chunks.
    pub fn recoverable(&self, counts: &[usize]) -> bool {
        match self {
            Coverage::Rs => counts.iter().all(|&c| c == 0),
            Coverage::Stair(e) => crate::stair::dominated(counts, e),
            Coverage::Sd(s) => counts.iter().sum::<usize>() <= *s,
        }
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coverage::Rs => f.write_str("rs"),
            Coverage::Stair(e) => {
                let e: Vec<String> = e.iter().map(ToString::to_string).collect();
                write!(f, "stair:{}", e.join(","))
            }
            Coverage::Sd(s) => write!(f, "sd:{s}"),
        }
    }
}

/// Parses `rs`, `stair:1,2` or `sd:3`.
impl FromStr for Coverage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidParams(format!("cannot parse code {s:?}; expected rs, stair:<e,...> or sd:<s>"));
        if s == "rs" {
            return Ok(Coverage::Rs);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "stair" => {
                let e: Vec<usize> =
                    rest.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
                if e.is_empty() || e.contains(&0) {
                    return Err(bad());
                }
                Ok(Coverage::stair(&e))
            }
            "sd" => Ok(Coverage::Sd(rest.trim().parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Loss probability over `chunks` independent surviving chunks.
///
/// Runs a dynamic program whose state is the sorted multiset of nonzero
/// counts seen so far. Only recoverable states are kept; mass that leaves
/// them is summed directly, so tiny probabilities keep full precision.
pub fn p_str(coverage: &Coverage, chunks: usize, dist: &ChunkFailureDist) -> f64 {
    let mut states: HashMap<Vec<usize>, f64> = HashMap::from([(Vec::new(), 1.0)]);
    let mut lost = 0.0;
    for _ in 0..chunks {
        let mut next: HashMap<Vec<usize>, f64> = HashMap::with_capacity(states.len());
        for (state, &q) in &states {
            for (c, &p) in dist.as_slice().iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let mut s = state.clone();
                if c > 0 {
                    let at = s.partition_point(|&x| x < c);
                    s.insert(at, c);
                }
                if coverage.recoverable(&s) {
                    *next.entry(s).or_insert(0.0) += q * p;
                } else {
                    lost += q * p;
                }
            }
        }
        states = next;
    }
    lost.clamp(0.0, 1.0)
}

pub fn p_str_rs(cfg: &StairConfig, dist: &ChunkFailureDist) -> f64 {
    p_str(&Coverage::Rs, cfg.data_chunks(), dist)
}

pub fn p_str_stair(cfg: &StairConfig, dist: &ChunkFailureDist) -> f64 {
    p_str(&Coverage::stair(cfg.e()), cfg.data_chunks(), dist)
}

/// SD codes are only modelled for `s` in `1..=3`.
pub fn p_str_sd(s: usize, cfg: &StairConfig, dist: &ChunkFailureDist) -> Result<f64> {
    if !(1..=3).contains(&s) {
        return Err(Error::UnsupportedModel(format!("SD codes are modelled for s = 1..3, got s={s}")));
    }
    Ok(p_str(&Coverage::Sd(s), cfg.data_chunks(), dist))
}

/// Explicit expressions for special cases, with `k = n - m` surviving
/// chunks and `p[i] = P_chk(i)`.
pub mod closed_form {
    fn choose(n: usize, k: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    fn pw(x: f64, e: isize) -> f64 {
        if e < 0 {
            0.0
        } else {
            x.powi(e as i32)
        }
    }

    fn sum(p: &[f64], lo: usize, hi: usize) -> f64 {
        (lo..=hi).filter(|&i| i < p.len()).map(|i| p[i]).sum()
    }

    pub fn rs(k: usize, p: &[f64]) -> f64 {
        1.0 - pw(p[0], k as isize)
    }

    /// `e = (s)`.
    pub fn stair_single(k: usize, s: usize, p: &[f64]) -> f64 {
        let ki = k as isize;
        1.0 - pw(p[0], ki) - choose(k, 1) * sum(p, 1, s) * pw(p[0], ki - 1)
    }

    /// `e = (1, s-1)`, `s >= 2`.
    pub fn stair_one_rest(k: usize, s: usize, p: &[f64]) -> f64 {
        let ki = k as isize;
        stair_single(k, s - 1, p)
            - choose(k, 2) * p[1] * p[1] * pw(p[0], ki - 2)
            - choose(k, 1) * choose(k - 1, 1) * sum(p, 2, s - 1) * p[1] * pw(p[0], ki - 2)
    }

    /// `e = (2, s-2)`, `s >= 4`.
    pub fn stair_two_rest(k: usize, s: usize, p: &[f64]) -> f64 {
        let ki = k as isize;
        1.0 - pw(p[0], ki)
            - choose(k, 1) * sum(p, 1, s - 2) * pw(p[0], ki - 1)
            - choose(k, 2) * p[1] * p[1] * pw(p[0], ki - 2)
            - choose(k, 1) * choose(k - 1, 1) * sum(p, 2, s - 2) * p[1] * pw(p[0], ki - 2)
            - choose(k, 2) * p[2] * p[2] * pw(p[0], ki - 2)
            - choose(k, 1) * choose(k - 1, 1) * sum(p, 3, s - 2) * p[2] * pw(p[0], ki - 2)
    }

    /// `e = (1, 1, s-2)`, `s >= 3`.
    pub fn stair_one_one_rest(k: usize, s: usize, p: &[f64]) -> f64 {
        let ki = k as isize;
        1.0 - pw(p[0], ki)
            - choose(k, 1) * sum(p, 1, s - 2) * pw(p[0], ki - 1)
            - choose(k, 2) * p[1] * p[1] * pw(p[0], ki - 2)
            - choose(k, 1) * choose(k - 1, 1) * sum(p, 2, s - 2) * p[1] * pw(p[0], ki - 2)
            - choose(k, 3) * p[1].powi(3) * pw(p[0], ki - 3)
            - choose(k, 2) * choose(k.saturating_sub(2), 1) * sum(p, 2, s - 2) * p[1] * p[1] * pw(p[0], ki - 3)
    }

    /// `e = (1, ..., 1)` with `s` entries.
    pub fn stair_ones(k: usize, s: usize, p: &[f64]) -> f64 {
        1.0 - (0..=s.min(k)).map(|i| choose(k, i) * p[1].powi(i as i32) * pw(p[0], (k - i) as isize)).sum::<f64>()
    }

    /// SD codes, `s` in `1..=3`.
    pub fn sd(k: usize, s: usize, p: &[f64]) -> f64 {
        let ki = k as isize;
        match s {
            1 => 1.0 - pw(p[0], ki) - choose(k, 1) * p[1] * pw(p[0], ki - 1),
            2 => {
                1.0 - pw(p[0], ki)
                    - choose(k, 1) * sum(p, 1, 2) * pw(p[0], ki - 1)
                    - choose(k, 2) * p[1] * p[1] * pw(p[0], ki - 2)
            }
            3 => {
                1.0 - pw(p[0], ki)
                    - choose(k, 1) * sum(p, 1, 3) * pw(p[0], ki - 1)
                    - choose(k, 2) * p[1] * p[1] * pw(p[0], ki - 2)
                    - choose(k, 1) * choose(k - 1, 1) * p[2] * p[1] * pw(p[0], ki - 2)
                    - choose(k, 3) * p[1].powi(3) * pw(p[0], ki - 3)
            }
            _ => panic!("no explicit SD expression for s={s}"),
        }
    }
}
