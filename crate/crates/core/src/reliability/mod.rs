//! Storage efficiency, array counts, sector-failure models, stripe-loss
//! probabilities and the single-failure-tolerant Markov MTTDL model.
//!
//! Capacities use binary units: a PB is 2^50 bytes and a GB is 2^30.

mod chunk;
mod scenario;
mod stripe;

use serde::{Deserialize, Serialize};

pub use chunk::{p_sec, BurstLengths, ChunkFailureDist};
pub use scenario::{Scenario, SweepRow};
pub use stripe::{closed_form, p_str, p_str_rs, p_str_sd, p_str_stair, Coverage};

use crate::error::{Error, Result};
use crate::stair::StairConfig;

pub const GB: u64 = 1 << 30;
pub const PB: u64 = 1 << 50;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SectorModel {
    Independent,
    Correlated { b1: f64, alpha: f64 },
}

/// System-level inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityParams {
    pub user_bytes: u64,
    pub capacity_bytes: u64,
    pub sector_bytes: usize,
    /// Mean time to device failure, hours.
    pub mttf_hours: f64,
    /// Mean rebuild time, hours.
    pub mttr_hours: f64,
    pub p_bit: f64,
    pub model: SectorModel,
}

impl ReliabilityParams {
    /// 10 PB of user data on 300 GB SATA drives with 512-byte sectors.
    pub fn sata(p_bit: f64, model: SectorModel) -> Self {
        ReliabilityParams {
            user_bytes: 10 * PB,
            capacity_bytes: 300 * GB,
            sector_bytes: 512,
            mttf_hours: 500_000.0,
            mttr_hours: 17.8,
            p_bit,
            model,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.user_bytes == 0 || self.capacity_bytes == 0 || self.sector_bytes == 0 {
            return bad("U, C and S must be positive");
        }
        if !(self.mttf_hours > 0.0 && self.mttr_hours > 0.0) {
            return bad("mean times must be positive");
        }
        if !(self.p_bit >= 0.0 && self.p_bit < 1.0) {
            return bad("P_bit must lie in [0,1)");
        }
        Ok(())
    }
}

/// Array geometry plus the sector-failure coverage of the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSpec {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub coverage: Coverage,
}

impl CodeSpec {
    pub fn new(n: usize, r: usize, m: usize, coverage: Coverage) -> Self {
        CodeSpec { n, r, m, coverage }
    }

    pub fn from_config(cfg: &StairConfig) -> Self {
        let coverage = if cfg.e().is_empty() { Coverage::Rs } else { Coverage::stair(cfg.e()) };
        CodeSpec::new(cfg.n(), cfg.r(), cfg.m(), coverage)
    }

    pub fn s(&self) -> usize {
        self.coverage.s()
    }
}

/// Fraction of raw capacity holding user data, `(r(n-m) - s) / (r n)`.
pub fn storage_efficiency(n: usize, r: usize, m: usize, s: usize) -> f64 {
    (r * (n - m)).saturating_sub(s) as f64 / (r * n) as f64
}

/// Arrays needed for `user_bytes`, `ceil((U / E) / (C n))`, in exact
/// integer arithmetic.
pub fn num_arrays(params: &ReliabilityParams, code: &CodeSpec) -> Result<u64> {
    let data = (code.r * (code.n - code.m)).saturating_sub(code.s()) as u128;
    if data == 0 {
        return Err(Error::InvalidParams("the code stores no data".into()));
    }
    let num = params.user_bytes as u128 * code.r as u128;
    let den = data * params.capacity_bytes as u128;
    Ok(num.div_ceil(den) as u64)
}

/// Stripes per device, `floor(C / (S r))`.
pub fn stripes_per_array(params: &ReliabilityParams, r: usize) -> u64 {
    params.capacity_bytes / (params.sector_bytes as u64 * r as u64)
}

/// `1 - (1 - p_str)^stripes`.
pub fn p_arr(p_str: f64, stripes: u64) -> f64 {
    -f64::exp_m1(stripes as f64 * f64::ln_1p(-p_str))
}

/// Mean time to data loss of one array tolerating one device failure.
pub fn mttdl_arr(n: usize, lambda: f64, mu: f64, p_arr: f64) -> f64 {
    let n = n as f64;
    ((2.0 * n - 1.0) * lambda + mu) / (n * lambda * ((n - 1.0) * lambda + mu * p_arr))
}

/// Chunk failure distribution for a sector model.
pub fn chunk_dist(params: &ReliabilityParams, r: usize) -> Result<(ChunkFailureDist, Option<BurstLengths>)> {
    let ps = p_sec(params.p_bit, params.sector_bytes);
    match params.model {
        SectorModel::Independent => Ok((ChunkFailureDist::independent(r, ps)?, None)),
        SectorModel::Correlated { b1, alpha } => {
            let (d, b) = ChunkFailureDist::correlated(r, ps, b1, alpha)?;
            Ok((d, Some(b)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReliabilityReport {
    pub code: String,
    pub efficiency: f64,
    pub n_arr: u64,
    pub p_sec: f64,
    /// Mean burst length under the correlated model.
    pub burst_mean: Option<f64>,
    pub p_str: f64,
    pub stripes_per_array: u64,
    pub p_arr: f64,
    /// `stripes * p_str`, the first-order value.
    pub p_arr_linear: f64,
    pub mttdl_arr_hours: f64,
    pub mttdl_sys_hours: f64,
}

/// Full report for one code. Only `m = 1` arrays are modelled.
pub fn analyze(params: &ReliabilityParams, code: &CodeSpec) -> Result<ReliabilityReport> {
    params.validate()?;
    if code.m != 1 {
        return Err(Error::UnsupportedModel(format!("the Markov model covers m = 1 only, got m={}", code.m)));
    }
    if let Coverage::Sd(s) = code.coverage {
        if !(1..=3).contains(&s) {
            return Err(Error::UnsupportedModel(format!("SD codes are modelled for s = 1..3, got s={s}")));
        }
    }
    let (dist, bursts) = chunk_dist(params, code.r)?;
    let p_str = p_str(&code.coverage, code.n - code.m, &dist);
    let stripes = stripes_per_array(params, code.r);
    let p_arr = p_arr(p_str, stripes);
    let n_arr = num_arrays(params, code)?;
    let mttdl_arr = mttdl_arr(code.n, 1.0 / params.mttf_hours, 1.0 / params.mttr_hours, p_arr);
    Ok(ReliabilityReport {
        code: code.coverage.to_string(),
        efficiency: storage_efficiency(code.n, code.r, code.m, code.s()),
        n_arr,
        p_sec: p_sec(params.p_bit, params.sector_bytes),
        burst_mean: bursts.map(|b| b.mean),
        p_str,
        stripes_per_array: stripes,
        p_arr,
        p_arr_linear: stripes as f64 * p_str,
        mttdl_arr_hours: mttdl_arr,
        mttdl_sys_hours: mttdl_arr / n_arr as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sata_code(coverage: Coverage) -> CodeSpec {
        CodeSpec::new(8, 16, 1, coverage)
    }

    #[test]
    fn efficiency() {
        assert_eq!(storage_efficiency(8, 16, 1, 0), 0.875);
        assert_eq!(storage_efficiency(8, 16, 1, 1), 111.0 / 128.0);
        assert_eq!(storage_efficiency(8, 16, 1, 112), 0.0);
    }

    #[test]
    fn array_counts() {
        let params = ReliabilityParams::sata(1e-14, SectorModel::Independent);
        let want = [4994, 5039, 5085, 5131, 5179, 5227, 5276, 5327, 5378, 5430, 5483, 5538, 5593];
        for (s, &n) in want.iter().enumerate() {
            assert_eq!(num_arrays(&params, &sata_code(Coverage::Sd(s))).unwrap(), n, "s={s}");
        }
        let mut exact = params.clone();
        exact.user_bytes = 300 * GB * 7;
        assert_eq!(num_arrays(&exact, &sata_code(Coverage::Rs)).unwrap(), 1);
    }

    #[test]
    fn mttdl_without_sector_loss() {
        let (l, mu) = (1.0 / 5e5, 1.0 / 17.8);
        let want = (15.0 * l + mu) / (8.0 * 7.0 * l * l);
        assert!((mttdl_arr(8, l, mu, 0.0) - want).abs() / want < 1e-14);
    }

    #[test]
    fn exact_array_loss_is_below_union_bound() {
        for p in [1e-15, 1e-9, 1e-5, 1e-3] {
            assert!(p_arr(p, 39321) <= 39321.0 * p);
        }
        assert_eq!(p_arr(1.0, 10), 1.0);
        assert_eq!(p_arr(0.0, 10), 0.0);
    }

    #[test]
    fn mttdl_falls_with_bit_error_rate() {
        for cov in [Coverage::Rs, Coverage::stair(&[1, 2]), Coverage::Sd(2)] {
            let mut last = f64::INFINITY;
            for exp in [-16, -14, -13, -12, -11, -10] {
                let params = ReliabilityParams::sata(10f64.powi(exp), SectorModel::Independent);
                let rep = analyze(&params, &sata_code(cov.clone())).unwrap();
                assert!(rep.mttdl_sys_hours <= last, "{cov} at 1e{exp}");
                assert!((0.0..=1.0).contains(&rep.p_arr) && (0.0..=1.0).contains(&rep.p_str));
                last = rep.mttdl_sys_hours;
            }
        }
    }

    #[test]
    fn stair_one_beats_rs_by_two_orders() {
        let params = ReliabilityParams::sata(1e-14, SectorModel::Independent);
        let rs = analyze(&params, &sata_code(Coverage::Rs)).unwrap();
        let stair = analyze(&params, &sata_code(Coverage::stair(&[1]))).unwrap();
        assert!(stair.mttdl_sys_hours / rs.mttdl_sys_hours > 100.0);
    }

    #[test]
    fn model_restrictions() {
        let params = ReliabilityParams::sata(1e-14, SectorModel::Independent);
        assert!(matches!(analyze(&params, &CodeSpec::new(8, 16, 2, Coverage::Rs)), Err(Error::UnsupportedModel(_))));
        assert!(analyze(&params, &sata_code(Coverage::Sd(4))).is_err());
        let corr = ReliabilityParams::sata(1e-14, SectorModel::Correlated { b1: 0.98, alpha: 1.79 });
        assert!(analyze(&corr, &sata_code(Coverage::Rs)).unwrap().burst_mean.is_some());
    }
}
