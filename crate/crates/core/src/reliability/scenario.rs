use serde::{Deserialize, Serialize};

use super::{analyze, CodeSpec, Coverage, ReliabilityParams, SectorModel, GB, PB};
use crate::error::{Error, Result};

/// A reliability sweep read from TOML. Omitted keys take the SATA array
/// defaults:
///
/// ```toml
/// user_pb = 10
/// capacity_gb = 300
/// n = 8
/// r = 16
/// m = 1
/// p_bit = [1e-14, 1e-12, 1e-10]
/// codes = ["rs", "sd:1", "stair:1", "stair:1,2"]
///
/// [model]
/// kind = "correlated"
/// b1 = 0.98
/// alpha = 1.79
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub user_pb: f64,
    pub capacity_gb: f64,
    pub sector_bytes: usize,
    pub mttf_hours: f64,
    pub mttr_hours: f64,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub p_bit: Vec<f64>,
    pub codes: Vec<String>,
    pub model: SectorModel,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            user_pb: 10.0,
            capacity_gb: 300.0,
            sector_bytes: 512,
            mttf_hours: 500_000.0,
            mttr_hours: 17.8,
            n: 8,
            r: 16,
            m: 1,
            p_bit: vec![1e-14, 1e-13, 1e-12, 1e-11, 1e-10],
            codes: ["rs", "sd:1", "stair:1", "sd:2", "stair:1,1", "stair:2", "stair:1,2", "stair:3", "stair:1,1,1"]
                .map(String::from)
                .to_vec(),
            model: SectorModel::Independent,
        }
    }
}

/// One line of a sweep table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p_bit: f64,
    pub code: String,
    pub s: usize,
    pub efficiency: f64,
    pub n_arr: u64,
    pub p_str: f64,
    pub p_arr: f64,
    pub mttdl_sys_hours: f64,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParams(format!("scenario: {e}")))
    }

    pub fn params(&self, p_bit: f64) -> ReliabilityParams {
        ReliabilityParams {
            user_bytes: (self.user_pb * PB as f64).round() as u64,
            capacity_bytes: (self.capacity_gb * GB as f64).round() as u64,
            sector_bytes: self.sector_bytes,
            mttf_hours: self.mttf_hours,
            mttr_hours: self.mttr_hours,
            p_bit,
            model: self.model,
        }
    }

    pub fn code_specs(&self) -> Result<Vec<CodeSpec>> {
        self.codes.iter().map(|c| Ok(CodeSpec::new(self.n, self.r, self.m, c.parse::<Coverage>()?))).collect()
    }

    /// Every code at every bit error rate, rate-major.
    pub fn run(&self) -> Result<Vec<SweepRow>> {
        let specs = self.code_specs()?;
        let mut rows = Vec::with_capacity(self.p_bit.len() * specs.len());
        for &p_bit in &self.p_bit {
            let params = self.params(p_bit);
            for spec in &specs {
                let rep = analyze(&params, spec)?;
                rows.push(SweepRow {
                    p_bit,
                    code: rep.code,
                    s: spec.s(),
                    efficiency: rep.efficiency,
                    n_arr: rep.n_arr,
                    p_str: rep.p_str,
                    p_arr: rep.p_arr,
                    mttdl_sys_hours: rep.mttdl_sys_hours,
                });
            }
        }
        Ok(rows)
    }
}
