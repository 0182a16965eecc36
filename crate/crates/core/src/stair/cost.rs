use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Parity generation method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Standard,
    Upstairs,
    Downstairs,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Standard, Method::Upstairs, Method::Downstairs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Upstairs => "upstairs",
            Method::Downstairs => "downstairs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Method::Standard),
            "upstairs" => Ok(Method::Upstairs),
            "downstairs" => Ok(Method::Downstairs),
            other => Err(Error::InvalidParams(format!("unknown method {other:?}"))),
        }
    }
}

/// Mult_XORs per stripe for each method and the cheapest of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub x_standard: usize,
    pub x_up: usize,
    pub x_down: usize,
    pub chosen: Method,
}

impl CostReport {
    pub fn new(x_standard: usize, x_up: usize, x_down: usize) -> Self {
        // ties go to downstairs, then upstairs
        let chosen = [(x_down, Method::Downstairs), (x_up, Method::Upstairs), (x_standard, Method::Standard)]
            .into_iter()
            .min_by_key(|&(x, _)| x)
            .map(|(_, m)| m)
            .unwrap();
        CostReport { x_standard, x_up, x_down, chosen }
    }

    pub fn get(&self, method: Method) -> usize {
        match method {
            Method::Standard => self.x_standard,
            Method::Upstairs => self.x_up,
            Method::Downstairs => self.x_down,
        }
    }
}
