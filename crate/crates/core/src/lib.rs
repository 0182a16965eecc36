//! Erasure coding for storage arrays that must survive whole-device
//! failures together with bursts of sector failures on the remaining
//! devices.
//!
//! - [`gf`]: GF(2^w) arithmetic and region kernels.
//! - [`mds`]: systematic Cauchy Reed-Solomon codes.
//! - [`stair`]: the STAIR code, its encoders, decoder and cost model.
//! - [`reliability`]: analytical stripe-loss probabilities and MTTDL.
//! - [`sim`]: failure injection and Monte-Carlo estimation.
//! - [`container`]: the on-disk container used by the `stair` binary.
//! - [`cli`]: the `stair` command line; [`bench`] times the encoders.

pub mod bench;
pub mod cli;
pub mod container;
pub mod error;
pub mod gf;
pub mod mds;
pub mod reliability;
pub mod sim;
pub mod stair;

pub use error::{Error, Result};
pub use stair::{Cell, FailurePattern, Method, StairCode, StairConfig, Stripe};
