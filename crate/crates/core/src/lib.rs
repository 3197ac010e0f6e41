//! Link-level Monte Carlo simulation of multiuser downlink beamforming with
//! limited feedback.
//!
//! Users quantize their channel direction onto a codebook made of several
//! random orthonormal bases and report the codeword index plus an SINR; the
//! base station serves one user per beam of the best basis. Zero-forcing
//! SDMA on random vector quantization and the dirty-paper-coding sum
//! capacity serve as baselines.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod feedback;
pub mod montecarlo;
pub mod numkernel;
pub mod scheduler;

pub use error::{Error, Result};
