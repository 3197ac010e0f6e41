//! Reference schemes compared against orthogonal beamforming: zero-forcing
//! SDMA on random-vector-quantized feedback, and the dirty-paper-coding
//! sum capacity computed in the dual multiple-access channel.

mod dpc;
mod zf;

pub use dpc::{dpc_objective, dpc_sum_capacity, DpcConfig, DpcOutcome};
pub use zf::{zf_schedule_and_rate, zf_with_codebooks, GreedyKey, ZfConfig, ZfOutcome};
