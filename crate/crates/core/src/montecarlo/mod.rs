//! Monte Carlo engine: throughput-versus-users curves, asymptotic
//! reference curves and slope fits.

mod config;
mod engine;
mod scaling;
mod stats;

pub use config::{
    Algorithm, CodebookRefresh, ExperimentConfig, RvqSharing, MAX_ANTENNAS, MAX_RVQ_BITS,
};
pub use engine::{
    run_experiment, CurvePoint, Experiment, TrialOutcome, CHANNEL_LANE, CODEBOOK_LANE, PILOT_LANE,
    PILOT_TRIALS, RUN_STREAM, RVQ_LANE,
};
pub use scaling::{estimate_slope, reference_curve, SlopeAxis};
pub use stats::{mean_stderr, pairwise_sum};
