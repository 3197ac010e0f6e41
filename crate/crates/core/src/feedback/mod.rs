//! What each user measures and reports: the gain/shape split of its
//! channel, the codeword nearest to its channel shape, and the SINR it
//! would see on that codeword's beam.

mod analytic;
mod codebook;
mod sinr_quant;

pub use analytic::{ccdf_eps, ccdf_eps_upper_bound, elog_eps_bounds, EpsLogBounds};
pub use codebook::{Codebook, CodebookKind};
pub use sinr_quant::{build_sinr_quantizer, percentile_nearest_rank, SinrQuantizer, MAX_SINR_BITS};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::ComplexVec;

/// SINR substituted for `+inf` when a rate is taken (exact codeword hit
/// in the interference-limited model).
pub const SINR_CAP: f64 = 1e12;

/// `ln(1 + min(sinr, SINR_CAP))`.
#[inline]
pub fn rate_nats(sinr: f64) -> f64 {
    sinr.min(SINR_CAP).ln_1p()
}

/// Channel vector split into gain `‖h‖` and unit-norm shape `h/‖h‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h: ComplexVec,
    gain: f64,
    shape: ComplexVec,
}

impl ChannelRealization {
    pub fn channel(&self) -> &ComplexVec {
        &self.h
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn shape(&self) -> &ComplexVec {
        &self.shape
    }

    /// Channel power `‖h‖²`.
    pub fn power(&self) -> f64 {
        self.gain * self.gain
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }
}

pub fn decompose(h: ComplexVec) -> Result<ChannelRealization> {
    let gain = h.norm();
    if gain == 0.0 {
        return Err(Error::ZeroChannel);
    }
    let shape = h.scale(Complex64::new(1.0 / gain, 0.0));
    Ok(ChannelRealization { h, gain, shape })
}

/// Outcome of quantizing one channel shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeQuantization {
    /// Flat index into the codebook.
    pub codeword_index: usize,
    /// `1 - |ŝ† s|²` for the chosen codeword.
    pub quant_error: f64,
}

/// Nearest codeword under `d(v, s) = 1 - |v† s|²`; ties go to the lowest
/// flat index.
pub fn quantize_shape(shape: &ComplexVec, codebook: &Codebook) -> Result<ShapeQuantization> {
    if shape.dim() != codebook.dim() {
        return Err(Error::DimensionMismatch {
            left: shape.dim(),
            right: codebook.dim(),
        });
    }
    let mut best = 0;
    let mut best_corr = f64::NEG_INFINITY;
    for (i, v) in codebook.vectors().iter().enumerate() {
        let corr = v.dot_unchecked(shape).norm_sqr();
        if corr > best_corr {
            best = i;
            best_corr = corr;
        }
    }
    Ok(ShapeQuantization {
        codeword_index: best,
        quant_error: (1.0 - best_corr).clamp(0.0, 1.0),
    })
}

/// What one user sends back: codeword index plus a channel-quality value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackReport {
    pub user: usize,
    pub codeword_index: usize,
    pub quant_error: f64,
    /// SINR seen by the scheduler (exact, or scalar-quantized).
    pub sinr: f64,
}

impl FeedbackReport {
    pub fn new(user: usize, q: ShapeQuantization, sinr: f64) -> Self {
        FeedbackReport {
            user,
            codeword_index: q.codeword_index,
            quant_error: q.quant_error,
            sinr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    #[default]
    Normal,
    InterferenceLimited,
    NoiseLimited,
}

/// Per-user SINR on its quantized beam when all beams of the basis carry
/// power `gamma` each.
///
/// * `Normal`: `γρ(1-ε) / (1 + γρε)`
/// * `InterferenceLimited`: `1/ε - 1` (`+inf` at `ε = 0`)
/// * `NoiseLimited`: `γρ(1-ε)`
pub fn sinr(gamma: f64, rho: f64, eps: f64, regime: Regime) -> f64 {
    debug_assert!(gamma > 0.0 && rho >= 0.0 && (0.0..=1.0).contains(&eps));
    match regime {
        Regime::Normal => gamma * rho * (1.0 - eps) / (1.0 + gamma * rho * eps),
        Regime::InterferenceLimited => {
            if eps == 0.0 {
                f64::INFINITY
            } else {
                1.0 / eps - 1.0
            }
        }
        Regime::NoiseLimited => gamma * rho * (1.0 - eps),
    }
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
