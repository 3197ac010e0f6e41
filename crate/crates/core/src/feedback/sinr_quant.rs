use crate::error::{Error, Result};

pub const MAX_SINR_BITS: u32 = 16;

/// Uniform scalar quantizer for reported SINR values.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrQuantizer {
    bits: u32,
    levels: Vec<f64>,
}

impl SinrQuantizer {
    /// `2^bits` levels evenly spaced over `[0, top]`.
    pub fn evenly_spaced(bits: u32, top: f64) -> Result<Self> {
        if bits == 0 || bits > MAX_SINR_BITS {
            return Err(Error::domain(
                "bits",
                format!("{bits} outside 1..={MAX_SINR_BITS}"),
            ));
        }
        if !(top.is_finite() && top > 0.0) {
            return Err(Error::domain(
                "sinr range",
                format!("top level {top} must be positive"),
            ));
        }
        let n = 1usize << bits;
        let step = top / (n - 1) as f64;
        let mut levels: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
        // pin the endpoint exactly
        levels[n - 1] = top;
        Ok(SinrQuantizer { bits, levels })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Nearest level in squared error; ties resolve to the lower level.
    pub fn quantize(&self, x: f64) -> f64 {
        let i = self.levels.partition_point(|&l| l < x);
        if i == 0 {
            return self.levels[0];
        }
        if i == self.levels.len() {
            return self.levels[i - 1];
        }
        let (lo, hi) = (self.levels[i - 1], self.levels[i]);
        if (x - lo) <= (hi - x) {
            lo
        } else {
            hi
        }
    }
}

/// Nearest-rank empirical percentile, `q` in `(0, 1]`.
pub fn percentile_nearest_rank(samples: &[f64], q: f64) -> Option<f64> {
    if samples.is_empty() || !(q > 0.0 && q <= 1.0) {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (q * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Quantizer spanning `[0, p99]` of a pilot sample of reported SINRs.
pub fn build_sinr_quantizer(bits: u32, pilot_sinrs: &[f64]) -> Result<SinrQuantizer> {
    if bits == 0 || bits > MAX_SINR_BITS {
        return Err(Error::domain(
            "bits",
            format!("{bits} outside 1..={MAX_SINR_BITS}"),
        ));
    }
    let top = percentile_nearest_rank(pilot_sinrs, 0.99)
        .ok_or_else(|| Error::domain("pilot", "no pilot SINR samples"))?;
    SinrQuantizer::evenly_spaced(bits, top)
}
