use serde::{Deserialize, Serialize};

use crate::baselines::GreedyKey;
use crate::error::{Error, Result};
use crate::feedback::{db_to_linear, Regime, MAX_SINR_BITS};

pub const MAX_ANTENNAS: usize = 16;
pub const MAX_RVQ_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Pu2rc,
    ZfSdma,
    Dpc,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Pu2rc => "pu2rc",
            Algorithm::ZfSdma => "zf_sdma",
            Algorithm::Dpc => "dpc",
        }
    }
}

/// When random codebooks are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookRefresh {
    /// New codebook(s) with every channel draw.
    #[default]
    PerTrial,
    /// One codebook draw per run (per seed).
    PerRun,
}

/// Whether ZF-SDMA users quantize on private or a common RVQ codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RvqSharing {
    #[default]
    PerUser,
    Shared,
}

fn default_ortho_threshold() -> f64 {
    0.25
}

/// One throughput-versus-users sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub regime: Regime,
    pub n_t: usize,
    /// Number of orthonormal bases (PU2RC only); codebook size is `m * n_t`.
    #[serde(default)]
    pub m: Option<usize>,
    /// RVQ codebook size `2^codebook_bits` (ZF-SDMA only).
    #[serde(default)]
    pub codebook_bits: Option<u32>,
    /// Per-beam SNR `P / n_t` in dB.
    pub snr_db: f64,
    pub user_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Scalar SINR feedback resolution (PU2RC only); `None` is exact.
    #[serde(default)]
    pub sinr_feedback_bits: Option<u32>,
    #[serde(default = "default_ortho_threshold")]
    pub ortho_threshold: f64,
    #[serde(default)]
    pub greedy_key: GreedyKey,
    #[serde(default)]
    pub codebook_refresh: CodebookRefresh,
    #[serde(default)]
    pub rvq_sharing: RvqSharing,
}

impl ExperimentConfig {
    /// PU2RC sweep with defaults for everything optional.
    pub fn pu2rc(
        n_t: usize,
        codebook_size: usize,
        snr_db: f64,
        user_grid: Vec<usize>,
        trials: usize,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            algorithm: Algorithm::Pu2rc,
            regime: Regime::Normal,
            n_t,
            m: Some(codebook_size / n_t.max(1)),
            codebook_bits: None,
            snr_db,
            user_grid,
            trials,
            seed,
            sinr_feedback_bits: None,
            ortho_threshold: default_ortho_threshold(),
            greedy_key: GreedyKey::default(),
            codebook_refresh: CodebookRefresh::default(),
            rvq_sharing: RvqSharing::default(),
        }
    }

    /// ZF-SDMA sweep; `codebook_size` must be a power of two.
    pub fn zf_sdma(
        n_t: usize,
        codebook_size: usize,
        snr_db: f64,
        user_grid: Vec<usize>,
        trials: usize,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            algorithm: Algorithm::ZfSdma,
            m: None,
            codebook_bits: Some(codebook_size.max(1).trailing_zeros()),
            ..Self::pu2rc(n_t, n_t, snr_db, user_grid, trials, seed)
        }
    }

    pub fn dpc(n_t: usize, snr_db: f64, user_grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            algorithm: Algorithm::Dpc,
            m: None,
            ..Self::pu2rc(n_t, n_t, snr_db, user_grid, trials, seed)
        }
    }

    /// Per-beam SNR `γ` (linear).
    pub fn gamma(&self) -> f64 {
        db_to_linear(self.snr_db)
    }

    /// Total transmit power `P = n_t γ`.
    pub fn total_power(&self) -> f64 {
        self.n_t as f64 * self.gamma()
    }

    /// Shape codebook size `N`.
    pub fn codebook_size(&self) -> Option<usize> {
        match self.algorithm {
            Algorithm::Pu2rc => self.m.map(|m| m * self.n_t),
            Algorithm::ZfSdma => self.codebook_bits.map(|b| 1usize << b),
            Algorithm::Dpc => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_t > MAX_ANTENNAS {
            return Err(Error::config(
                "n_t",
                format!("must be in 1..={MAX_ANTENNAS}"),
            ));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::config("snr_db", "must be finite"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.user_grid.is_empty() {
            return Err(Error::config("user_grid", "must not be empty"));
        }
        if self.user_grid.contains(&0) {
            return Err(Error::config("user_grid", "user counts must be positive"));
        }
        if self.user_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("user_grid", "must be strictly ascending"));
        }
        if !(self.ortho_threshold > 0.0 && self.ortho_threshold <= 1.0) {
            return Err(Error::config("ortho_threshold", "must be in (0, 1]"));
        }
        if self.algorithm != Algorithm::Pu2rc && self.regime != Regime::Normal {
            return Err(Error::config(
                "regime",
                "only pu2rc supports non-normal regimes",
            ));
        }
        if let Some(bits) = self.sinr_feedback_bits {
            if self.algorithm != Algorithm::Pu2rc {
                return Err(Error::config("sinr_feedback_bits", "only applies to pu2rc"));
            }
            if bits == 0 || bits > MAX_SINR_BITS {
                return Err(Error::config(
                    "sinr_feedback_bits",
                    format!("must be in 1..={MAX_SINR_BITS}"),
                ));
            }
        }
        match self.algorithm {
            Algorithm::Pu2rc => {
                match self.m {
                    None => return Err(Error::config("m", "required for pu2rc")),
                    Some(0) => return Err(Error::config("m", "must be at least 1")),
                    Some(_) => {}
                }
                if self.codebook_bits.is_some() {
                    return Err(Error::config("codebook_bits", "not used by pu2rc (set m)"));
                }
            }
            Algorithm::ZfSdma => {
                match self.codebook_bits {
                    None => return Err(Error::config("codebook_bits", "required for zf_sdma")),
                    Some(b) if b == 0 || b > MAX_RVQ_BITS => {
                        return Err(Error::config(
                            "codebook_bits",
                            format!("must be in 1..={MAX_RVQ_BITS}"),
                        ))
                    }
                    Some(_) => {}
                }
                if self.m.is_some() {
                    return Err(Error::config(
                        "m",
                        "not used by zf_sdma (set codebook_bits)",
                    ));
                }
            }
            Algorithm::Dpc => {
                if self.m.is_some() {
                    return Err(Error::config("m", "not used by dpc"));
                }
                if self.codebook_bits.is_some() {
                    return Err(Error::config("codebook_bits", "not used by dpc"));
                }
            }
        }
        Ok(())
    }
}
