use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{quantize_shape, rate_nats, sinr, ChannelRealization, Codebook, Regime};
use crate::numkernel::{CMatrix, ComplexVec};

/// Pivot tolerance when inverting the Gram matrix of selected directions.
const RANK_TOL: f64 = 1e-10;

/// Ordering used by the greedy user search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyKey {
    #[default]
    ReportedSinr,
    ChannelPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZfConfig {
    /// Largest squared correlation allowed between the quantized
    /// directions of two selected users.
    pub ortho_threshold: f64,
    pub codebook_bits: u32,
    /// Per-beam SNR.
    pub gamma: f64,
    pub greedy_key: GreedyKey,
}

impl ZfConfig {
    pub fn new(codebook_bits: u32, gamma: f64) -> Self {
        ZfConfig {
            ortho_threshold: 0.25,
            codebook_bits,
            gamma,
            greedy_key: GreedyKey::ReportedSinr,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.ortho_threshold > 0.0 && self.ortho_threshold <= 1.0) {
            return Err(Error::domain(
                "ortho_threshold",
                format!("{} outside (0, 1]", self.ortho_threshold),
            ));
        }
        if self.codebook_bits == 0 || self.codebook_bits > 20 {
            return Err(Error::domain(
                "codebook_bits",
                format!("{} outside 1..=20", self.codebook_bits),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(
                "gamma",
                format!("{} must be positive", self.gamma),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZfOutcome {
    /// Selected users in selection order.
    pub selected: Vec<usize>,
    /// Unit-norm zero-forcing beams, one per selected user.
    pub beams: Vec<ComplexVec>,
    /// Quantized directions of the selected users.
    pub directions: Vec<ComplexVec>,
    /// Realized SINR of each selected user on the true channel.
    pub sinrs: Vec<f64>,
    /// Sum rate in nats.
    pub sum_rate: f64,
}

/// Zero-forcing SDMA with a fresh RVQ codebook of `2^codebook_bits`
/// vectors per user, drawn from `rng` in user order.
pub fn zf_schedule_and_rate<R: Rng + ?Sized>(
    channels: &[ChannelRealization],
    cfg: &ZfConfig,
    rng: &mut R,
) -> Result<ZfOutcome> {
    cfg.validate()?;
    let dim = channels
        .first()
        .ok_or_else(|| Error::domain("users", "need at least one user"))?
        .dim();
    let size = 1usize << cfg.codebook_bits;
    let codebooks = (0..channels.len())
        .map(|_| Codebook::random_rvq(rng, dim, size))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Codebook> = codebooks.iter().collect();
    zf_with_codebooks(channels, &refs, cfg)
}

/// Zero-forcing SDMA on explicit codebooks: either one per user or a
/// single codebook shared by everybody.
pub fn zf_with_codebooks(
    channels: &[ChannelRealization],
    codebooks: &[&Codebook],
    cfg: &ZfConfig,
) -> Result<ZfOutcome> {
    cfg.validate()?;
    if channels.is_empty() {
        return Err(Error::domain("users", "need at least one user"));
    }
    if codebooks.len() != channels.len() && codebooks.len() != 1 {
        return Err(Error::domain(
            "codebooks",
            format!("{} codebooks for {} users", codebooks.len(), channels.len()),
        ));
    }
    let n_t = channels[0].dim();

    // feedback: quantized direction + SINR estimate
    let mut directions = Vec::with_capacity(channels.len());
    let mut keys = Vec::with_capacity(channels.len());
    for (u, ch) in channels.iter().enumerate() {
        let cb = codebooks[if codebooks.len() == 1 { 0 } else { u }];
        let q = quantize_shape(ch.shape(), cb)?;
        directions.push(&cb.vectors()[q.codeword_index]);
        keys.push(match cfg.greedy_key {
            GreedyKey::ReportedSinr => sinr(cfg.gamma, ch.power(), q.quant_error, Regime::Normal),
            GreedyKey::ChannelPower => ch.power(),
        });
    }

    let mut order: Vec<usize> = (0..channels.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));

    // greedy semi-orthogonal selection
    let mut selected: Vec<usize> = Vec::with_capacity(n_t);
    let mut gram_inv: Option<CMatrix> = None;
    for &cand in &order {
        if selected.len() == n_t {
            break;
        }
        let compatible = selected.iter().all(|&s| {
            directions[s].dot_unchecked(directions[cand]).norm_sqr() <= cfg.ortho_threshold
        });
        if !compatible {
            continue;
        }
        selected.push(cand);
        let cols: Vec<&ComplexVec> = selected.iter().map(|&s| directions[s]).collect();
        let basis = CMatrix::from_columns(&cols);
        match basis.adjoint().matmul(&basis).inverse(RANK_TOL) {
            Some(inv) => gram_inv = Some(inv),
            None => {
                selected.pop();
                break;
            }
        }
    }
    let gram_inv = gram_inv.expect("first user always has a full-rank direction");

    // W = Ŝ (Ŝ†Ŝ)^-1, columns normalized
    let sel_dirs: Vec<ComplexVec> = selected.iter().map(|&s| directions[s].clone()).collect();
    let s_mat = CMatrix::from_columns(&sel_dirs.iter().collect::<Vec<_>>());
    let w = s_mat.matmul(&gram_inv);
    let beams: Vec<ComplexVec> = (0..w.cols())
        .map(|j| {
            let col = w.column(j);
            col.scale(Complex64::new(1.0 / col.norm(), 0.0))
        })
        .collect();

    let mut sinrs = Vec::with_capacity(selected.len());
    for (k, &u) in selected.iter().enumerate() {
        let h = channels[u].channel();
        let mut signal = 0.0;
        let mut interference = 0.0;
        for (j, b) in beams.iter().enumerate() {
            let g = h.dot_unchecked(b).norm_sqr();
            if j == k {
                signal = g;
            } else {
                interference += g;
            }
        }
        sinrs.push(cfg.gamma * signal / (1.0 + cfg.gamma * interference));
    }
    let sum_rate = sinrs.iter().map(|&s| rate_nats(s)).sum();
    Ok(ZfOutcome {
        selected,
        beams,
        directions: sel_dirs,
        sinrs,
        sum_rate,
    })
}
