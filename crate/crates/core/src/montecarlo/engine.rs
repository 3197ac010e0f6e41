use std::borrow::Cow;
use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, CodebookRefresh, ExperimentConfig, RvqSharing};
use super::stats::{mean_stderr, pairwise_sum};
use crate::baselines::{dpc_sum_capacity, zf_with_codebooks, DpcConfig, ZfConfig};
use crate::error::Result;
use crate::feedback::{
    build_sinr_quantizer, decompose, quantize_shape, sinr, ChannelRealization, Codebook,
    FeedbackReport, SinrQuantizer,
};
use crate::numkernel::{sample_gaussian_vec, RandomStream, StreamRng};
use crate::scheduler::{count_scheduled, realized_rate, schedule};

// Random lanes inside one trial stream `(seed, trial)`. User `u`'s channel
// is the `u`-th vector drawn on the channel lane, so the first `U` users
// of a trial are shared by every grid point and every algorithm run with
// the same seed.
pub const CHANNEL_LANE: u64 = 0;
/// PU2RC bases, drawn one after another.
pub const CODEBOOK_LANE: u64 = 1;
/// RVQ codebooks, one per user in user order (or a single shared one).
pub const RVQ_LANE: u64 = 2;
/// Pilot trials that size the SINR quantizer.
pub const PILOT_LANE: u64 = 3;
/// Stream id for codebooks drawn once per run.
pub const RUN_STREAM: u64 = u64::MAX;
/// Pilot trials per grid point when SINR feedback is quantized.
pub const PILOT_TRIALS: usize = 10_000;

/// Dual-power threshold (relative to `P`) for counting a user as served
/// by the DPC bound.
const DPC_ACTIVE_POWER: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// Instantaneous sum rate in nats.
    pub rate_nats: f64,
    pub scheduled: usize,
    /// Water-filling convergence (always `true` for other algorithms).
    pub converged: bool,
}

/// One grid point of a throughput curve. Rates are in bps/Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub users: usize,
    pub mean: f64,
    pub stderr: f64,
    pub n_trials: usize,
    pub mean_scheduled: f64,
    /// Trials whose water-filling hit the iteration cap.
    pub unconverged: usize,
}

/// A validated configuration plus any codebooks fixed for the whole run.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: ExperimentConfig,
    fixed_codebook: Option<Codebook>,
    fixed_rvq: Option<Vec<Codebook>>,
}

impl Experiment {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let run = RandomStream::new(cfg.seed, RUN_STREAM);
        let mut fixed_codebook = None;
        let mut fixed_rvq = None;
        if cfg.codebook_refresh == CodebookRefresh::PerRun {
            match cfg.algorithm {
                Algorithm::Pu2rc => {
                    fixed_codebook =
                        Some(pu2rc_codebook(&cfg, &mut run.fork(CODEBOOK_LANE).rng())?);
                }
                Algorithm::ZfSdma => {
                    let count = match cfg.rvq_sharing {
                        RvqSharing::Shared => 1,
                        RvqSharing::PerUser => *cfg.user_grid.last().expect("validated non-empty"),
                    };
                    fixed_rvq = Some(rvq_codebooks(&cfg, &mut run.fork(RVQ_LANE).rng(), count)?);
                }
                Algorithm::Dpc => {}
            }
        }
        Ok(Experiment {
            cfg,
            fixed_codebook,
            fixed_rvq,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    /// SINR quantizer for `users`-user trials, sized by a pilot run on
    /// its own lane. `None` when SINR feedback is exact.
    pub fn sinr_quantizer(&self, users: usize) -> Result<Option<SinrQuantizer>> {
        let Some(bits) = self.cfg.sinr_feedback_bits else {
            return Ok(None);
        };
        let pilot: Vec<Vec<f64>> = (0..PILOT_TRIALS as u64)
            .into_par_iter()
            .map(|t| {
                let stream = RandomStream::new(self.cfg.seed, t).fork(PILOT_LANE);
                let codebook = self.pu2rc_codebook_for(stream)?;
                let chans =
                    draw_channels(&mut stream.fork(CHANNEL_LANE).rng(), self.cfg.n_t, users)?;
                chans
                    .iter()
                    .map(|ch| {
                        let q = quantize_shape(ch.shape(), &codebook)?;
                        Ok(sinr(
                            self.cfg.gamma(),
                            ch.power(),
                            q.quant_error,
                            self.cfg.regime,
                        ))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(Some(build_sinr_quantizer(bits, &pilot.concat())?))
    }

    /// One trial with `users` users.
    pub fn trial(
        &self,
        users: usize,
        trial: u64,
        quantizer: Option<&SinrQuantizer>,
    ) -> Result<TrialOutcome> {
        let stream = RandomStream::new(self.cfg.seed, trial);
        match self.cfg.algorithm {
            Algorithm::Pu2rc => self.pu2rc_trial(users, stream, quantizer),
            Algorithm::ZfSdma => self.zf_trial(users, stream),
            Algorithm::Dpc => self.dpc_trial(users, stream),
        }
    }

    /// All trials of one grid point, in trial order.
    pub fn trials(&self, users: usize) -> Result<Vec<TrialOutcome>> {
        let quantizer = self.sinr_quantizer(users)?;
        (0..self.cfg.trials as u64)
            .into_par_iter()
            .map(|t| self.trial(users, t, quantizer.as_ref()))
            .collect()
    }

    pub fn point(&self, users: usize) -> Result<CurvePoint> {
        let outcomes = self.trials(users)?;
        let bits: Vec<f64> = outcomes.iter().map(|o| o.rate_nats / LN_2).collect();
        let (mean, stderr) = mean_stderr(&bits);
        let counts: Vec<f64> = outcomes.iter().map(|o| o.scheduled as f64).collect();
        Ok(CurvePoint {
            users,
            mean,
            stderr,
            n_trials: outcomes.len(),
            mean_scheduled: pairwise_sum(&counts) / outcomes.len() as f64,
            unconverged: outcomes.iter().filter(|o| !o.converged).count(),
        })
    }

    pub fn run(&self) -> Result<Vec<CurvePoint>> {
        self.cfg.user_grid.iter().map(|&u| self.point(u)).collect()
    }

    fn pu2rc_codebook_for(&self, stream: RandomStream) -> Result<Cow<'_, Codebook>> {
        Ok(match &self.fixed_codebook {
            Some(cb) => Cow::Borrowed(cb),
            None => Cow::Owned(pu2rc_codebook(
                &self.cfg,
                &mut stream.fork(CODEBOOK_LANE).rng(),
            )?),
        })
    }

    fn pu2rc_trial(
        &self,
        users: usize,
        stream: RandomStream,
        quantizer: Option<&SinrQuantizer>,
    ) -> Result<TrialOutcome> {
        let codebook = self.pu2rc_codebook_for(stream)?;
        let chans = draw_channels(&mut stream.fork(CHANNEL_LANE).rng(), self.cfg.n_t, users)?;
        let mut true_sinrs = Vec::with_capacity(users);
        let mut reports = Vec::with_capacity(users);
        for (u, ch) in chans.iter().enumerate() {
            let q = quantize_shape(ch.shape(), &codebook)?;
            let s = sinr(self.cfg.gamma(), ch.power(), q.quant_error, self.cfg.regime);
            true_sinrs.push(s);
            reports.push(FeedbackReport::new(
                u,
                q,
                quantizer.map_or(s, |qz| qz.quantize(s)),
            ));
        }
        let decision = schedule(&reports, &codebook)?;
        let rate_nats = match quantizer {
            Some(_) => realized_rate(&decision, |u| true_sinrs[u]),
            None => decision.sum_rate,
        };
        Ok(TrialOutcome {
            rate_nats,
            scheduled: count_scheduled(&decision),
            converged: true,
        })
    }

    fn zf_trial(&self, users: usize, stream: RandomStream) -> Result<TrialOutcome> {
        let chans = draw_channels(&mut stream.fork(CHANNEL_LANE).rng(), self.cfg.n_t, users)?;
        let cfg = ZfConfig {
            ortho_threshold: self.cfg.ortho_threshold,
            codebook_bits: self.cfg.codebook_bits.expect("validated"),
            gamma: self.cfg.gamma(),
            greedy_key: self.cfg.greedy_key,
        };
        let drawn;
        let books: Vec<&Codebook> = match &self.fixed_rvq {
            Some(fixed) => match self.cfg.rvq_sharing {
                RvqSharing::Shared => vec![&fixed[0]],
                RvqSharing::PerUser => fixed[..users].iter().collect(),
            },
            None => {
                let count = match self.cfg.rvq_sharing {
                    RvqSharing::Shared => 1,
                    RvqSharing::PerUser => users,
                };
                drawn = rvq_codebooks(&self.cfg, &mut stream.fork(RVQ_LANE).rng(), count)?;
                drawn.iter().collect()
            }
        };
        let out = zf_with_codebooks(&chans, &books, &cfg)?;
        Ok(TrialOutcome {
            rate_nats: out.sum_rate,
            scheduled: out.selected.len(),
            converged: true,
        })
    }

    fn dpc_trial(&self, users: usize, stream: RandomStream) -> Result<TrialOutcome> {
        let chans = draw_channels(&mut stream.fork(CHANNEL_LANE).rng(), self.cfg.n_t, users)?;
        let power = self.cfg.total_power();
        let out = dpc_sum_capacity(&chans, &DpcConfig::new(power))?;
        Ok(TrialOutcome {
            rate_nats: out.sum_capacity,
            scheduled: out
                .powers
                .iter()
                .filter(|&&p| p > DPC_ACTIVE_POWER * power)
                .count(),
            converged: out.converged,
        })
    }
}

fn pu2rc_codebook(cfg: &ExperimentConfig, rng: &mut StreamRng) -> Result<Codebook> {
    Codebook::random_multi_basis(rng, cfg.n_t, cfg.m.expect("validated"))
}

fn rvq_codebooks(
    cfg: &ExperimentConfig,
    rng: &mut StreamRng,
    count: usize,
) -> Result<Vec<Codebook>> {
    let size = 1usize << cfg.codebook_bits.expect("validated");
    (0..count)
        .map(|_| Codebook::random_rvq(rng, cfg.n_t, size))
        .collect()
}

/// `users` i.i.d. `CN(0, I)` channels.
pub(crate) fn draw_channels(
    rng: &mut StreamRng,
    n_t: usize,
    users: usize,
) -> Result<Vec<ChannelRealization>> {
    (0..users)
        .map(|_| decompose(sample_gaussian_vec(rng, n_t)?))
        .collect()
}

/// Throughput curve for every grid point of `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    Experiment::new(cfg.clone())?.run()
}
