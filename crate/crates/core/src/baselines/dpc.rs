//! Sum capacity of the MISO broadcast channel under a sum-power
//! constraint, evaluated in the dual multiple-access channel:
//!
//! `max ln det(I + Σ p_u h_u h_u†)` over `p ≥ 0`, `Σ p_u ≤ P`.
//!
//! Each iteration water-fills the total power over users against their
//! current effective channels (every user sees the others' current powers
//! as interference), then moves from the current powers toward the
//! water-filling solution with an exact line search on the concave
//! objective. A step of `1/U` toward that point never decreases the
//! objective, so the line-search step never does either.

use crate::error::{Error, Result};
use crate::feedback::ChannelRealization;
use crate::numkernel::CMatrix;

const LINE_SEARCH_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcConfig {
    /// Total transmit power `P` (noise variance 1).
    pub power: f64,
    /// Stop once the objective improves by less than this (nats).
    pub tol: f64,
    pub max_iters: usize,
}

impl DpcConfig {
    pub fn new(power: f64) -> Self {
        DpcConfig {
            power,
            tol: 1e-6,
            max_iters: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpcOutcome {
    /// Sum capacity in nats.
    pub sum_capacity: f64,
    /// Dual uplink powers.
    pub powers: Vec<f64>,
    pub iterations: usize,
    /// `false` when `max_iters` ran out first; the value is then the best
    /// objective reached.
    pub converged: bool,
}

/// `ln det(I + Σ p_u h_u h_u†)`.
pub fn dpc_objective(channels: &[ChannelRealization], powers: &[f64]) -> f64 {
    covariance(channels, powers)
        .ln_det_hpd()
        .expect("I + PSD is positive definite")
}

fn covariance(channels: &[ChannelRealization], powers: &[f64]) -> CMatrix {
    let n_t = channels[0].dim();
    let mut a = CMatrix::identity(n_t);
    for (ch, &p) in channels.iter().zip(powers) {
        if p > 0.0 {
            a.add_outer(p, ch.channel());
        }
    }
    a
}

/// `q_u = (μ - 1/g_u)^+` with `Σ q_u = total`.
fn water_fill(gains: &[f64], total: f64) -> Vec<f64> {
    let mut floors: Vec<(f64, usize)> = gains
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0.0)
        .map(|(i, &g)| (1.0 / g, i))
        .collect();
    floors.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut level = 0.0;
    let mut acc = 0.0;
    for (k, &(f, _)) in floors.iter().enumerate() {
        acc += f;
        let candidate = (total + acc) / (k + 1) as f64;
        if k + 1 == floors.len() || candidate <= floors[k + 1].0 {
            level = candidate;
            break;
        }
    }
    let mut q = vec![0.0; gains.len()];
    for &(f, i) in &floors {
        q[i] = (level - f).max(0.0);
    }
    q
}

pub fn dpc_sum_capacity(channels: &[ChannelRealization], cfg: &DpcConfig) -> Result<DpcOutcome> {
    if channels.is_empty() {
        return Err(Error::domain("users", "need at least one user"));
    }
    if !(cfg.power > 0.0 && cfg.power.is_finite()) {
        return Err(Error::domain(
            "power",
            format!("{} must be positive", cfg.power),
        ));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 || cfg.max_iters == 0 {
        return Err(Error::domain(
            "dpc config",
            "tol must be > 0 and max_iters >= 1",
        ));
    }
    let n_t = channels[0].dim();
    if channels.iter().any(|c| c.dim() != n_t) {
        return Err(Error::domain("channels", "mixed antenna counts"));
    }
    let users = channels.len();

    let mut powers = vec![cfg.power / users as f64; users];
    let mut objective = dpc_objective(channels, &powers);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;
        let a = covariance(channels, &powers);
        let a_inv = a.inverse(1e-15).expect("I + PSD is invertible");

        // effective gain against everybody else: a/(1 - p a), a = h† A^-1 h
        let gains: Vec<f64> = channels
            .iter()
            .zip(&powers)
            .map(|(ch, &p)| {
                let q = a_inv.quad_form(ch.channel());
                q / (1.0 - p * q).max(f64::MIN_POSITIVE)
            })
            .collect();
        let target = water_fill(&gains, cfg.power);

        let mut dir = CMatrix::zeros(n_t, n_t);
        for ((ch, &t), &p) in channels.iter().zip(&target).zip(&powers) {
            if t != p {
                dir.add_outer(t - p, ch.channel());
            }
        }
        let step = line_search(&a, &dir);
        let candidate: Vec<f64> = powers
            .iter()
            .zip(&target)
            .map(|(&p, &t)| (p + step * (t - p)).max(0.0))
            .collect();
        let next = dpc_objective(channels, &candidate);

        assert!(
            next >= objective - 1e-12 * (1.0 + objective.abs()),
            "water-filling objective decreased: {objective} -> {next}"
        );
        let gain = next - objective;
        if next >= objective {
            powers = candidate;
            objective = next;
        }
        if gain < cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(DpcOutcome {
        sum_capacity: objective,
        powers,
        iterations,
        converged,
    })
}

/// Maximizer over `t ∈ [0, 1]` of the concave `ln det(A + t D)`, found by
/// bisection on its derivative `tr((A + tD)^-1 D)`.
fn line_search(a: &CMatrix, dir: &CMatrix) -> f64 {
    let slope = |t: f64| {
        let mut m = a.clone();
        m.add_scaled(t, dir);
        match m.inverse(1e-15) {
            Some(inv) => inv.matmul(dir).trace().re,
            None => f64::NEG_INFINITY,
        }
    };
    if slope(1.0) >= 0.0 {
        return 1.0;
    }
    if slope(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..LINE_SEARCH_STEPS {
        let mid = 0.5 * (lo + hi);
        if slope(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
