//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use num_complex::Complex64;
use pu2rc::feedback::{quantize_shape, Codebook, FeedbackReport};
use pu2rc::numkernel::{sample_unit_vec, ComplexVec};
use rand::Rng;

/// Scheduling instance with `U <= 8`, `M <= 3`, `Nt <= 3`, codeword
/// choices sometimes randomized and SINRs sometimes tied.
pub fn random_schedule_instance(rng: &mut impl Rng) -> (Vec<FeedbackReport>, Codebook) {
    let n_t = rng.random_range(1..=3);
    let m = rng.random_range(1..=3);
    let users = rng.random_range(1..=8);
    let codebook = Codebook::random_multi_basis(rng, n_t, m).unwrap();
    let reports = (0..users)
        .map(|u| {
            let shape = sample_unit_vec(rng, n_t).unwrap();
            let mut q = quantize_shape(&shape, &codebook).unwrap();
            // occasionally force a random codeword so all beams get exercised
            if rng.random_bool(0.5) {
                q.codeword_index = rng.random_range(0..codebook.len());
            }
            // coarse values produce ties
            let s = if rng.random_bool(0.3) {
                rng.random_range(0..4) as f64 * 0.5
            } else {
                rng.random_range(0.0..20.0)
            };
            FeedbackReport::new(u, q, s)
        })
        .collect();
    (reports, codebook)
}

/// Result of an exhaustive scheduling search.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteSchedule {
    pub basis_index: usize,
    pub assignments: Vec<Option<usize>>,
    pub sum_rate: f64,
}

/// Tries every basis and every assignment of one codeword member per beam;
/// keeps the first strict maximum in (basis, user) lexicographic order.
pub fn brute_force_schedule(reports: &[FeedbackReport], codebook: &Codebook) -> BruteSchedule {
    let n_t = codebook.dim();
    let bases = codebook.len() / n_t;
    let mut best: Option<BruteSchedule> = None;
    for m in 0..bases {
        let members: Vec<Vec<&FeedbackReport>> = (0..n_t)
            .map(|n| {
                let mut v: Vec<&FeedbackReport> = reports
                    .iter()
                    .filter(|r| r.codeword_index == m * n_t + n)
                    .collect();
                v.sort_by_key(|r| r.user);
                v
            })
            .collect();
        let radix: Vec<usize> = members.iter().map(|g| g.len().max(1)).collect();
        let combos: usize = radix.iter().product();
        for mut code in 0..combos {
            // beam 0 is the most significant digit
            let mut picks = vec![0usize; n_t];
            for n in (0..n_t).rev() {
                picks[n] = code % radix[n];
                code /= radix[n];
            }
            let mut rate = 0.0;
            let mut assignments = Vec::with_capacity(n_t);
            for n in 0..n_t {
                match members[n].get(picks[n]) {
                    Some(r) => {
                        rate += (1.0 + r.sinr).ln();
                        assignments.push(Some(r.user));
                    }
                    None => assignments.push(None),
                }
            }
            if best.as_ref().is_none_or(|b| rate > b.sum_rate) {
                best = Some(BruteSchedule {
                    basis_index: m,
                    assignments,
                    sum_rate: rate,
                });
            }
        }
    }
    best.expect("codebook has at least one basis")
}

fn dot(a: &ComplexVec, b: &ComplexVec) -> Complex64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Orthogonal random beamforming on one basis: every beam goes to the user
/// with the highest SINR on it, computed from the received-signal model
/// with equal power `gamma` on all beams. Each user competes only for its
/// own best beam. Returns the sum rate in nats.
pub fn single_basis_rate(channels: &[ComplexVec], basis: &[ComplexVec], gamma: f64) -> f64 {
    let n_t = basis.len();
    let mut best = vec![0.0f64; n_t];
    for h in channels {
        let gains: Vec<f64> = basis.iter().map(|v| dot(h, v).norm_sqr()).collect();
        let total: f64 = gains.iter().sum();
        // strongest beam, lowest index on ties
        let mut k = 0;
        for (n, g) in gains.iter().enumerate() {
            if *g > gains[k] {
                k = n;
            }
        }
        let s = gamma * gains[k] / (1.0 + gamma * (total - gains[k]));
        best[k] = best[k].max(s);
    }
    best.iter().map(|s| (1.0 + s).ln()).sum()
}

/// Two-user dual-MAC sum capacity `max ln det(I + p1 h1 h1' + p2 h2 h2')`
/// over `p1 + p2 = power`, by grid search followed by golden-section
/// refinement of the best cell.
pub fn two_user_dpc_grid(h1: &ComplexVec, h2: &ComplexVec, power: f64) -> f64 {
    let a1 = h1.norm_sqr();
    let a2 = h2.norm_sqr();
    let c = dot(h1, h2).norm_sqr();
    let f = |p1: f64| {
        let p2 = power - p1;
        ((1.0 + p1 * a1) * (1.0 + p2 * a2) - p1 * p2 * c).ln()
    };
    const CELLS: usize = 20_000;
    let step = power / CELLS as f64;
    let mut k_best = 0;
    let mut f_best = f(0.0);
    for k in 1..=CELLS {
        let v = f(k as f64 * step);
        if v > f_best {
            k_best = k;
            f_best = v;
        }
    }
    let mut lo = (k_best.saturating_sub(1)) as f64 * step;
    let mut hi = ((k_best + 1).min(CELLS)) as f64 * step;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    f_best.max(f(0.5 * (lo + hi)))
}

/// `Pr(X <= x)` for `X ~ Beta(1, b)`.
pub fn beta1_cdf(x: f64, b: f64) -> f64 {
    1.0 - (1.0 - x.clamp(0.0, 1.0)).powf(b)
}

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}
