//! Joint user selection and beamforming over a multi-basis codebook.
//!
//! Every codeword is offered to the user with the largest reported SINR
//! among those who quantized onto it; then the basis whose beams give the
//! largest `Σ ln(1 + ξ)` is transmitted on.

use crate::error::{Error, Result};
use crate::feedback::{rate_nats, Codebook, CodebookKind, FeedbackReport};
use crate::numkernel::ComplexVec;

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleDecision {
    /// Chosen basis `m*`.
    pub basis_index: usize,
    /// User served on each beam of the chosen basis.
    pub assignments: Vec<Option<usize>>,
    /// Scheduling SINR `ξ` per beam, `0` on idle beams.
    pub beam_sinrs: Vec<f64>,
    /// Vectors of the chosen basis.
    pub beamformers: Vec<ComplexVec>,
    /// `Σ ln(1 + ξ)` in nats.
    pub sum_rate: f64,
}

impl ScheduleDecision {
    /// Scheduled `(beam, user)` pairs in beam order.
    pub fn scheduled(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignments
            .iter()
            .enumerate()
            .filter_map(|(n, u)| u.map(|u| (n, u)))
    }
}

fn require_multi_basis(codebook: &Codebook) -> Result<usize> {
    match codebook.kind() {
        CodebookKind::MultiBasis { bases } => Ok(bases),
        CodebookKind::Rvq => Err(Error::domain(
            "codebook",
            "orthogonal scheduling needs a multi-basis codebook",
        )),
    }
}

fn check_reports(reports: &[FeedbackReport], codebook: &Codebook) -> Result<()> {
    let max_user = reports.iter().map(|r| r.user).max().unwrap_or(0);
    let mut seen = vec![false; max_user + 1];
    for r in reports {
        if r.codeword_index >= codebook.len() {
            return Err(Error::BadCodeword {
                index: r.codeword_index,
                size: codebook.len(),
            });
        }
        if std::mem::replace(&mut seen[r.user], true) {
            return Err(Error::DuplicateUser(r.user));
        }
    }
    Ok(())
}

/// Users grouped by the codeword they quantized onto, indexed by flat
/// codeword index; each group is sorted by user index.
pub fn associate(reports: &[FeedbackReport], codebook: &Codebook) -> Result<Vec<Vec<usize>>> {
    check_reports(reports, codebook)?;
    let mut groups = vec![Vec::new(); codebook.len()];
    for r in reports {
        groups[r.codeword_index].push(r.user);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    Ok(groups)
}

pub fn schedule(reports: &[FeedbackReport], codebook: &Codebook) -> Result<ScheduleDecision> {
    let bases = require_multi_basis(codebook)?;
    check_reports(reports, codebook)?;
    let n_t = codebook.dim();

    // best (sinr, user) per codeword
    let mut best: Vec<Option<(f64, usize)>> = vec![None; codebook.len()];
    for r in reports {
        let slot = &mut best[r.codeword_index];
        let better = match *slot {
            None => true,
            Some((s, u)) => r.sinr > s || (r.sinr == s && r.user < u),
        };
        if better {
            *slot = Some((r.sinr, r.user));
        }
    }

    let basis_rate = |m: usize| -> f64 {
        best[m * n_t..(m + 1) * n_t]
            .iter()
            .map(|b| b.map_or(0.0, |(s, _)| rate_nats(s)))
            .sum()
    };
    let mut m_star = 0;
    let mut best_rate = basis_rate(0);
    for m in 1..bases {
        let r = basis_rate(m);
        if r > best_rate {
            m_star = m;
            best_rate = r;
        }
    }

    let chosen = &best[m_star * n_t..(m_star + 1) * n_t];
    Ok(ScheduleDecision {
        basis_index: m_star,
        assignments: chosen.iter().map(|b| b.map(|(_, u)| u)).collect(),
        beam_sinrs: chosen.iter().map(|b| b.map_or(0.0, |(s, _)| s)).collect(),
        beamformers: codebook.basis(m_star).to_vec(),
        sum_rate: best_rate,
    })
}

/// `Σ ln(1 + ξ)` over the beams of a decision, in nats.
pub fn instantaneous_rate(decision: &ScheduleDecision) -> f64 {
    decision.beam_sinrs.iter().map(|&s| rate_nats(s)).sum()
}

pub fn count_scheduled(decision: &ScheduleDecision) -> usize {
    decision.assignments.iter().filter(|a| a.is_some()).count()
}

/// Rate of the scheduled users evaluated with a different SINR per user
/// (true SINRs when scheduling ran on quantized reports).
pub fn realized_rate(decision: &ScheduleDecision, sinr_of: impl Fn(usize) -> f64) -> f64 {
    decision
        .scheduled()
        .map(|(_, u)| rate_nats(sinr_of(u)))
        .sum()
}
