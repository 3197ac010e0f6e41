//! Closed-form statistics of the shape quantization error `ε` for a
//! codebook of `M` independent Haar-random bases in `C^Nt`.

use crate::error::{Error, Result};

fn check_dims(n_t: usize, m: usize) -> Result<()> {
    if n_t < 2 {
        return Err(Error::domain(
            "n_t",
            format!("need at least 2 antennas, got {n_t}"),
        ));
    }
    if m == 0 {
        return Err(Error::domain("m", "need at least one basis"));
    }
    Ok(())
}

/// `Pr(ε ≥ δ) = [1 - Nt δ^(Nt-1)]^M`, exact for `0 ≤ δ ≤ 1/2`, where the
/// caps around the vectors of one basis do not overlap.
pub fn ccdf_eps(delta: f64, n_t: usize, m: usize) -> Result<f64> {
    check_dims(n_t, m)?;
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::domain("delta", format!("{delta} outside [0, 1/2]")));
    }
    let base = 1.0 - n_t as f64 * delta.powi(n_t as i32 - 1);
    Ok(base.max(0.0).powi(m as i32))
}

/// `(1 - δ^(Nt-1))^M`, an upper bound on `Pr(ε ≥ δ)` over all of `[0, 1]`.
pub fn ccdf_eps_upper_bound(delta: f64, n_t: usize, m: usize) -> Result<f64> {
    check_dims(n_t, m)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain("delta", format!("{delta} outside [0, 1]")));
    }
    Ok((1.0 - delta.powi(n_t as i32 - 1)).powi(m as i32))
}

/// Bounds on `E[-ln ε]`, natural log throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsLogBounds {
    pub p_alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn elog_eps_bounds(n_t: usize, m: usize) -> Result<EpsLogBounds> {
    check_dims(n_t, m)?;
    let nt = n_t as f64;
    let p_alpha = 1.0 - (1.0 - nt * 2f64.powi(-(n_t as i32 - 1))).powi(m as i32);
    let spread = (nt - 1.0) * p_alpha;
    let offset = nt.ln() / (nt - 1.0);
    Ok(EpsLogBounds {
        p_alpha,
        lower: (m as f64).ln() / spread + offset,
        upper: ((m as f64).ln() + 1.0) / spread + offset,
    })
}
