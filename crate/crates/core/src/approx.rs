//! Truncated Taylor series of the ergodic capacity in the trace moments:
//!
//! ```text
//! C ~ (1/ln 2) sum_{k=1}^{K} (-1)^{k+1} rho^k / k * E[Trace(W^k)]
//! ```
//!
//! Each eigenvalue satisfies `0 <= lambda <= Trace(W) = 1`, so the
//! expansion of `log(1 + rho lambda)` converges for `rho <= 1`.

use std::f64::consts::LN_2;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TERMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxSpec {
    n_terms: usize,
    rho: f64,
    strict: bool,
}

impl ApproxSpec {
    pub fn new(n_terms: usize, rho: f64, strict: bool) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::InvalidConfig("series needs at least one term".into()));
        }
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "SNR must be finite and non-negative, got {rho}"
            )));
        }
        Ok(Self {
            n_terms,
            rho,
            strict,
        })
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn converges(&self) -> bool {
        self.rho <= 1.0
    }
}

/// Emitted instead of an error when a non-strict series is evaluated
/// outside its convergence region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceWarning {
    pub rho: f64,
}

impl fmt::Display for ConvergenceWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho = {} exceeds 1; the capacity series may diverge and the truncated value is not an approximation",
            self.rho
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEstimate {
    pub value: f64,
    pub warning: Option<ConvergenceWarning>,
}

fn term(rho: f64, k: usize, moment: f64) -> f64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * rho.powi(k as i32) / k as f64 * moment / LN_2
}

/// `moments[0]` is `E[Trace(W)]`, `moments[1]` is `E[Trace(W^2)]`, ...
pub fn capacity_series(moments: &[f64], spec: &ApproxSpec) -> Result<SeriesEstimate> {
    if moments.len() < spec.n_terms {
        return Err(Error::NotEnoughMoments {
            requested: spec.n_terms,
            available: moments.len(),
        });
    }
    let warning = if spec.converges() {
        None
    } else if spec.strict {
        return Err(Error::SeriesDivergent { rho: spec.rho });
    } else {
        Some(ConvergenceWarning { rho: spec.rho })
    };
    let value = moments[..spec.n_terms]
        .iter()
        .enumerate()
        .map(|(i, &m)| term(spec.rho, i + 1, m))
        .sum();
    Ok(SeriesEstimate { value, warning })
}

/// Bound on `|C - capacity_series|` from the first omitted term.
///
/// Per eigenvalue the series alternates with decreasing terms when
/// `rho lambda <= 1`, so the error is at most
/// `(rho lambda)^{K+1} / (K+1) / ln 2`. Summed and averaged this needs
/// `E[Trace(W^{K+1})]`; when the caller has no such moment,
/// `E[Trace(W^K)]` bounds it from above because `lambda <= 1`.
pub fn series_remainder_bound(moments: &[f64], spec: &ApproxSpec) -> Result<f64> {
    if !spec.converges() {
        return Err(Error::SeriesDivergent { rho: spec.rho });
    }
    let k = spec.n_terms;
    let next_moment = match moments.get(k) {
        Some(&m) => m,
        None => *moments.get(k - 1).ok_or(Error::NotEnoughMoments {
            requested: k,
            available: moments.len(),
        })?,
    };
    Ok(term(spec.rho, k + 1, next_moment).abs())
}
