//! Trace moments `E[Trace(W^k)]` of the normalized Gram matrix.
//!
//! All closed forms are for the trace-one normalization of `W`. With
//! `x = sin(theta) sin(phi)` the characteristic function of one
//! satellite's direction cosine is
//!
//! ```text
//! E[exp(i a x)] = (2/pi) int_0^{pi/2} J0(a sin t) dt = J0(a/2)^2
//! ```
//!
//! and every moment reduces to sums of products of that function over
//! integer multiples of `kd`.

use serde::Serialize;

use crate::capacity::trace_powers;
use crate::error::{Error, Result};
use crate::geometry::{ArrayConfig, RngSpec};
use crate::montecarlo::map_realizations;
use crate::specialfn::bessel_j0;
use crate::stats::mean_stderr;

/// Half-width of the agreement band, in empirical standard errors.
pub const AGREEMENT_SIGMAS: f64 = 3.0;
/// Absolute slack added to the band so that zero-variance moments are
/// compared up to rounding.
pub const AGREEMENT_FLOOR: f64 = 1e-12;

/// Whether `analytic` lies within the agreement band of an empirical mean.
pub fn within_band(analytic: f64, mean: f64, stderr: f64) -> bool {
    (analytic - mean).abs() <= AGREEMENT_SIGMAS * stderr + AGREEMENT_FLOOR
}

/// `E[exp(i a x)]` for one satellite's direction cosine.
pub fn direction_characteristic(a: f64) -> f64 {
    bessel_j0(0.5 * a).powi(2)
}

/// `E[Trace(W)]`, which is exactly 1 for every realization.
pub fn moment1_analytic(_cfg: &ArrayConfig) -> f64 {
    1.0
}

/// `E[Trace(W^2)]`.
pub fn moment2_analytic(cfg: &ArrayConfig) -> f64 {
    let n_r = cfg.n_r() as f64;
    let n_t = cfg.n_t() as f64;
    let kd = cfg.kd();
    let bessel_sum: f64 = (1..cfg.n_r())
        .map(|s| (n_r - s as f64) * bessel_j0(s as f64 * kd / 2.0).powi(4))
        .sum();
    let numerator = n_r * n_r * n_t + n_r * n_t * (n_t - 1.0) + 2.0 * n_t * (n_t - 1.0) * bessel_sum;
    numerator / (n_r * n_t).powi(2)
}

/// `E[Trace(W^3)]` as published in closed form.
///
/// The published expression has an unbound index and a fractional
/// summation limit. It is read here with `(n_r - 2m)^+` as
/// `max(n_r - 2t, 0)` over the inner index `t`, the upper limit
/// `(n_r - 1)/2` as its floor, and the product index distinct from the
/// wavenumber. It does not match simulation (it is not even 1 when
/// `n_t = 1`); [`moment_reports`] flags it, and [`moment3_corrected`]
/// is the expression to use.
pub fn moment3_analytic(cfg: &ArrayConfig) -> f64 {
    let n_r = cfg.n_r() as f64;
    let n_t = cfg.n_t() as f64;
    let kd = cfg.kd();
    let j0 = |v: f64| bessel_j0(v * kd);
    let rising3 = |base: f64| base * (base + 1.0) * (base + 2.0);

    let mut total = n_r.powi(3) * n_t
        + 3.0 * n_r * n_r * n_t * (n_t - 1.0)
        + n_r * n_t * (n_t - 1.0) * (n_t - 2.0);
    for s in 1..cfg.n_r() {
        let sf = s as f64;
        total += 6.0 * n_r * (n_r - sf) * n_t * (n_t - 1.0) * j0(sf / 2.0).powi(2);
        total += 6.0 * (n_t - 2.0) * rising3(sf) * j0((n_r - sf) / 2.0).powi(2);
    }
    for s in 1..=(cfg.n_r() - 1) / 2 {
        let sf = s as f64;
        total += 6.0 * (n_t - 2.0) * rising3(n_r - 2.0 * sf) * j0(sf / 2.0).powi(2) * j0(sf);
    }
    for s in 1..cfg.n_r() {
        let sf = s as f64;
        let upper = cfg.n_r() as i64 - 2 * s as i64;
        for t in 1..=upper.max(0) {
            let tf = t as f64;
            total += 6.0
                * (n_r - 2.0 * tf).max(0.0)
                * (n_t - 2.0)
                * rising3(2.0 * n_r - 2.0 * tf - 2.0 * sf + 2.0)
                * j0(sf / 2.0)
                * j0((sf + tf) / 2.0)
                * j0((2.0 * sf + tf) / 2.0);
        }
    }
    total / (n_r * n_t).powi(3)
}

/// `E[Trace(W^3)]` by direct expansion of `sum_{i,j,l} w_ij w_jl w_li`.
///
/// Grouping the satellite index triples by coincidence pattern:
///
/// * `i = j = l` (`n_t` triples): `n_r^3`.
/// * exactly two equal (`3 n_t (n_t - 1)` triples): one free element sum
///   times `|sum_m exp(i kd m gamma)|^2`, with mean
///   `n_r (n_r + 2 sum_s (n_r - s) J0(s kd / 2)^4)`.
/// * all distinct (`n_t (n_t - 1)(n_t - 2)` triples):
///   `sum_{m1,m2,m3} psi(m1 - m2) psi(m2 - m3) psi(m3 - m1)` where
///   `psi(u) = J0(u kd / 2)^2`.
pub fn moment3_corrected(cfg: &ArrayConfig) -> f64 {
    let n = cfg.n_r();
    let n_r = n as f64;
    let n_t = cfg.n_t() as f64;
    let kd = cfg.kd();

    let pair: f64 = n_r
        + 2.0
            * (1..n)
                .map(|s| (n_r - s as f64) * bessel_j0(s as f64 * kd / 2.0).powi(4))
                .sum::<f64>();

    // psi at offsets -(n-1)..=(n-1), stored at offset + (n - 1)
    let psi: Vec<f64> = (0..2 * n - 1)
        .map(|i| direction_characteristic((i as f64 - (n_r - 1.0)) * kd))
        .collect();
    let at = |offset: i64| psi[(offset + n as i64 - 1) as usize];
    let last = n as i64 - 1;
    let mut triple = 0.0;
    // a = m1 - m2, b = m2 - m3; count the m2 keeping m1, m3 in range
    for a in -last..=last {
        for b in -last..=last {
            let lo = 0.max(-a).max(b);
            let hi = last.min(last - a).min(last + b);
            if hi < lo {
                continue;
            }
            let count = (hi - lo + 1) as f64;
            triple += count * at(a) * at(b) * at(-(a + b));
        }
    }

    let total = n_t * n_r.powi(3)
        + 3.0 * n_t * (n_t - 1.0) * n_r * pair
        + n_t * (n_t - 1.0) * (n_t - 2.0) * triple;
    total / (n_r * n_t).powi(3)
}

/// Analytic vs simulated `E[Trace(W^k)]` for one geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub k: u32,
    /// Published closed form, when one exists for this `k`.
    pub analytic: Option<f64>,
    pub empirical_mean: f64,
    pub empirical_stderr: f64,
    pub n_samples: u64,
    pub cfg: ArrayConfig,
    pub kd: f64,
    /// `analytic` lies within [`AGREEMENT_SIGMAS`] standard errors of the
    /// empirical mean (plus [`AGREEMENT_FLOOR`]).
    pub verified: bool,
    /// Re-derived closed form, where it differs from the published one.
    pub corrected: Option<f64>,
}

fn published(cfg: &ArrayConfig, k: u32) -> Option<f64> {
    match k {
        1 => Some(moment1_analytic(cfg)),
        2 => Some(moment2_analytic(cfg)),
        3 => Some(moment3_analytic(cfg)),
        _ => None,
    }
}

/// Reports for `k = 1..=max_k`, all from the same `n_samples` draws.
pub fn moment_reports(cfg: &ArrayConfig, max_k: u32, n_samples: u64, rng: &RngSpec) -> Result<Vec<MomentReport>> {
    if !(1..=6).contains(&max_k) {
        return Err(Error::InvalidConfig(format!(
            "moment order must be in 1..=6, got {max_k}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let per_draw = map_realizations(cfg, rng, n_samples, |w| Ok(trace_powers(w, max_k)))?;
    let reports = (1..=max_k)
        .map(|k| {
            let column: Vec<f64> = per_draw.iter().map(|t| t[k as usize - 1]).collect();
            let (mean, stderr) = mean_stderr(&column);
            let analytic = published(cfg, k);
            MomentReport {
                k,
                analytic,
                empirical_mean: mean,
                empirical_stderr: stderr,
                n_samples,
                cfg: *cfg,
                kd: cfg.kd(),
                verified: analytic.is_some_and(|a| within_band(a, mean, stderr)),
                corrected: (k == 3).then(|| moment3_corrected(cfg)),
            }
        })
        .collect();
    Ok(reports)
}

/// Report for a single moment order.
pub fn moment_empirical(cfg: &ArrayConfig, k: u32, n_samples: u64, rng: &RngSpec) -> Result<MomentReport> {
    if k == 0 {
        return Err(Error::InvalidConfig("moment order must be at least 1".into()));
    }
    let mut reports = moment_reports(cfg, k, n_samples, rng)?;
    Ok(reports.pop().expect("k >= 1 reports"))
}
