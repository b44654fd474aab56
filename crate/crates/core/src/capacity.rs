//! Per-realization capacity through log-det and through the spectrum.

use std::f64::consts::LN_2;

use nalgebra::linalg::{Cholesky, SymmetricEigen};
use serde::Serialize;

use crate::channel::{CMatrix, GramMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are rounding noise and clamp to 0.
pub const PSD_TOLERANCE: f64 = 1e-10;

const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Linear SNR `rho = P / sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SnrConfig {
    rho: f64,
}

impl SnrConfig {
    pub fn linear(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho >= 0.0 {
            Ok(Self { rho })
        } else {
            Err(Error::InvalidConfig(format!(
                "SNR must be finite and non-negative, got {rho}"
            )))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::linear(db_to_linear(db))
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(rho: f64) -> f64 {
    10.0 * rho.log10()
}

/// Real spectrum of a Gram matrix, sorted descending, clamped at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
}

impl EigenSpectrum {
    /// Builds a spectrum from arbitrary non-negative values (sorted here).
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: v });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn power_sum(&self, p: i32) -> f64 {
        self.values.iter().map(|l| l.powi(p)).sum()
    }
}

pub fn eigen_spectrum(w: &GramMatrix) -> Result<EigenSpectrum> {
    let eig = SymmetricEigen::try_new(w.entries().clone(), f64::EPSILON, EIGEN_MAX_ITERATIONS)
        .ok_or(Error::EigenNonConvergence)?;
    let mut values = Vec::with_capacity(w.dim());
    for &v in eig.eigenvalues.iter() {
        if !v.is_finite() {
            return Err(Error::EigenNonConvergence);
        }
        if v < -PSD_TOLERANCE {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: v });
        }
        values.push(v.max(0.0));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(EigenSpectrum { values })
}

/// `log2 det(I + rho W)` from a Cholesky factorization of `I + rho W`.
pub fn capacity_logdet(w: &GramMatrix, snr: SnrConfig) -> Result<f64> {
    logdet_capacity_of(w.entries(), snr)
}

/// Same as [`capacity_logdet`] for any Hermitian PSD matrix, e.g. the
/// larger of the two Gram products.
pub fn logdet_capacity_of(m: &CMatrix, snr: SnrConfig) -> Result<f64> {
    let n = m.nrows();
    let shifted = CMatrix::identity(n, n) + m.scale(snr.rho());
    let chol = Cholesky::new(shifted).ok_or(Error::NonFiniteCapacity)?;
    let l = chol.l_dirty();
    let ln_det: f64 = (0..n).map(|i| 2.0 * l[(i, i)].re.ln()).sum();
    let bits = ln_det / LN_2;
    if bits.is_finite() {
        Ok(bits)
    } else {
        Err(Error::NonFiniteCapacity)
    }
}

/// `sum_i log2(1 + rho lambda_i)`.
pub fn capacity_eigen(spec: &EigenSpectrum, snr: SnrConfig) -> f64 {
    let rho = snr.rho();
    spec.values.iter().map(|l| (rho * l).ln_1p()).sum::<f64>() / LN_2
}

/// `Trace(W^p)` by repeated multiplication. `p = 0` gives the dimension.
pub fn trace_power(w: &GramMatrix, p: u32) -> f64 {
    if p == 0 {
        return w.dim() as f64;
    }
    trace_powers(w, p)[p as usize - 1]
}

/// `[Trace(W), Trace(W^2), ..., Trace(W^max_p)]`.
pub fn trace_powers(w: &GramMatrix, max_p: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_p as usize);
    if max_p == 0 {
        return out;
    }
    let m = w.entries();
    out.push(w.trace());
    let mut power = m.clone();
    for _ in 1..max_p {
        power = &power * m;
        let tr: C64 = power.trace();
        out.push(tr.re);
    }
    out
}
