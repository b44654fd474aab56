//! Line-of-sight channel matrix and its Gram matrix.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::geometry::{AngleSample, ArrayConfig};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Array factor `sum_m gains[m] * exp(i k m d sin(theta) sin(phi))`.
pub fn array_factor(cfg: &ArrayConfig, gains: &[C64], theta: f64, phi: f64) -> Result<C64> {
    if gains.len() != cfg.n_r() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_r(),
            actual: gains.len(),
        });
    }
    let step = cfg.kd() * theta.sin() * phi.sin();
    Ok(gains
        .iter()
        .enumerate()
        .map(|(m, g)| g * C64::cis(step * m as f64))
        .sum())
}

/// The `n_r x n_t` matrix whose column `j` is the steering vector of
/// satellite `j`, scaled by `1/sqrt(n_t n_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: CMatrix,
    cfg: ArrayConfig,
}

impl ChannelMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn cfg(&self) -> &ArrayConfig {
        &self.cfg
    }

    pub fn normalization(&self) -> f64 {
        normalization(&self.cfg)
    }
}

fn normalization(cfg: &ArrayConfig) -> f64 {
    1.0 / ((cfg.n_t() * cfg.n_r()) as f64).sqrt()
}

pub fn build_channel(cfg: &ArrayConfig, sample: &AngleSample) -> Result<ChannelMatrix> {
    if sample.len() != cfg.n_t() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_t(),
            actual: sample.len(),
        });
    }
    let scale = normalization(cfg);
    let kd = cfg.kd();
    let steps: Vec<f64> = (0..cfg.n_t())
        .map(|j| kd * sample.direction_cosine(j))
        .collect();
    let entries = CMatrix::from_fn(cfg.n_r(), cfg.n_t(), |m, j| {
        C64::from_polar(scale, steps[j] * m as f64)
    });
    Ok(ChannelMatrix {
        entries,
        cfg: *cfg,
    })
}

/// Which product the Gram matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSide {
    /// `H^H H`, used when `n_t <= n_r`.
    HermitianLeft,
    /// `H H^H`, used when `n_r < n_t`.
    HermitianRight,
}

/// `W`, the smaller of `H^H H` and `H H^H`, stored exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
    side: GramSide,
}

impl GramMatrix {
    /// Wraps an arbitrary square matrix, symmetrizing it. Used for
    /// synthetic spectra; channel-derived matrices come from [`gram`].
    pub fn from_hermitian(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                actual: entries.ncols(),
            });
        }
        Ok(Self {
            entries: symmetrize(entries),
            side: GramSide::HermitianLeft,
        })
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn side(&self) -> GramSide {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }
}

fn symmetrize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).unscale(2.0)
}

pub fn gram(h: &ChannelMatrix) -> GramMatrix {
    let (entries, side) = if h.cfg.n_t() <= h.cfg.n_r() {
        (h.entries.ad_mul(&h.entries), GramSide::HermitianLeft)
    } else {
        (&h.entries * h.entries.adjoint(), GramSide::HermitianRight)
    };
    GramMatrix {
        entries: symmetrize(entries),
        side,
    }
}

/// Both `H^H H` and `H H^H`, regardless of which is smaller.
pub fn gram_both(h: &ChannelMatrix) -> (CMatrix, CMatrix) {
    (
        symmetrize(h.entries.ad_mul(&h.entries)),
        symmetrize(&h.entries * h.entries.adjoint()),
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;
    use crate::geometry::{gamma_ij, sample_angles, RngSpec};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn array_factor_examples() {
        let cfg = ArrayConfig::half_wavelength(1, 1).unwrap();
        let g = C64::new(0.3, -0.7);
        assert_eq!(array_factor(&cfg, &[g], 0.4, 1.1).unwrap(), g);

        let cfg = ArrayConfig::half_wavelength(5, 1).unwrap();
        let af = array_factor(&cfg, &[one(); 5], 0.0, 0.7).unwrap();
        assert!((af - C64::new(5.0, 0.0)).norm() < 1e-15);

        let cfg = ArrayConfig::with_kd(2, 1, PI).unwrap();
        let af = array_factor(&cfg, &[one(); 2], FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(af.norm() < 1e-15);

        assert!(matches!(
            array_factor(&cfg, &[one(); 3], 0.0, 0.0),
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn array_factor_bounded_by_element_count() {
        let cfg = ArrayConfig::half_wavelength(7, 1).unwrap();
        for i in 0..50 {
            let t = i as f64 * 0.031;
            let p = -PI + i as f64 * 0.12;
            assert!(array_factor(&cfg, &[one(); 7], t, p).unwrap().norm() <= 7.0 + 1e-12);
        }
    }

    #[test]
    fn trivial_channels() {
        let cfg = ArrayConfig::half_wavelength(1, 1).unwrap();
        let s = AngleSample::new(vec![0.3], vec![0.2]).unwrap();
        let h = build_channel(&cfg, &s).unwrap();
        assert_eq!(h.entries()[(0, 0)], one());

        let cfg = ArrayConfig::half_wavelength(2, 1).unwrap();
        let s = AngleSample::new(vec![0.0], vec![1.0]).unwrap();
        let h = build_channel(&cfg, &s).unwrap();
        let r = 1.0 / 2f64.sqrt();
        for m in 0..2 {
            assert!((h.entries()[(m, 0)] - C64::new(r, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn entries_match_direct_formula() {
        let cfg = ArrayConfig::half_wavelength(3, 2).unwrap();
        let s = sample_angles(&cfg, &RngSpec::new(11, 0));
        let h = build_channel(&cfg, &s).unwrap();
        let k = 2.0 * PI / cfg.wavelength();
        for m in 0..3 {
            for j in 0..2 {
                let phase = k * m as f64 * cfg.spacing() * s.theta()[j].sin() * s.phi()[j].sin();
                let want = C64::new(phase.cos(), phase.sin()) / 6f64.sqrt();
                assert!((h.entries()[(m, j)] - want).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn column_norms() {
        let cfg = ArrayConfig::half_wavelength(5, 3).unwrap();
        let h = build_channel(&cfg, &sample_angles(&cfg, &RngSpec::new(3, 1))).unwrap();
        for col in h.entries().column_iter() {
            assert!((col.norm_squared() - 1.0 / 3.0).abs() < 1e-15);
            for z in col.iter() {
                assert!((z.norm() - h.normalization()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let cfg = ArrayConfig::half_wavelength(3, 2).unwrap();
        let s = AngleSample::new(vec![0.1], vec![0.1]).unwrap();
        assert!(build_channel(&cfg, &s).is_err());
    }

    #[test]
    fn gram_entries_match_closed_form() {
        let cfg = ArrayConfig::half_wavelength(6, 4).unwrap();
        let s = sample_angles(&cfg, &RngSpec::new(8, 0));
        let w = gram(&build_channel(&cfg, &s).unwrap());
        assert_eq!(w.side(), GramSide::HermitianLeft);
        assert_eq!(w.dim(), 4);
        for i in 0..4 {
            assert!((w.entries()[(i, i)] - C64::new(0.25, 0.0)).norm() < 1e-14);
            for j in 0..4 {
                let g = gamma_ij(&s, i, j).unwrap();
                let sum: C64 = (0..6).map(|m| C64::cis(cfg.kd() * m as f64 * g)).sum();
                let want = sum / 24.0;
                assert!((w.entries()[(i, j)] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn gram_side_selection() {
        let cfg = ArrayConfig::half_wavelength(1, 4).unwrap();
        let w = gram(&build_channel(&cfg, &sample_angles(&cfg, &RngSpec::new(1, 1))).unwrap());
        assert_eq!(w.side(), GramSide::HermitianRight);
        assert_eq!(w.dim(), 1);
        assert!((w.entries()[(0, 0)] - one()).norm() < 1e-15);

        let cfg = ArrayConfig::half_wavelength(1, 1).unwrap();
        let w = gram(&build_channel(&cfg, &sample_angles(&cfg, &RngSpec::new(1, 1))).unwrap());
        assert_eq!(w.side(), GramSide::HermitianLeft);
        assert_eq!(w.entries()[(0, 0)], one());
    }

    #[test]
    fn gram_is_exactly_hermitian_with_unit_trace() {
        for &(n_r, n_t) in &[(1, 1), (2, 8), (8, 2), (16, 16), (4, 16)] {
            let cfg = ArrayConfig::half_wavelength(n_r, n_t).unwrap();
            for draw in 0..200 {
                let s = crate::geometry::sample_angles_at(&cfg, &RngSpec::new(17, 0), draw);
                let w = gram(&build_channel(&cfg, &s).unwrap());
                assert_eq!(w.entries(), &w.entries().adjoint());
                assert!((w.trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn from_hermitian_rejects_rectangular() {
        assert!(GramMatrix::from_hermitian(CMatrix::zeros(2, 3)).is_err());
    }
}
