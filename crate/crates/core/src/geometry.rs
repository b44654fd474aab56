//! Array geometry and random satellite placement.
//!
//! Satellites sit on the spherical cap above the receiver: elevation
//! `theta` is uniform on `[0, pi/2]` and azimuth `phi` uniform on
//! `[-pi, pi]`, independently per transmitter. The receive array is a
//! uniform linear array along the y-axis, so a satellite only enters the
//! channel through its direction cosine `sin(theta) sin(phi)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Name of the pseudo-random generator, recorded in run metadata.
pub const GENERATOR_NAME: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64 + stream + word_pos = draw << 32";

/// Each draw owns a window of `2^32` 32-bit words in its ChaCha stream.
const DRAW_WINDOW_BITS: u32 = 32;

/// Receive-array geometry plus the number of transmitting satellites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrayConfig {
    n_r: usize,
    n_t: usize,
    spacing: f64,
    wavelength: f64,
}

impl ArrayConfig {
    /// `spacing` and `wavelength` are in meters. A zero spacing is the
    /// collocated limit in which every element sees the same phase.
    pub fn new(n_r: usize, n_t: usize, spacing: f64, wavelength: f64) -> Result<Self> {
        if n_r == 0 || n_t == 0 {
            return Err(Error::InvalidConfig(format!(
                "element counts must be positive (n_r = {n_r}, n_t = {n_t})"
            )));
        }
        if !(spacing.is_finite() && spacing >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "element spacing must be finite and non-negative, got {spacing}"
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "wavelength must be finite and positive, got {wavelength}"
            )));
        }
        let cfg = Self {
            n_r,
            n_t,
            spacing,
            wavelength,
        };
        if !cfg.kd().is_finite() {
            return Err(Error::InvalidConfig("k*d is not finite".into()));
        }
        Ok(cfg)
    }

    /// Half-wavelength spacing, `kd = pi`.
    pub fn half_wavelength(n_r: usize, n_t: usize) -> Result<Self> {
        Self::new(n_r, n_t, 0.5, 1.0)
    }

    /// Spacing expressed in wavelengths.
    pub fn with_spacing_over_lambda(n_r: usize, n_t: usize, ratio: f64) -> Result<Self> {
        Self::new(n_r, n_t, ratio, 1.0)
    }

    /// Geometry with a prescribed electrical spacing `kd` (radians).
    pub fn with_kd(n_r: usize, n_t: usize, kd: f64) -> Result<Self> {
        Self::new(n_r, n_t, kd, TAU)
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }

    /// Electrical spacing `k * d`; the only way geometry enters the model.
    pub fn kd(&self) -> f64 {
        self.wavenumber() * self.spacing
    }

    /// Side length of the Gram matrix, `min(n_r, n_t)`.
    pub fn gram_dim(&self) -> usize {
        self.n_r.min(self.n_t)
    }
}

/// Seed plus stream id. Identical specs replay identical draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Generator positioned at the start of `draw`'s private window.
    ///
    /// Draws never share keystream, so draw `i` is the same value no
    /// matter which worker produces it or in what order.
    pub fn rng_for_draw(&self, draw: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos(u128::from(draw) << DRAW_WINDOW_BITS);
        rng
    }
}

/// One placement of all `n_t` satellites, angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSample {
    theta: Vec<f64>,
    phi: Vec<f64>,
}

impl AngleSample {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if theta.len() != phi.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                actual: phi.len(),
            });
        }
        if theta.is_empty() {
            return Err(Error::InvalidConfig("angle sample is empty".into()));
        }
        if let Some(t) = theta.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
            return Err(Error::InvalidConfig(format!(
                "elevation {t} outside [0, pi/2]"
            )));
        }
        if let Some(p) = phi.iter().find(|p| !(-PI..=PI).contains(*p)) {
            return Err(Error::InvalidConfig(format!("azimuth {p} outside [-pi, pi]")));
        }
        Ok(Self { theta, phi })
    }

    pub fn from_degrees(theta_deg: &[f64], phi_deg: &[f64]) -> Result<Self> {
        Self::new(
            theta_deg.iter().map(|d| d.to_radians()).collect(),
            phi_deg.iter().map(|d| d.to_radians()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// `sin(theta_j) sin(phi_j)`, the projection onto the array axis.
    pub fn direction_cosine(&self, j: usize) -> f64 {
        self.theta[j].sin() * self.phi[j].sin()
    }
}

/// Draws satellite positions for draw index 0 of `rng`.
pub fn sample_angles(cfg: &ArrayConfig, rng: &RngSpec) -> AngleSample {
    sample_angles_at(cfg, rng, 0)
}

/// Draws satellite positions for an arbitrary draw index.
pub fn sample_angles_at(cfg: &ArrayConfig, rng: &RngSpec, draw: u64) -> AngleSample {
    let elevation = Uniform::new_inclusive(0.0, FRAC_PI_2).expect("static bounds");
    let azimuth = Uniform::new_inclusive(-PI, PI).expect("static bounds");
    let mut gen = rng.rng_for_draw(draw);
    let mut theta = Vec::with_capacity(cfg.n_t());
    let mut phi = Vec::with_capacity(cfg.n_t());
    for _ in 0..cfg.n_t() {
        theta.push(elevation.sample(&mut gen));
        phi.push(azimuth.sample(&mut gen));
    }
    AngleSample { theta, phi }
}

/// `sin(theta_j) sin(phi_j) - sin(theta_i) sin(phi_i)`.
pub fn gamma_ij(sample: &AngleSample, i: usize, j: usize) -> Result<f64> {
    let len = sample.len();
    for index in [i, j] {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
    }
    Ok(sample.direction_cosine(j) - sample.direction_cosine(i))
}
