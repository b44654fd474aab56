//! Ergodic and outage capacity over random satellite placements.
//!
//! Draw `i` of a run is a pure function of `(RngSpec, i)`, realizations
//! are collected in draw order, and every reduction goes through
//! [`crate::stats`]. The numbers are therefore bit-identical for any
//! rayon pool size.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::capacity::{capacity_eigen, eigen_spectrum, SnrConfig};
use crate::channel::{build_channel, gram, GramMatrix};
use crate::error::{Error, Result};
use crate::geometry::{sample_angles_at, ArrayConfig, RngSpec};
use crate::stats::{lower_quantile, mean_stderr};

/// Applies `f` to the Gram matrix of draws `0..n_samples`, in parallel,
/// returning results in draw order.
pub fn map_realizations<T, F>(cfg: &ArrayConfig, rng: &RngSpec, n_samples: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&GramMatrix) -> Result<T> + Sync,
{
    (0..n_samples)
        .into_par_iter()
        .map(|draw| {
            let sample = sample_angles_at(cfg, rng, draw);
            let w = gram(&build_channel(cfg, &sample)?);
            f(&w).map_err(|e| Error::Realization {
                draw,
                source: Box::new(e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    cfg: ArrayConfig,
    rho_grid: Vec<f64>,
    n_samples: u64,
    rng: RngSpec,
    outage_levels: Vec<f64>,
    trace_moments: u32,
}

impl SimulationPlan {
    pub fn new(
        cfg: ArrayConfig,
        rho_grid: Vec<f64>,
        n_samples: u64,
        rng: RngSpec,
        outage_levels: Vec<f64>,
    ) -> Result<Self> {
        if rho_grid.is_empty() {
            return Err(Error::InvalidConfig("SNR grid is empty".into()));
        }
        for &rho in &rho_grid {
            SnrConfig::linear(rho)?;
        }
        if rho_grid.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InvalidConfig("SNR grid must be sorted ascending".into()));
        }
        if n_samples < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        if let Some(q) = outage_levels.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
            return Err(Error::InvalidConfig(format!("outage level {q} outside (0, 1)")));
        }
        Ok(Self {
            cfg,
            rho_grid,
            n_samples,
            rng,
            outage_levels,
            trace_moments: 0,
        })
    }

    /// Also collect empirical `E[Trace(W^k)]` for `k = 1..=max_k`.
    pub fn with_trace_moments(mut self, max_k: u32) -> Self {
        self.trace_moments = max_k;
        self
    }

    pub fn cfg(&self) -> &ArrayConfig {
        &self.cfg
    }

    pub fn rho_grid(&self) -> &[f64] {
        &self.rho_grid
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn rng(&self) -> &RngSpec {
        &self.rng
    }

    pub fn outage_levels(&self) -> &[f64] {
        &self.outage_levels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub rho: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    /// SHA-256 over the little-endian per-realization capacities.
    pub samples_digest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageEstimate {
    pub rho: f64,
    pub level: f64,
    pub capacity_at_q: f64,
}

/// Per-realization results of one plan.
#[derive(Debug, Clone)]
pub struct SimulationRun {
    plan: SimulationPlan,
    /// `capacities[r][i]`: draw `i` at `rho_grid[r]`, bits/s/Hz.
    capacities: Vec<Vec<f64>>,
    /// `trace_moments[k - 1][i]`: `Trace(W^k)` of draw `i`.
    trace_moments: Vec<Vec<f64>>,
}

pub fn run_simulation(plan: &SimulationPlan) -> Result<SimulationRun> {
    let snrs: Vec<SnrConfig> = plan
        .rho_grid
        .iter()
        .map(|&rho| SnrConfig::linear(rho))
        .collect::<Result<_>>()?;
    let max_k = plan.trace_moments as i32;
    let per_draw = map_realizations(&plan.cfg, &plan.rng, plan.n_samples, |w| {
        let spectrum = eigen_spectrum(w)?;
        let caps: Vec<f64> = snrs.iter().map(|&s| capacity_eigen(&spectrum, s)).collect();
        let moments: Vec<f64> = (1..=max_k).map(|k| spectrum.power_sum(k)).collect();
        Ok((caps, moments))
    })?;

    let n = per_draw.len();
    let mut capacities = vec![Vec::with_capacity(n); snrs.len()];
    let mut trace_moments = vec![Vec::with_capacity(n); max_k as usize];
    for (caps, moments) in per_draw {
        for (column, c) in capacities.iter_mut().zip(caps) {
            column.push(c);
        }
        for (column, m) in trace_moments.iter_mut().zip(moments) {
            column.push(m);
        }
    }
    Ok(SimulationRun {
        plan: plan.clone(),
        capacities,
        trace_moments,
    })
}

impl SimulationRun {
    pub fn plan(&self) -> &SimulationPlan {
        &self.plan
    }

    /// Capacities of every draw at `rho_grid[index]`.
    pub fn capacities(&self, index: usize) -> &[f64] {
        &self.capacities[index]
    }

    pub fn ergodic(&self) -> Vec<CapacityEstimate> {
        self.plan
            .rho_grid
            .iter()
            .zip(&self.capacities)
            .map(|(&rho, caps)| {
                let (mean, stderr) = mean_stderr(caps);
                CapacityEstimate {
                    rho,
                    mean,
                    stderr,
                    n: caps.len() as u64,
                    samples_digest: Some(digest(caps)),
                }
            })
            .collect()
    }

    pub fn outage(&self) -> Vec<OutageEstimate> {
        let mut out = Vec::with_capacity(self.capacities.len() * self.plan.outage_levels.len());
        for (&rho, caps) in self.plan.rho_grid.iter().zip(&self.capacities) {
            let mut sorted = caps.clone();
            sorted.sort_by(f64::total_cmp);
            for &level in &self.plan.outage_levels {
                out.push(OutageEstimate {
                    rho,
                    level,
                    capacity_at_q: lower_quantile(&sorted, level),
                });
            }
        }
        out
    }

    /// Empirical mean and standard error of `Trace(W^k)`, if collected.
    pub fn trace_moment(&self, k: u32) -> Option<(f64, f64)> {
        let column = self.trace_moments.get((k as usize).checked_sub(1)?)?;
        Some(mean_stderr(column))
    }
}

fn digest(values: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.to_le_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn ergodic_capacity(plan: &SimulationPlan) -> Result<Vec<CapacityEstimate>> {
    Ok(run_simulation(plan)?.ergodic())
}

pub fn outage_capacity(plan: &SimulationPlan) -> Result<Vec<OutageEstimate>> {
    if plan.outage_levels.is_empty() {
        return Err(Error::InvalidConfig("no outage levels requested".into()));
    }
    Ok(run_simulation(plan)?.outage())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(n_r: usize, n_t: usize, rho: Vec<f64>, n: u64, levels: Vec<f64>) -> SimulationPlan {
        let cfg = ArrayConfig::half_wavelength(n_r, n_t).unwrap();
        SimulationPlan::new(cfg, rho, n, RngSpec::new(2718, 0), levels).unwrap()
    }

    #[test]
    fn plan_validation() {
        let cfg = ArrayConfig::half_wavelength(2, 2).unwrap();
        let rng = RngSpec::new(0, 0);
        assert!(SimulationPlan::new(cfg, vec![], 10, rng, vec![]).is_err());
        assert!(SimulationPlan::new(cfg, vec![1.0, 0.5], 10, rng, vec![]).is_err());
        assert!(SimulationPlan::new(cfg, vec![-1.0], 10, rng, vec![]).is_err());
        assert!(SimulationPlan::new(cfg, vec![1.0], 1, rng, vec![]).is_err());
        assert!(SimulationPlan::new(cfg, vec![1.0], 10, rng, vec![1.0]).is_err());
        assert!(SimulationPlan::new(cfg, vec![1.0], 10, rng, vec![0.0]).is_err());
    }

    #[test]
    fn siso_is_deterministic() {
        let p = plan(1, 1, vec![0.0, 0.5, 1.0, 3.0], 50, vec![0.1, 0.5, 0.9]);
        let run = run_simulation(&p).unwrap();
        for e in run.ergodic() {
            assert!((e.mean - (1.0 + e.rho).log2()).abs() < 1e-15);
            assert_eq!(e.stderr, 0.0);
            assert_eq!(e.n, 50);
        }
        for o in run.outage() {
            assert!((o.capacity_at_q - (1.0 + o.rho).log2()).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_snr_gives_zero() {
        let est = ergodic_capacity(&plan(4, 4, vec![0.0], 100, vec![])).unwrap();
        assert_eq!(est[0].mean, 0.0);
        assert_eq!(est[0].stderr, 0.0);
    }

    #[test]
    fn outage_orderings() {
        let p = plan(4, 4, vec![0.25, 0.5, 1.0], 2000, vec![0.01, 0.1, 0.5, 0.9, 0.99]);
        let run = run_simulation(&p).unwrap();
        let outage = run.outage();
        let at = |rho: f64, q: f64| {
            outage
                .iter()
                .find(|o| o.rho == rho && o.level == q)
                .unwrap()
                .capacity_at_q
        };
        for rho in [0.25, 0.5, 1.0] {
            assert!(at(rho, 0.1) <= at(rho, 0.9));
            let caps = &run.capacities[p.rho_grid().iter().position(|&r| r == rho).unwrap()];
            let lo = caps.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = caps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo <= at(rho, 0.5) && at(rho, 0.5) <= hi);
        }
        for q in [0.01, 0.1, 0.5, 0.9, 0.99] {
            assert!(at(0.25, q) <= at(0.5, q) && at(0.5, q) <= at(1.0, q));
        }
        for e in run.ergodic() {
            assert!(at(e.rho, 0.01) <= e.mean && e.mean <= at(e.rho, 0.99));
        }
    }

    #[test]
    fn identical_across_pool_sizes() {
        let p = plan(6, 5, vec![0.1, 1.0, 10.0], 3000, vec![0.5]).with_trace_moments(3);
        let run_with = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_simulation(&p).unwrap())
        };
        let a = run_with(1);
        let b = run_with(4);
        assert_eq!(a.ergodic(), b.ergodic());
        assert_eq!(a.outage(), b.outage());
        assert_eq!(a.trace_moment(3), b.trace_moment(3));
    }

    #[test]
    fn stderr_shrinks_with_sample_count() {
        let cfg = ArrayConfig::half_wavelength(4, 4).unwrap();
        let mut ratios = Vec::new();
        for rep in 0..10 {
            let small = SimulationPlan::new(cfg, vec![1.0], 500, RngSpec::new(rep, 0), vec![]).unwrap();
            let large = SimulationPlan::new(cfg, vec![1.0], 2000, RngSpec::new(rep, 1), vec![]).unwrap();
            let s = ergodic_capacity(&small).unwrap()[0].stderr;
            let l = ergodic_capacity(&large).unwrap()[0].stderr;
            ratios.push(s / l);
        }
        for r in ratios {
            assert!((1.0..=4.0).contains(&r), "ratio {r}");
        }
    }

    #[test]
    fn trace_moment_collection() {
        let run = run_simulation(&plan(3, 3, vec![1.0], 100, vec![]).with_trace_moments(2)).unwrap();
        let (m1, se1) = run.trace_moment(1).unwrap();
        assert!((m1 - 1.0).abs() < 1e-12 && se1 < 1e-12);
        assert!(run.trace_moment(3).is_none());
        assert!(run.trace_moment(0).is_none());
    }

    #[test]
    fn outage_requires_levels() {
        assert!(outage_capacity(&plan(2, 2, vec![1.0], 10, vec![])).is_err());
    }
}
