//! Series approximation against Monte Carlo ergodic capacity.

use std::f64::consts::PI;

use losmimo::approx::{capacity_series, series_remainder_bound, ApproxSpec};
use losmimo::geometry::{ArrayConfig, RngSpec};
use losmimo::moments::{moment1_analytic, moment2_analytic, moment3_corrected};
use losmimo::montecarlo::{run_simulation, SimulationPlan};

#[test]
fn three_term_series_tracks_monte_carlo_at_4x4() {
    let cfg = ArrayConfig::with_kd(4, 4, PI).unwrap();
    let plan = SimulationPlan::new(cfg, vec![0.5], 100_000, RngSpec::new(2024, 0), vec![])
        .unwrap()
        .with_trace_moments(4);
    let run = run_simulation(&plan).unwrap();
    let est = &run.ergodic()[0];

    let (m4, _) = run.trace_moment(4).unwrap();
    let moments = [
        moment1_analytic(&cfg),
        moment2_analytic(&cfg),
        moment3_corrected(&cfg),
        m4,
    ];
    let spec = ApproxSpec::new(3, 0.5, true).unwrap();
    let series = capacity_series(&moments, &spec).unwrap().value;
    let bound = series_remainder_bound(&moments, &spec).unwrap();
    let gap = (series - est.mean).abs();
    assert!(
        gap <= 3.0 * est.stderr + bound,
        "series {series} mc {} +- {} bound {bound}",
        est.mean,
        est.stderr
    );
}

#[test]
fn remainder_bound_covers_next_term_at_high_snr() {
    let cfg = ArrayConfig::with_kd(4, 4, PI).unwrap();
    let plan = SimulationPlan::new(cfg, vec![0.9], 20_000, RngSpec::new(2024, 1), vec![])
        .unwrap()
        .with_trace_moments(4);
    let run = run_simulation(&plan).unwrap();
    let moments: Vec<f64> = (1..=4).map(|k| run.trace_moment(k).unwrap().0).collect();
    let k3 = ApproxSpec::new(3, 0.9, true).unwrap();
    let k4 = ApproxSpec::new(4, 0.9, true).unwrap();
    let step = (capacity_series(&moments, &k4).unwrap().value - capacity_series(&moments, &k3).unwrap().value).abs();
    // the bound is the first omitted term, so the two agree to rounding
    let bound = series_remainder_bound(&moments, &k3).unwrap();
    assert!(bound >= step * (1.0 - 1e-12), "bound {bound} step {step}");
}
