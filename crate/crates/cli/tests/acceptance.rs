//! End-to-end acceptance checks, one test per criterion. Each writes a
//! single `criterion N: PASS|FAIL` line to stderr, bypassing test capture.
//!
//! `ACCEPTANCE_LONG=1` runs criterion 6 with 10^5 samples instead of 10^4.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;

use losmimo::approx::{capacity_series, series_remainder_bound, ApproxSpec};
use losmimo::capacity::{
    capacity_eigen, capacity_logdet, eigen_spectrum, trace_powers, SnrConfig,
};
use losmimo::geometry::{ArrayConfig, RngSpec};
use losmimo::montecarlo::{map_realizations, run_simulation, SimulationPlan};
use losmimo::moments::{
    moment1_analytic, moment2_analytic, moment3_corrected, moment_reports, within_band, MomentReport,
};
use losmimo::specialfn::{bessel_j0, weighted_j0_integral, QuadratureSpec};

const SEED: u64 = 0x5eed_0001;

fn report(criterion: u32, ok: bool, detail: &str) -> bool {
    let line = format!("criterion {criterion}: {} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    ok
}

#[test]
fn criterion_1_unit_trace() {
    let sizes = [1, 2, 4, 8, 16, 64];
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    for n_r in sizes {
        for n_t in sizes {
            let cfg = ArrayConfig::half_wavelength(n_r, n_t).unwrap();
            let n = if n_r * n_t >= 1024 { 200 } else { 1000 };
            let traces = map_realizations(&cfg, &RngSpec::new(SEED, 1), n, |w| Ok(w.trace())).unwrap();
            draws += traces.len();
            worst = traces.iter().fold(worst, |m, t| m.max((t - 1.0).abs()));
        }
    }
    let ok = worst <= 1e-12;
    assert!(report(1, ok, &format!("max |Tr W - 1| = {worst:.2e} over {draws} draws, 36 shapes")));
}

/// All fifteen (shape, kd) cells, 10^6 draws each, moments 1..=3 from the same draws.
fn moment_cells() -> &'static Vec<Vec<MomentReport>> {
    static CELLS: OnceLock<Vec<Vec<MomentReport>>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let mut out = Vec::new();
        for (n_r, n_t) in [(2, 2), (4, 2), (2, 4), (4, 4), (8, 8)] {
            for kd in [FRAC_PI_2, PI, 2.0 * PI] {
                let cfg = ArrayConfig::with_kd(n_r, n_t, kd).unwrap();
                out.push(moment_reports(&cfg, 3, 1_000_000, &RngSpec::new(SEED, 2)).unwrap());
            }
        }
        out
    })
}

fn cell_label(r: &MomentReport) -> String {
    format!("({},{}) kd={:.4}", r.cfg.n_r(), r.cfg.n_t(), r.kd)
}

#[test]
fn criterion_2_second_moment() {
    let mut misses = Vec::new();
    let mut worst_sigma: f64 = 0.0;
    for cell in moment_cells() {
        let r = &cell[1];
        let analytic = moment2_analytic(&r.cfg);
        worst_sigma = worst_sigma.max((analytic - r.empirical_mean).abs() / r.empirical_stderr);
        if !within_band(analytic, r.empirical_mean, r.empirical_stderr) {
            misses.push(cell_label(r));
        }
    }
    let ok = misses.is_empty();
    let detail = format!("15 cells x 10^6 draws, worst deviation {worst_sigma:.2} SE, outside band: {misses:?}");
    assert!(report(2, ok, &detail));
}

/// The flag must track the band exactly, and the rank-1 cells must come out
/// as exactly 1. The published closed form is not 1 when `n_t = 1`, so this
/// criterion is reported as failing; the corrected form is checked as well
/// and must hold.
#[test]
fn criterion_3_third_moment() {
    let mut flag_consistent = true;
    let mut flagged = Vec::new();
    let mut corrected_misses = Vec::new();
    for cell in moment_cells() {
        let r = &cell[2];
        let analytic = r.analytic.unwrap();
        flag_consistent &= r.verified == within_band(analytic, r.empirical_mean, r.empirical_stderr);
        if !r.verified {
            flagged.push(cell_label(r));
        }
        if !within_band(moment3_corrected(&r.cfg), r.empirical_mean, r.empirical_stderr) {
            corrected_misses.push(cell_label(r));
        }
    }

    let mut published_rank1 = Vec::new();
    let mut corrected_rank1 = true;
    for (n_r, n_t) in [(1, 1), (1, 2), (1, 4), (1, 8), (2, 1), (4, 1), (8, 1)] {
        for kd in [FRAC_PI_2, PI, 2.0 * PI] {
            let cfg = ArrayConfig::with_kd(n_r, n_t, kd).unwrap();
            let r = &moment_reports(&cfg, 3, 1000, &RngSpec::new(SEED, 3)).unwrap()[2];
            flag_consistent &= r.verified == within_band(r.analytic.unwrap(), r.empirical_mean, r.empirical_stderr);
            corrected_rank1 &= (moment3_corrected(&cfg) - 1.0).abs() <= 1e-10 && (r.empirical_mean - 1.0).abs() <= 1e-10;
            let published = r.analytic.unwrap();
            if (published - 1.0).abs() > 1e-10 {
                published_rank1.push(format!("({n_r},{n_t}) kd={kd:.4} -> {published:.6}"));
            }
        }
    }

    let ok = flag_consistent && published_rank1.is_empty() && corrected_rank1 && corrected_misses.is_empty();
    let detail = format!(
        "flag consistent: {flag_consistent}; flagged cells: {}/15; published rank-1 cells not equal to 1: {published_rank1:?}; \
         corrected form exact on rank-1: {corrected_rank1}, outside band: {corrected_misses:?}",
        flagged.len()
    );
    report(3, ok, &detail);
    // The parts that are attainable must not regress.
    assert!(flag_consistent);
    assert!(corrected_rank1);
    assert!(corrected_misses.is_empty(), "{corrected_misses:?}");
}

#[test]
fn criterion_4_formulation_equivalence() {
    let snr = SnrConfig::linear(1.0).unwrap();
    let mut worst: f64 = 0.0;
    for (n_r, n_t) in [(4, 8), (8, 4), (8, 8)] {
        let cfg = ArrayConfig::half_wavelength(n_r, n_t).unwrap();
        let errs = map_realizations(&cfg, &RngSpec::new(SEED, 4), 1000, |w| {
            let spectrum = eigen_spectrum(w)?;
            let mut err = (capacity_logdet(w, snr)? - capacity_eigen(&spectrum, snr)).abs();
            for (p, tr) in trace_powers(w, 3).into_iter().enumerate() {
                err = err.max((tr - spectrum.power_sum(p as i32 + 1)).abs());
            }
            Ok(err)
        })
        .unwrap();
        worst = errs.into_iter().fold(worst, f64::max);
    }
    let ok = worst <= 1e-9;
    assert!(report(4, ok, &format!("max discrepancy {worst:.2e} over 3 x 10^3 draws")));
}

#[test]
fn criterion_5_bessel_identity() {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for a in [0.1, 0.5, 1.0, PI, 5.0, 10.0, 20.0] {
        let lhs = weighted_j0_integral(a, &spec).unwrap();
        worst = worst.max((lhs - FRAC_PI_2 * bessel_j0(a / 2.0).powi(2)).abs());
    }
    let ok = worst <= 1e-8;
    assert!(report(5, ok, &format!("max abs error {worst:.2e} over 7 arguments")));
}

#[test]
fn criterion_6_series_against_monte_carlo() {
    let long = std::env::var_os("ACCEPTANCE_LONG").is_some();
    let samples = if long { 100_000 } else { 10_000 };
    let rho_grid = vec![0.1, 0.25, 0.5, 0.75, 1.0];
    let cfg = ArrayConfig::with_kd(64, 64, PI).unwrap();
    let plan = SimulationPlan::new(cfg, rho_grid, samples, RngSpec::new(SEED, 6), vec![])
        .unwrap()
        .with_trace_moments(4);
    let run = run_simulation(&plan).unwrap();
    let moments = [
        moment1_analytic(&cfg),
        moment2_analytic(&cfg),
        run.trace_moment(3).unwrap().0,
        run.trace_moment(4).unwrap().0,
    ];

    let mut ok = true;
    let mut parts = Vec::new();
    for est in run.ergodic() {
        let spec = ApproxSpec::new(3, est.rho, true).unwrap();
        let series = capacity_series(&moments, &spec).unwrap().value;
        let bound = series_remainder_bound(&moments, &spec).unwrap();
        let slack = 3.0 * est.stderr + bound;
        let gap = (series - est.mean).abs();
        ok &= gap <= slack;
        parts.push(format!("rho={}: |series - MC| = {gap:.3e} <= {slack:.3e}", est.rho));
    }
    let detail = format!("64x64, {samples} draws; {}", parts.join("; "));
    assert!(report(6, ok, &detail));
}

fn simulate(workers: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_losmimo"))
        .args([
            "simulate", "--nr", "16", "--nt", "8", "--samples", "3000", "--seed", "11",
            "--snr-db", "-10:5:10", "--outage", "0.05,0.5", "--workers", workers,
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn criterion_7_determinism() {
    let first = simulate("1");
    let again = simulate("1");
    let parallel = simulate("4");
    let ok = first == again && first == parallel && !first.is_empty();
    assert!(report(7, ok, &format!("{} output bytes, runs x2 at 1 worker and x1 at 4 workers", first.len())));
}

#[test]
fn criterion_8_degenerate_limits() {
    let rho_grid = vec![0.1, 0.5, 1.0, 4.0];
    let mut worst: f64 = 0.0;
    for (n_r, n_t) in [(1, 1), (4, 4), (8, 2), (2, 8), (16, 16)] {
        let cfg = ArrayConfig::new(n_r, n_t, 0.0, 1.0).unwrap();
        let plan = SimulationPlan::new(cfg, rho_grid.clone(), 200, RngSpec::new(SEED, 8), vec![]).unwrap();
        let run = run_simulation(&plan).unwrap();
        for (i, &rho) in rho_grid.iter().enumerate() {
            let want = rho.ln_1p() / std::f64::consts::LN_2;
            worst = run.capacities(i).iter().fold(worst, |m, c| m.max((c - want).abs()));
        }
    }

    let cfg = ArrayConfig::half_wavelength(1, 1).unwrap();
    let plan = SimulationPlan::new(cfg, rho_grid.clone(), 500, RngSpec::new(SEED, 8), vec![]).unwrap();
    let siso_stderr = run_simulation(&plan)
        .unwrap()
        .ergodic()
        .iter()
        .fold(0.0f64, |m, e| m.max(e.stderr));

    let ok = worst <= 1e-10 && siso_stderr <= 1e-10;
    let detail = format!("d=0 max |C - log2(1+rho)| = {worst:.2e}; 1x1 max stderr = {siso_stderr:.2e}");
    assert!(report(8, ok, &detail));
}
