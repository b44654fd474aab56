//! `simulate` and `moments`.

use losmimo::approx::{capacity_series, series_remainder_bound, ApproxSpec};
use losmimo::capacity::linear_to_db;
use losmimo::geometry::{RngSpec, GENERATOR_NAME};
use losmimo::moments::{moment1_analytic, moment2_analytic, moment_reports};
use losmimo::montecarlo::{run_simulation, SimulationPlan};

use crate::config::{RunConfig, SnrUnit};
use crate::output::{Cell, Table};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stream id used by every command; runs differ only by seed.
const STREAM_ID: u64 = 0;

/// Runs `f` on a dedicated pool of `workers` threads, or on the global
/// pool when unset. Results do not depend on the choice.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn common_metadata(table: &mut Table, command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let array = cfg.array()?;
    table.meta("command", command);
    table.meta("version", VERSION);
    table.meta("generator", GENERATOR_NAME);
    table.meta("seed", cfg.seed);
    table.meta("stream_id", STREAM_ID);
    table.meta("n_r", array.n_r() as u64);
    table.meta("n_t", array.n_t() as u64);
    table.meta("spacing_over_lambda", cfg.spacing_over_lambda);
    table.meta("kd", array.kd());
    table.meta("samples", cfg.samples);
    Ok(())
}

fn level_column(q: f64) -> String {
    format!("outage_q{q}")
}

pub fn simulate_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let array = cfg.array()?;
    let terms = cfg.terms;
    let plan = SimulationPlan::new(
        array,
        cfg.snr.rho.clone(),
        cfg.samples,
        RngSpec::new(cfg.seed, STREAM_ID),
        cfg.outage.clone(),
    )?
    .with_trace_moments(terms as u32 + 1);
    let run = with_workers(cfg.workers, || run_simulation(&plan))??;

    // m1 and m2 in closed form, higher orders from the same draws
    let mut moments = vec![moment1_analytic(&array), moment2_analytic(&array)];
    for k in 3..=terms as u32 + 1 {
        let (mean, _) = run.trace_moment(k).expect("collected up to terms + 1");
        moments.push(mean);
    }

    let mut columns: Vec<String> = [
        "rho",
        "snr_db",
        "ergodic_mean",
        "ergodic_stderr",
        "series",
        "remainder_bound",
        "series_converges",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    columns.extend(cfg.outage.iter().map(|&q| level_column(q)));
    columns.push("samples_digest".into());

    let mut table = Table {
        metadata: Vec::new(),
        columns,
        rows: Vec::new(),
    };
    common_metadata(&mut table, "simulate", cfg)?;
    table.meta(
        "snr_input",
        match cfg.snr.unit {
            SnrUnit::Db => "dB",
            SnrUnit::Linear => "linear",
        },
    );
    table.meta("series_terms", terms as u64);
    table.meta("series_moments", "k=1,2 closed form; k>=3 empirical from the same draws");
    table.meta("strict_convergence", cfg.strict_convergence);
    table.meta("outage_rule", "lower order statistic ceil(q n)");

    let outage = run.outage();
    let mut warned = false;
    for (index, est) in run.ergodic().into_iter().enumerate() {
        let spec = ApproxSpec::new(terms, est.rho, cfg.strict_convergence)?;
        let series = capacity_series(&moments, &spec)?;
        if let Some(w) = series.warning {
            if !warned {
                eprintln!("warning: {w}");
                warned = true;
            }
        }
        let bound = series_remainder_bound(&moments, &spec).ok();
        let mut row = vec![
            Cell::Num(est.rho),
            Cell::Num(linear_to_db(est.rho)),
            Cell::Num(est.mean),
            Cell::Num(est.stderr),
            Cell::Num(series.value),
            bound.into(),
            Cell::Bool(series.warning.is_none()),
        ];
        let per_rho = cfg.outage.len();
        row.extend(
            outage[index * per_rho..(index + 1) * per_rho]
                .iter()
                .map(|o| Cell::Num(o.capacity_at_q)),
        );
        row.push(est.samples_digest.map_or(Cell::Empty, Cell::Text));
        table.push(row);
    }
    Ok(table)
}

pub fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(simulate_table(cfg)?.render(cfg.format))
}

pub fn moments_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let array = cfg.array()?;
    let rng = RngSpec::new(cfg.seed, STREAM_ID);
    let reports = with_workers(cfg.workers, || moment_reports(&array, 3, cfg.samples, &rng))??;
    let mut table = Table::new(&[
        "k",
        "analytic",
        "empirical_mean",
        "empirical_stderr",
        "verified",
        "corrected",
    ]);
    common_metadata(&mut table, "moments", cfg)?;
    table.meta("agreement_band", "3 standard errors + 1e-12");
    for r in reports {
        table.push(vec![
            Cell::Int(u64::from(r.k)),
            r.analytic.into(),
            Cell::Num(r.empirical_mean),
            Cell::Num(r.empirical_stderr),
            Cell::Bool(r.verified),
            r.corrected.into(),
        ]);
    }
    Ok(table)
}

pub fn moments(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(moments_table(cfg)?.render(cfg.format))
}
