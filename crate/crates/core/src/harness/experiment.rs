use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, GridPoint};
use super::record::ExperimentRecord;
use crate::analysis::{expected_good_count, expected_solutions_log2, good_variables};
use crate::distributions::{sample_p, sample_r, sample_r_plus_with_fallback, DEFAULT_MAX_ATTEMPTS};
use crate::error::{Error, Result};
use crate::formula::eval_formula;
use crate::oracle::count_solutions;
use crate::solvers::{
    planted_good_fraction, ppz_success_counts, solve_random_ksat, BudgetPolicy, PpzOptions,
    PpzPlan, Strategy,
};
use crate::stream::RandomStream;

/// Environment variable that fixes the rayon worker count for experiments.
pub const WORKERS_ENV: &str = "KSAT_WORKERS";

/// Runs `f` on a pool sized by [`WORKERS_ENV`], or on the global pool when unset.
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
                Error::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer"))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

/// Stream for instance `instance` at grid point `point`.
pub fn instance_stream(master_seed: u64, point: usize, instance: u64) -> RandomStream {
    RandomStream::new(master_seed, point as u64).derive(instance)
}

struct Ctx<'a> {
    id: &'static str,
    point: &'a GridPoint,
    policy: BudgetPolicy,
    trials: u64,
    timing: bool,
}

impl Ctx<'_> {
    fn row(&self, instance: Option<(u64, &RandomStream)>, quantity: &str) -> ExperimentRecord {
        ExperimentRecord {
            experiment: self.id.to_string(),
            point: self.point.index,
            n: self.point.n,
            k: self.point.k,
            m: self.point.m,
            grid: self.point.grid_value,
            instance: instance.map(|(i, _)| i),
            seed: instance.map(|(_, s)| s.seed),
            quantity: quantity.to_string(),
            value: None,
            trials_used: None,
            elapsed_ms: None,
            error: None,
        }
    }
}

fn with_value(mut r: ExperimentRecord, v: f64) -> ExperimentRecord {
    r.value = Some(v);
    r
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn good_fraction_instance(
    ctx: &Ctx<'_>,
    stream: &RandomStream,
) -> Result<Vec<(&'static str, f64, Option<u64>)>> {
    let p = ctx.point;
    let inst = sample_p(p.n, p.k, p.m, &mut stream.derive(0).rng())?;
    let report = good_variables(&inst.formula, &inst.sigma);
    Ok(vec![
        ("good_count", report.count() as f64, None),
        ("good_fraction", report.fraction(), None),
    ])
}

fn ppz_success_instance(
    ctx: &Ctx<'_>,
    stream: &RandomStream,
) -> Result<Vec<(&'static str, f64, Option<u64>)>> {
    let p = ctx.point;
    let inst = sample_p(p.n, p.k, p.m, &mut stream.derive(0).rng())?;
    let z = good_variables(&inst.formula, &inst.sigma).count();
    let plan = PpzPlan::new(&inst.formula)?;
    let counts = ppz_success_counts(
        &plan,
        ctx.trials,
        &stream.derive(1),
        Some(&inst.sigma),
        PpzOptions::default(),
    );
    let t = counts.trials as f64;
    Ok(vec![
        ("good_count", z as f64, None),
        ("success_rate", counts.found as f64 / t, Some(counts.trials)),
        (
            "sigma_rate",
            counts.found_target as f64 / t,
            Some(counts.trials),
        ),
        ("bound_log2", -((p.n - z) as f64), None),
    ])
}

fn counting_instance(
    ctx: &Ctx<'_>,
    stream: &RandomStream,
) -> Result<Vec<(&'static str, f64, Option<u64>)>> {
    let p = ctx.point;
    let f = sample_r(p.n, p.k, p.m, &mut stream.derive(0).rng())?;
    let count = count_solutions(&f)?;
    Ok(vec![("solutions", count.solutions as f64, None)])
}

fn end_to_end_instance(
    ctx: &Ctx<'_>,
    stream: &RandomStream,
) -> Result<Vec<(&'static str, f64, Option<u64>)>> {
    let p = ctx.point;
    let f = sample_r_plus_with_fallback(
        p.n,
        p.k,
        p.m,
        &mut stream.derive(0).rng(),
        DEFAULT_MAX_ATTEMPTS,
    )?;
    let out = solve_random_ksat(&f, &ctx.policy, &stream.derive(1))?;
    let verified = match out.outcome.result.assignment() {
        Some(a) => eval_formula(&f, a)?,
        None => false,
    };
    let used = Some(out.outcome.trials_used);
    Ok(vec![
        (
            "strategy_ppz",
            f64::from(u8::from(out.strategy == Strategy::Ppz)),
            None,
        ),
        (
            "found",
            f64::from(u8::from(out.outcome.result.is_found())),
            used,
        ),
        ("verified", f64::from(u8::from(verified)), used),
    ])
}

type InstanceFn = fn(&Ctx<'_>, &RandomStream) -> Result<Vec<(&'static str, f64, Option<u64>)>>;

fn run_instance(ctx: &Ctx<'_>, f: InstanceFn, master: u64, instance: u64) -> Vec<ExperimentRecord> {
    let stream = instance_stream(master, ctx.point.index, instance);
    let start = Instant::now();
    let result = f(ctx, &stream);
    let elapsed = ctx.timing.then(|| elapsed_ms(start));
    let tag = Some((instance, &stream));
    match result {
        Ok(values) => values
            .into_iter()
            .map(|(q, v, used)| {
                let mut r = with_value(ctx.row(tag, q), v);
                r.trials_used = used;
                r.elapsed_ms = elapsed;
                r
            })
            .collect(),
        Err(e) => {
            let mut r = ctx.row(tag, "error");
            r.error = Some(e.to_string());
            r.elapsed_ms = elapsed;
            vec![r]
        }
    }
}

fn mean_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some((mean, var.sqrt()))
}

fn column(rows: &[ExperimentRecord], quantity: &str) -> Vec<f64> {
    rows.iter()
        .filter(|r| r.quantity == quantity)
        .filter_map(|r| r.value)
        .collect()
}

fn summaries(
    ctx: &Ctx<'_>,
    kind: ExperimentKind,
    rows: &[ExperimentRecord],
) -> Vec<ExperimentRecord> {
    let p = ctx.point;
    let mut out = Vec::new();
    let mut push = |q: &str, v: f64| {
        if v.is_finite() {
            out.push(with_value(ctx.row(None, q), v));
        }
    };
    match kind {
        ExperimentKind::GoodFraction | ExperimentKind::PpzSuccess => {
            if let Some((mean, sd)) = mean_sd(&column(rows, "good_count")) {
                push("mean_good_fraction", mean / p.n as f64);
                push("sd_good_fraction", sd / p.n as f64);
            }
            if p.k <= p.n {
                if let Ok(e) = expected_good_count(p.n, p.k, p.m) {
                    push("expected_good_fraction", e / p.n as f64);
                }
            }
            push(
                "predicted_good_fraction",
                planted_good_fraction(p.n, p.k, p.m, &ctx.policy),
            );
            if kind == ExperimentKind::PpzSuccess {
                if let Some((mean, _)) = mean_sd(&column(rows, "success_rate")) {
                    push("mean_success_rate", mean);
                }
            }
        }
        ExperimentKind::Counting => {
            if let Some((mean, sd)) = mean_sd(&column(rows, "solutions")) {
                push("mean_solutions", mean);
                push("sd_solutions", sd);
            }
            push(
                "expected_solutions",
                expected_solutions_log2(p.n, p.k, p.m).exp2(),
            );
        }
        ExperimentKind::EndToEnd => {
            let found = column(rows, "verified");
            let attempted = rows
                .iter()
                .filter(|r| r.instance.is_some())
                .map(|r| r.instance)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            if attempted > 0 {
                push(
                    "verified_rate",
                    found.iter().sum::<f64>() / attempted as f64,
                );
            }
        }
    }
    out
}

/// Runs every grid point of `config` and returns its records, instance rows first
/// (sorted by instance index) and the point's summary rows after them.
///
/// Per-instance failures such as an exceeded trial cap become rows with the `error`
/// column set; only an invalid config is an `Err`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let policy = config.policy();
    let f: InstanceFn = match config.experiment {
        ExperimentKind::GoodFraction => good_fraction_instance,
        ExperimentKind::PpzSuccess => ppz_success_instance,
        ExperimentKind::Counting => counting_instance,
        ExperimentKind::EndToEnd => end_to_end_instance,
    };
    let mut records = Vec::new();
    for point in config.points()? {
        let ctx = Ctx {
            id: config.experiment.id(),
            point: &point,
            policy,
            trials: config.trials,
            timing: config.timing,
        };
        let per_instance: Vec<Vec<ExperimentRecord>> = with_workers(|| {
            (0..config.instances)
                .into_par_iter()
                .map(|i| run_instance(&ctx, f, config.seed, i))
                .collect()
        })?;
        let rows: Vec<ExperimentRecord> = per_instance.into_iter().flatten().collect();
        let summary = summaries(&ctx, config.experiment, &rows);
        records.extend(rows);
        records.extend(summary);
    }
    Ok(records)
}

/// [`run_experiment`] followed by [`write_csv`](super::write_csv) to `out`.
pub fn run_experiment_csv<W: std::io::Write>(
    config: &ExperimentConfig,
    out: W,
) -> Result<Vec<ExperimentRecord>> {
    let records = run_experiment(config)?;
    super::write_csv(out, config, &records)?;
    Ok(records)
}
