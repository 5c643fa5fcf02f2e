//! Subcommand execution: expand the sweep grid, evaluate points (optionally
//! in parallel), and emit rows in deterministic grid order regardless of
//! completion order.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use prefbound::bounds::{
    info_loss_lower_bound_with_table,
    pathology_probability_lower_bound, representable_count_bound, BallMode, BoundParams,
};
use prefbound::oracles::{verify_all, CheckOutcome, VerifyOptions};
use prefbound::permutohedron::{mahonian_counts, MahonianTable};

use crate::csvio::{fmt_float, Row};
use crate::rangespec::RangeSpec;
use crate::CliError;

/// Ceiling on the number of grid points a single run may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Ceiling on any single axis value: evaluation cost and memory grow with
/// A and I (the pathology bound walks an O(I) table per point).
pub const MAX_AXIS_VALUE: usize = 1_000_000;

/// Ceiling on Monte Carlo trials per grid point.
pub const MAX_TRIALS: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    BoundC,
    Rhat,
    InfoLoss,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BoundC => "bound-c",
            Command::Rhat => "rhat",
            Command::InfoLoss => "info-loss",
            Command::Verify => "verify",
        }
    }
}

/// A fully resolved sweep: what to run and over which inclusive ranges.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub command: Command,
    pub a: RangeSpec,
    pub i: RangeSpec,
    pub d: RangeSpec,
    /// Truncation of the information-loss sum; `None` means A(A−1)/2.
    pub swap_cap: Option<usize>,
    pub ball_mode: BallMode,
    pub trials: u64,
    pub seed: u64,
    pub jobs: usize,
    /// Negative-control multiplier for `verify`; 1.0 in normal use.
    pub bound_scale: f64,
}

impl SweepSpec {
    /// Per-subcommand defaults, before config-file and flag overrides.
    pub fn defaults(command: Command) -> SweepSpec {
        let (a, i, d) = match command {
            Command::BoundC => ("3:6", "3:20", "1:2"),
            Command::Rhat => ("3:10", "3", "1:9"),
            Command::InfoLoss => ("5:15", "3", "1:13"),
            Command::Verify => ("3:4", "3:4", "1:2"),
        };
        SweepSpec {
            command,
            a: a.parse().expect("default range"),
            i: i.parse().expect("default range"),
            d: d.parse().expect("default range"),
            swap_cap: None,
            ball_mode: BallMode::Paper,
            trials: match command {
                Command::Verify => 10_000,
                _ => 20_000,
            },
            seed: 42,
            jobs: 1,
            bound_scale: 1.0,
        }
    }

    /// Number of grid points this sweep expands to.
    pub fn grid_points(&self) -> usize {
        match self.command {
            Command::BoundC | Command::Verify => self.a.len() * self.i.len() * self.d.len(),
            Command::Rhat | Command::InfoLoss => self.a.len() * self.d.len(),
        }
    }

    /// Static capacity screening, before any evaluation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.jobs == 0 {
            return Err(CliError::InvalidArgument("--jobs must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(CliError::InvalidArgument(
                "--trials must be at least 1".into(),
            ));
        }
        if self.trials > MAX_TRIALS {
            return Err(CliError::Capacity(format!(
                "--trials {} exceeds the cap of {MAX_TRIALS}",
                self.trials
            )));
        }
        if self.bound_scale <= 0.0 || !self.bound_scale.is_finite() {
            return Err(CliError::InvalidArgument(
                "--bound-scale must be a positive finite number".into(),
            ));
        }
        for (axis, range) in [("A", &self.a), ("I", &self.i), ("d", &self.d)] {
            if range.stop > MAX_AXIS_VALUE {
                return Err(CliError::Capacity(format!(
                    "{axis} reaches {}, more than the cap of {MAX_AXIS_VALUE}",
                    range.stop
                )));
            }
        }
        let points = self.grid_points();
        if points > MAX_GRID_POINTS {
            return Err(CliError::Capacity(format!(
                "sweep expands to {points} grid points, more than the cap of {MAX_GRID_POINTS}"
            )));
        }
        Ok(())
    }

    /// The resolved configuration echoed at the top of every output.
    pub fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("# prefbound {}", self.command.name()),
            format!("# A={}", self.a),
            format!("# I={}", self.i),
            format!("# d={}", self.d),
            format!(
                "# K={}",
                self.swap_cap
                    .map(|k| k.to_string())
                    .unwrap_or_else(|| "default".into())
            ),
            format!("# ball-mode={}", self.ball_mode),
            format!("# trials={}", self.trials),
            format!("# seed={}", self.seed),
            format!("# jobs={}", self.jobs),
            format!("# bound-scale={}", fmt_float(self.bound_scale)),
        ]
    }
}

/// Everything a run produces: config echo, rows, the overall verdict
/// (final for `verify`, vacuously true otherwise), and a human-readable
/// summary for `verify`.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub comments: Vec<String>,
    pub rows: Vec<Row>,
    pub all_passed: bool,
    pub summary: Option<String>,
}

pub fn run(spec: &SweepSpec) -> Result<RunOutput, CliError> {
    spec.validate()?;
    let (rows, all_passed, summary) = match spec.command {
        Command::BoundC => (run_bound_c(spec)?, true, None),
        Command::Rhat => (run_rhat(spec)?, true, None),
        Command::InfoLoss => (run_info_loss(spec)?, true, None),
        Command::Verify => {
            let (rows, passed, summary) = run_verify(spec)?;
            (rows, passed, Some(summary))
        }
    };
    Ok(RunOutput {
        comments: spec.comment_lines(),
        rows,
        all_passed,
        summary,
    })
}

fn in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(work))
}

fn run_bound_c(spec: &SweepSpec) -> Result<Vec<Row>, CliError> {
    let mut points = Vec::with_capacity(spec.grid_points());
    for a in spec.a.values() {
        for i in spec.i.values() {
            for d in spec.d.values() {
                points.push((a, i, d));
            }
        }
    }
    in_pool(spec.jobs, || {
        points
            .par_iter()
            .map(|&(a, i, d)| {
                let mut row = Row {
                    kind: "bound_c".into(),
                    a: Some(a),
                    i: Some(i),
                    d: Some(d),
                    ..Row::default()
                };
                match pathology_probability_lower_bound(&BoundParams::new(a, i, d)) {
                    Ok(value) => {
                        row.value = Some(value);
                        row.status = "ok".into();
                    }
                    Err(e) => row.status = format!("skipped:{e}"),
                }
                row
            })
            .collect()
    })
}

fn run_rhat(spec: &SweepSpec) -> Result<Vec<Row>, CliError> {
    let mut points = Vec::with_capacity(spec.grid_points());
    for a in spec.a.values() {
        for d in spec.d.values() {
            points.push((a, d));
        }
    }
    in_pool(spec.jobs, || {
        points
            .par_iter()
            .map(|&(a, d)| {
                let mut row = Row {
                    kind: "rhat".into(),
                    a: Some(a),
                    d: Some(d),
                    ..Row::default()
                };
                if a == 0 || d == 0 {
                    row.status = "skipped:requires A ≥ 1 and d ≥ 1".into();
                    return row;
                }
                let bound = representable_count_bound(a, d);
                // value = r̂/A! (the headline proportion), extra1 = the
                // banned-preference probability, extra2 = r̂ itself.
                row.value = Some(bound.fraction_of_all);
                row.extra1 = Some(bound.banned.probability);
                row.extra2 = Some(bound.count.to_f64().unwrap_or(f64::INFINITY));
                row.status = if bound.banned.degenerate {
                    "ok:degenerate-d".into()
                } else {
                    "ok".into()
                };
                row
            })
            .collect()
    })
}

fn run_info_loss(spec: &SweepSpec) -> Result<Vec<Row>, CliError> {
    let mut points = Vec::with_capacity(spec.grid_points());
    for a in spec.a.values() {
        for d in spec.d.values() {
            points.push((a, d));
        }
    }
    // Ball-size tables are per-A; in exact mode build each once up front.
    let mut tables: BTreeMap<usize, MahonianTable> = BTreeMap::new();
    if spec.ball_mode == BallMode::Exact {
        for a in spec.a.values() {
            if let Ok(table) = mahonian_counts(a) {
                tables.insert(a, table);
            }
            // Out-of-capacity tables surface per-row below.
        }
    }
    in_pool(spec.jobs, || {
        points
            .par_iter()
            .map(|&(a, d)| {
                let mut params = BoundParams::new(a, 1, d).with_ball_mode(spec.ball_mode);
                if let Some(cap) = spec.swap_cap {
                    params = params.with_swap_cap(cap);
                }
                let mut row = Row {
                    kind: "info_loss".into(),
                    a: Some(a),
                    d: Some(d),
                    k: (a > 0).then(|| params.resolved_swap_cap()),
                    ball_mode: Some(spec.ball_mode.to_string()),
                    ..Row::default()
                };
                match info_loss_lower_bound_with_table(&params, tables.get(&a)) {
                    Ok(bound) => {
                        row.value = Some(bound.expectation_lb);
                        row.extra1 = Some(bound.scaled_lb);
                        row.extra2 = Some(bound.rhat_used);
                        row.status = "ok".into();
                    }
                    Err(e) => row.status = format!("skipped:{e}"),
                }
                row
            })
            .collect()
    })
}

fn run_verify(spec: &SweepSpec) -> Result<(Vec<Row>, bool, String), CliError> {
    let mut grid = Vec::with_capacity(spec.grid_points());
    for a in spec.a.values() {
        for i in spec.i.values() {
            for d in spec.d.values() {
                grid.push(
                    BoundParams::new(a, i, d)
                        .with_ball_mode(spec.ball_mode),
                );
            }
        }
    }
    let options = VerifyOptions {
        trials: spec.trials,
        seed: spec.seed,
        bound_scale: spec.bound_scale,
        ..VerifyOptions::default()
    };
    // verify_all derives per-point seeds by grid index, so evaluating the
    // whole grid inside one pool keeps results independent of --jobs.
    let report = in_pool(spec.jobs, || verify_all(&grid, &options))?;
    let rows = report
        .checks
        .iter()
        .map(|check| {
            let status = match &check.outcome {
                CheckOutcome::Pass => "pass".to_string(),
                CheckOutcome::Fail => "fail".to_string(),
                CheckOutcome::Skipped(reason) => format!("skipped:{reason}"),
            };
            Row {
                kind: check.kind.into(),
                a: Some(check.num_alternatives),
                i: check.individuals,
                d: check.dimension,
                trials: Some(spec.trials),
                seed: Some(spec.seed),
                value: check.slack,
                extra1: check.bound,
                extra2: check.oracle,
                status,
                ..Row::default()
            }
        })
        .collect();
    Ok((rows, report.all_passed(), report.summary()))
}
