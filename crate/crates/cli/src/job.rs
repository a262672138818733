//! Isolation, refinement and benchmark runs with timing and JSON reports.

use std::time::Instant;

use anewdsc::descartes::Interval;
use anewdsc::isolate::{isolate, Config, RunStats};
use anewdsc::refine::{refine, RefineRequest, RefineStats};
use serde::Serialize;
use serde_json::Value;

use crate::format::{IntervalOut, Polynomial};
use crate::Result;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StatsOut {
    pub tree_size: u64,
    pub quadratic_steps: u64,
    pub linear_steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_successes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_successes: Option<u64>,
    pub max_level: u32,
    pub max_precision_bits: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl StatsOut {
    fn isolation(s: &RunStats, wall_time: f64) -> Self {
        StatsOut {
            tree_size: s.tree_size,
            quadratic_steps: s.quadratic_steps,
            linear_steps: s.linear_steps,
            boundary_successes: Some(s.boundary_successes),
            newton_successes: Some(s.newton_successes),
            max_level: s.max_level,
            max_precision_bits: s.max_precision_bits,
            wall_time,
        }
    }

    fn refinement(s: &RefineStats, wall_time: f64) -> Self {
        StatsOut {
            tree_size: s.iterations,
            quadratic_steps: s.quadratic_steps,
            linear_steps: s.linear_steps,
            boundary_successes: None,
            newton_successes: None,
            max_level: s.max_level,
            max_precision_bits: s.max_precision_bits,
            wall_time,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<u64>,
    /// The solved polynomial, so that a report can be used as input again.
    pub polynomial: Value,
    pub intervals: Vec<IntervalOut>,
    pub stats: StatsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolate_stats: Option<StatsOut>,
}

/// Isolation output before rendering.
#[derive(Clone, Debug)]
pub struct Run {
    pub intervals: Vec<Interval>,
    pub stats: StatsOut,
}

pub fn run_isolate(p: &Polynomial, config: &Config) -> Result<Run> {
    let o = p.to_oracle()?;
    let t = Instant::now();
    let r = isolate(&o, config)?;
    let wall = t.elapsed().as_secs_f64();
    Ok(Run { intervals: r.intervals, stats: StatsOut::isolation(&r.stats, wall) })
}

pub fn run_refine(p: &Polynomial, intervals: Vec<Interval>, kappa: u64, config: &Config) -> Result<Run> {
    let o = p.to_oracle()?;
    let t = Instant::now();
    let r = refine(&o, &RefineRequest { intervals, kappa }, config)?;
    let wall = t.elapsed().as_secs_f64();
    Ok(Run { intervals: r.intervals, stats: StatsOut::refinement(&r.stats, wall) })
}

fn report(p: &Polynomial, run: Run, kappa: Option<u64>, isolate_stats: Option<StatsOut>) -> Report {
    Report {
        name: p.label(),
        degree: p.degree(),
        kappa,
        polynomial: p.to_json(),
        intervals: run.intervals.iter().map(IntervalOut::from).collect(),
        stats: run.stats,
        isolate_stats,
    }
}

pub fn isolate_report(p: &Polynomial, config: &Config) -> Result<Report> {
    Ok(report(p, run_isolate(p, config)?, None, None))
}

/// Refines `given` intervals, or isolates first when none are given.
pub fn refine_report(p: &Polynomial, given: Option<Vec<Interval>>, kappa: u64, config: &Config) -> Result<Report> {
    let (intervals, iso) = match given {
        Some(i) => (i, None),
        None => {
            let r = run_isolate(p, config)?;
            (r.intervals, Some(r.stats))
        }
    };
    Ok(report(p, run_refine(p, intervals, kappa, config)?, Some(kappa), iso))
}

/// Isolation, and refinement if `kappa` is given, of a generated polynomial.
pub fn bench_report(p: &Polynomial, kappa: Option<u64>, config: &Config) -> Result<Report> {
    match kappa {
        Some(k) => refine_report(p, None, k, config),
        None => isolate_report(p, config),
    }
}
