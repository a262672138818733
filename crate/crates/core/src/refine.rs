//! Refinement of isolating intervals to a target width.
//!
//! Each interval is refined on its own with the isolation loop specialised to
//! a single root: probe grids have two points and emptiness of a subinterval
//! is read off the signs of `P` at its endpoints.

use crate::descartes::Interval;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::eval::{ceil_log2_u64, Evaluator, DEFAULT_PRECISION_CAP};
use crate::isolate::Config;
use crate::newton::{boundary_test_in, newton_test_in, ActiveInterval, Mode};
use crate::oracle::CoefficientOracle;

pub use crate::newton::two_point_grid;

/// Isolating intervals, each with exactly one root and `var(P, I) = 1`, to be
/// shrunk below width `2^-kappa`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineRequest {
    pub intervals: Vec<Interval>,
    pub kappa: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefineStats {
    pub iterations: u64,
    pub quadratic_steps: u64,
    pub linear_steps: u64,
    pub max_level: u32,
    pub max_precision_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineResult {
    pub intervals: Vec<Interval>,
    pub stats: RefineStats,
}

/// Sign of `P(a) * P(b)`; both values must be nonzero.
pub fn sign_test(p: &CoefficientOracle, a: &Dyadic, b: &Dyadic) -> Result<i32> {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    Ok(ev.sign(a)? * ev.sign(b)?)
}

/// Shrinks every interval of `req` to width below `2^-kappa`, keeping its root.
pub fn refine(p: &CoefficientOracle, req: &RefineRequest, config: &Config) -> Result<RefineResult> {
    let (p, _) = p.normalize_leading(config.precision_cap)?;
    let ev = Evaluator::new(&p, config.precision_cap);
    let mut stats = RefineStats::default();
    let mut out = Vec::with_capacity(req.intervals.len());
    for iv in &req.intervals {
        out.push(refine_one(&ev, iv, req.kappa, config, &mut stats)?);
    }
    stats.max_precision_bits = ev.max_precision_bits();
    Ok(RefineResult { intervals: out, stats })
}

fn refine_one(
    ev: &Evaluator<'_>,
    iv: &Interval,
    kappa: u64,
    config: &Config,
    stats: &mut RefineStats,
) -> Result<Interval> {
    let target = Dyadic::pow2(-(kappa as i64));
    let n = ev.degree();
    let mut ai = ActiveInterval::new(iv.clone(), 1);
    let mut steps = 0u64;
    while ai.interval.width() >= target {
        steps += 1;
        stats.iterations += 1;
        stats.max_level = stats.max_level.max(ai.level);
        if steps > config.iteration_cap {
            return Err(Error::IterationCap { cap: config.iteration_cap, interval: ai.interval.to_string() });
        }
        let quad = match boundary_test_in(ev, &ai, Mode::SignOnly)? {
            Some(j) => Some(j),
            None => newton_test_in(ev, &ai, Mode::SignOnly)?.interval,
        };
        if let Some(j) = quad {
            stats.quadratic_steps += 1;
            ai = ai.quadratic(j);
            continue;
        }
        let cur = &ai.interval;
        let eps = cur.width().mul_pow2(-(2 + ceil_log2_u64(n as u64)));
        let (m1, m2) = two_point_grid(&cur.midpoint(), &eps, n);
        let (k, _) = ev.admissible_point(&[m1.clone(), m2.clone()])?;
        let m = if k == 0 { m1 } else { m2 };
        let child = if ev.sign(&cur.a)? * ev.sign(&m)? < 0 {
            Interval::new(cur.a.clone(), m)
        } else {
            Interval::new(m, cur.b.clone())
        }
        .expect("split inside interval");
        stats.linear_steps += 1;
        ai = ai.linear(child);
    }
    stats.max_level = stats.max_level.max(ai.level);
    Ok(ai.interval)
}
