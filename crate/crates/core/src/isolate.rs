//! Root bound, starting intervals and the main isolation loop.

use crate::descartes::{one_test_in, zero_test_in, Interval};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::eval::{ceil_log2_u64, make_multipoint, Evaluator, DEFAULT_PRECISION_CAP};
use crate::newton::{boundary_test_in, newton_test_in, ActiveInterval, Mode};
use crate::observe::{NoObserver, Observer, QuadraticKind};
use crate::oracle::CoefficientOracle;

pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Maximum number of processed intervals.
    pub iteration_cap: u64,
    /// Maximum quality `L` (in bits) requested from any approximation.
    pub precision_cap: u64,
    /// Skip the Boundary- and Newton-Tests.
    pub bisection_only: bool,
    /// Start from `(-2^Gamma, 2^Gamma)` instead of the split start intervals.
    pub single_initial_interval: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            iteration_cap: DEFAULT_ITERATION_CAP,
            precision_cap: DEFAULT_PRECISION_CAP,
            bisection_only: false,
            single_initial_interval: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub tree_size: u64,
    pub quadratic_steps: u64,
    pub linear_steps: u64,
    pub boundary_successes: u64,
    pub newton_successes: u64,
    pub max_level: u32,
    pub max_precision_bits: u64,
}

/// `Gamma = 2^gamma` with `2^Gamma >= 1 + max |z_i|` over all complex roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootBound {
    pub gamma: u32,
}

impl RootBound {
    /// `Gamma = 2^gamma`.
    pub fn big_gamma(&self) -> i64 {
        1i64 << self.gamma
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationResult {
    pub intervals: Vec<Interval>,
    pub stats: RunStats,
}

/// Cauchy-style root bound from quality-8 coefficient approximations of a
/// polynomial whose leading coefficient lies in `[1/4, 1]`.
pub fn root_bound(p: &CoefficientOracle) -> RootBound {
    let n = p.degree();
    let c = p.coeffs(8);
    let slack = Dyadic::pow2(-8);
    let u = c[..n].iter().map(|x| &x.abs() + &slack).max().expect("degree at least 1");
    let gt = (&Dyadic::one() + &u.mul_pow2(2)).ceil_log2().saturating_add(1).max(2);
    RootBound { gamma: ceil_log2_u64(gt as u64) as u32 }
}

/// The `2 gamma + 3` base points `s_k`, symmetric about zero.
pub fn base_points(b: RootBound) -> Vec<Dyadic> {
    let g = b.gamma;
    let pos: Vec<Dyadic> = (0..=g).map(|k| Dyadic::pow2(1i64 << k)).collect();
    let mut s: Vec<Dyadic> = pos.iter().rev().map(|x| -x.clone()).collect();
    s.push(Dyadic::zero());
    s.extend(pos);
    s
}

/// Start intervals `(s_k*, s_{k+1}*)` with each `s_k*` admissible in the
/// grid around `s_k` of spacing `2^-ceil(2 log n)`.
pub fn initialize(p: &CoefficientOracle, b: RootBound) -> Result<Vec<Interval>> {
    initialize_in(&Evaluator::new(p, DEFAULT_PRECISION_CAP), b)
}

fn initialize_in(ev: &Evaluator<'_>, b: RootBound) -> Result<Vec<Interval>> {
    let n = ev.degree();
    let eps = Dyadic::pow2(-ceil_log2_u64((n * n) as u64));
    let mut stars = Vec::new();
    for s in base_points(b) {
        let grid = make_multipoint(&s, &eps, n).points;
        let (i, _) = ev.admissible_point(&grid)?;
        stars.push(grid[i].clone());
    }
    stars
        .windows(2)
        .map(|w| {
            Interval::new(w[0].clone(), w[1].clone())
                .ok_or_else(|| Error::Degenerate(format!("start points {} and {} overlap", w[0], w[1])))
        })
        .collect()
}

/// Isolates all real roots of a square-free polynomial.
pub fn isolate(p: &CoefficientOracle, config: &Config) -> Result<IsolationResult> {
    isolate_with_observer(p, config, &mut NoObserver)
}

/// [`isolate`], reporting every test and step to `observer`.
pub fn isolate_with_observer(
    p: &CoefficientOracle,
    config: &Config,
    observer: &mut dyn Observer,
) -> Result<IsolationResult> {
    let (p, _) = p.normalize_leading(config.precision_cap)?;
    let ev = Evaluator::with_observer(&p, config.precision_cap, observer);
    let bound = root_bound(&p);
    let starts = if config.single_initial_interval {
        let r = Dyadic::pow2(bound.big_gamma());
        vec![Interval::new(-r.clone(), r).expect("nonempty")]
    } else {
        initialize_in(&ev, bound)?
    };

    let mut stats = RunStats::default();
    let mut queue: Vec<ActiveInterval> = starts.into_iter().rev().map(|i| ActiveInterval::new(i, 1)).collect();
    let mut out = Vec::new();
    let floor = Dyadic::pow2(-(config.precision_cap as i64));

    while let Some(ai) = queue.pop() {
        stats.tree_size += 1;
        stats.max_level = stats.max_level.max(ai.level);
        if stats.tree_size > config.iteration_cap {
            return Err(Error::IterationCap { cap: config.iteration_cap, interval: ai.interval.to_string() });
        }
        let iv = &ai.interval;
        if iv.width() < floor {
            return Err(Error::Degenerate(format!("interval {iv} is narrower than 2^-{}", config.precision_cap)));
        }
        if zero_test_in(&ev, iv, iv)? {
            continue;
        }
        let one = one_test_in(&ev, iv, iv)?;
        if let Some(j) = one.isolated {
            out.push(j);
            continue;
        }
        if !config.bisection_only {
            let step = match boundary_test_in(&ev, &ai, Mode::Full)? {
                Some(j) => Some((j, QuadraticKind::Boundary)),
                None => newton_test_in(&ev, &ai, Mode::Full)?.interval.map(|j| (j, QuadraticKind::Newton)),
            };
            if let Some((j, kind)) = step {
                let child = ai.quadratic(j);
                debug_assert_eq!(child.log2_n(), 2 * ai.log2_n());
                stats.quadratic_steps += 1;
                match kind {
                    QuadraticKind::Boundary => stats.boundary_successes += 1,
                    QuadraticKind::Newton => stats.newton_successes += 1,
                }
                ev.notify(|o| o.on_quadratic(&ai, &child, kind));
                queue.push(child);
                continue;
            }
        }
        let m = one.split;
        let children = [
            ai.linear(Interval::new(iv.a.clone(), m.clone()).expect("split inside interval")),
            ai.linear(Interval::new(m, iv.b.clone()).expect("split inside interval")),
        ];
        debug_assert!(children.iter().all(|c| c.log2_n() == (ai.log2_n() / 2).max(2)));
        stats.linear_steps += 1;
        ev.notify(|o| o.on_linear(&ai, &children));
        let [left, right] = children;
        queue.push(right);
        queue.push(left);
    }
    stats.max_precision_bits = ev.max_precision_bits();
    out.sort_by(|x, y| x.a.cmp(&y.a));
    Ok(IsolationResult { intervals: out, stats })
}
