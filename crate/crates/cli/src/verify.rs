//! Cross-checks solver output against exact Sturm counting.

use anewdsc::descartes::Interval;
use anewdsc::isolate::{isolate, root_bound, Config};
use anewdsc_reference::{descartes_var_on, rat, sturm_count, ExactPoly};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{pow2_rat, Polynomial};

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub roots: usize,
    pub expected: Option<usize>,
    pub tree_size: Option<u64>,
    pub problems: Vec<String>,
}

/// Exact checks on an isolation result: the interval count matches the
/// number of real roots in `(-2^bound, 2^bound)`, every interval has an
/// exact sign change and one sign variation, and the intervals are
/// disjoint.
pub fn check_intervals(p: &ExactPoly, intervals: &[Interval], bound: i64) -> (usize, Vec<String>) {
    let mut problems = Vec::new();
    let r = pow2_rat(bound);
    let expected = match sturm_count(p, &-r.clone(), &r) {
        Ok(k) => k,
        Err(e) => {
            problems.push(format!("reference count failed: {e}"));
            return (0, problems);
        }
    };
    if intervals.len() != expected {
        problems.push(format!("{} intervals but {expected} real roots", intervals.len()));
    }
    for i in intervals {
        let (a, b) = (rat(&i.a), rat(&i.b));
        if p.sign_at(&a) * p.sign_at(&b) >= 0 {
            problems.push(format!("no sign change on {i}"));
        }
        if a <= -r.clone() || b >= r {
            problems.push(format!("{i} leaves the root bound"));
        }
        let v = descartes_var_on(p, i);
        if v != 1 {
            problems.push(format!("{v} sign variations on {i}"));
        }
    }
    for w in intervals.windows(2) {
        if w[0].b > w[1].a {
            problems.push(format!("{} and {} overlap", w[0], w[1]));
        }
    }
    (expected, problems)
}

pub fn verify_polynomial(p: &Polynomial, config: &Config) -> Verdict {
    let mut v = Verdict { name: p.label(), pass: false, roots: 0, expected: None, tree_size: None, problems: Vec::new() };
    let run = p.to_oracle().and_then(|o| {
        let (norm, _) = o.normalize_leading(config.precision_cap)?;
        let bound = root_bound(&norm).big_gamma();
        Ok((isolate(&o, config)?, bound))
    });
    match run {
        Err(e) => v.problems.push(e.to_string()),
        Ok((r, bound)) => {
            let (expected, problems) = check_intervals(&p.to_exact(), &r.intervals, bound);
            v.roots = r.intervals.len();
            v.expected = Some(expected);
            v.tree_size = Some(r.stats.tree_size);
            v.problems = problems;
        }
    }
    v.pass = v.problems.is_empty();
    v
}

/// Verifies polynomials in parallel; the output keeps the input order.
pub fn verify_all(ps: &[Polynomial], config: &Config) -> Vec<Verdict> {
    ps.par_iter().map(|p| verify_polynomial(p, config)).collect()
}
