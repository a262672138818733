//! Newton-Test and Boundary-Test.
//!
//! Both tests try to shrink an interval `I` by the factor `N_I` in one step.
//! The Newton-Test guesses a cluster position from Newton steps at two of
//! three probe points; the Boundary-Test checks whether all roots crowd one
//! endpoint. In refinement mode the probe grids shrink to two points and the
//! flank 0-Tests become sign tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::descartes::{zero_test_in, Interval};
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::eval::{ceil_log2_u64, make_multipoint, Evaluator, DEFAULT_PRECISION_CAP};
use crate::oracle::CoefficientOracle;

/// Levels beyond this are clamped when forming `log N_I`; any such step
/// would need precision far above every cap.
const MAX_LEVEL: u32 = 40;

/// An interval on the work queue with its level `n_I >= 1`; the step factor
/// is `N_I = 2^(2^n_I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveInterval {
    pub interval: Interval,
    pub level: u32,
}

impl ActiveInterval {
    pub fn new(interval: Interval, level: u32) -> Self {
        assert!(level >= 1, "level must be at least 1");
        ActiveInterval { interval, level }
    }

    /// `log2 N_I = 2^n_I`.
    pub fn log2_n(&self) -> i64 {
        1i64 << self.level.min(MAX_LEVEL)
    }

    /// `N_I` as an exact dyadic.
    pub fn n_factor(&self) -> Dyadic {
        Dyadic::pow2(self.log2_n())
    }

    /// Child of a quadratic step: `N' = N^2`.
    pub fn quadratic(&self, interval: Interval) -> ActiveInterval {
        ActiveInterval { interval, level: self.level + 1 }
    }

    /// Child of a linear step: `N' = max(4, sqrt N)`.
    pub fn linear(&self, interval: Interval) -> ActiveInterval {
        ActiveInterval { interval, level: self.level.saturating_sub(1).max(1) }
    }
}

/// How the tests pick probe points and certify empty flanks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Full multipoints and 0-Tests, for isolation.
    Full,
    /// Two-point grids and sign tests, for refining an isolating interval.
    SignOnly,
}

/// Exact quotient `num / den` with `den != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: Dyadic,
    pub den: Dyadic,
}

/// Data of one probe pair that reached the Newton step: `ṽ_j = A_j / A'_j`
/// approximates `P(ξ*_j) / P'(ξ*_j)` within `δ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonCandidate {
    pub pair: (usize, usize),
    pub xi: [Dyadic; 2],
    pub v: [Fraction; 2],
    pub delta: [Fraction; 2],
    /// `None` when `ṽ_j1 = ṽ_j2`.
    pub lambda: Option<Fraction>,
    /// Quality of the final `P`, `P'` approximations.
    pub quality: i64,
}

/// Outcome of a Newton-Test with the pairs that got as far as computing `λ̃`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NewtonTrace {
    pub interval: Option<Interval>,
    pub candidates: Vec<NewtonCandidate>,
}

/// The grid `{m - ceil(n/2) eps, m + ceil(n/2) eps}`.
pub fn two_point_grid(m: &Dyadic, eps: &Dyadic, n: usize) -> (Dyadic, Dyadic) {
    assert!(eps.is_positive(), "grid spacing must be positive");
    let r = eps * &Dyadic::from_i64(n.div_ceil(2) as i64);
    (m - &r, m + &r)
}

fn grid_point(ev: &Evaluator<'_>, m: &Dyadic, eps: &Dyadic, mode: Mode) -> Result<Dyadic> {
    let n = ev.degree();
    let points = match mode {
        Mode::Full => make_multipoint(m, eps, n).points,
        Mode::SignOnly => {
            let (x, y) = two_point_grid(m, eps, n);
            vec![x, y]
        }
    };
    let (i, _) = ev.admissible_point(&points)?;
    Ok(points[i].clone())
}

fn root_free(ev: &Evaluator<'_>, ctx: &Interval, j: &Interval, mode: Mode) -> Result<bool> {
    match mode {
        Mode::Full => zero_test_in(ev, ctx, j),
        Mode::SignOnly => Ok(ev.sign(&j.a)? * ev.sign(&j.b)? > 0),
    }
}

struct Probe {
    xi: Dyadic,
    evals: HashMap<i64, (Dyadic, Dyadic)>,
}

impl Probe {
    fn at(&mut self, ev: &Evaluator<'_>, l: i64) -> (Dyadic, Dyadic) {
        self.evals.entry(l).or_insert_with(|| ev.eval_with_derivative(&self.xi, l)).clone()
    }
}

fn next_quality(ev: &Evaluator<'_>, l: i64, what: &str) -> Result<i64> {
    if l as u64 >= ev.cap() {
        return Err(ev.cap_error(what.to_string()));
    }
    Ok((2 * l).min(ev.cap() as i64))
}

/// Newton-Test on `ai`, recording every candidate pair.
pub fn newton_test_in(ev: &Evaluator<'_>, ai: &ActiveInterval, mode: Mode) -> Result<NewtonTrace> {
    let iv = &ai.interval;
    let (a, b) = (&iv.a, &iv.b);
    let n = ev.degree();
    let w = iv.width();
    let log_n = ai.log2_n();
    let log_eps = -(5 + ceil_log2_u64(n as u64));
    let quarter = w.mul_pow2(-2);
    let mut probes = Vec::with_capacity(3);
    for j in 1..=3 {
        let center = a + &(&quarter * &Dyadic::from_i64(j));
        let xi = grid_point(ev, &center, &w.mul_pow2(log_eps), mode)?;
        probes.push(Probe { xi, evals: HashMap::new() });
    }

    // |ṽ1 - ṽ2| + δ1 + δ2 >= w / (8n); the success argument only yields
    // |v1 - v2| > w / (8k), so the plain w / n bound would reject clusters
    // with k > n / 2
    let nd = Dyadic::from_i64(8 * n as i64);
    // min(w/(32n), w/(2^14 N)) = w / max(32n, 2^14 N)
    let d3 = std::cmp::max(Dyadic::from_i64(32 * n as i64), Dyadic::pow2(14 + log_n));
    let cell = w.mul_pow2(-(log_n + 2));
    let cells = BigInt::one() << ((log_n + 2) as u64);
    let mut trace = NewtonTrace::default();

    for (j1, j2) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let what = |stage: &str| format!("Newton-Test pair ({}, {}) {stage} on {iv}", j1 + 1, j2 + 1);

        // Step 2.1
        let mut l: i64 = 2;
        let l1 = loop {
            let (p1, d1) = probes[j1].at(ev, l);
            let (p2, d2) = probes[j2].at(ev, l);
            let e = Dyadic::pow2(-l);
            let far = |p: &Dyadic, d: &Dyadic| &p.abs() - &e > &w * &(&d.abs() + &e);
            if far(&p1, &d1) || far(&p2, &d2) {
                break None;
            }
            let e2 = Dyadic::pow2(1 - l);
            if [&p1, &p2, &d1, &d2].iter().all(|x| x.abs() > e2) {
                break Some(l);
            }
            l = next_quality(ev, l, &what("step 2.1"))?;
        };
        let Some(l1) = l1 else { continue };

        // Step 2.2
        let mut l = 2 * l1;
        let (p1, d1, p2, d2) = loop {
            let (p1, d1) = probes[j1].at(ev, l);
            let (p2, d2) = probes[j2].at(ev, l);
            let small = |p: &Dyadic, d: &Dyadic| {
                !d.is_zero() && &(&p.abs() + &d.abs()) * &d3 < (&(d * d) * &w).mul_pow2(l - 2)
            };
            if small(&p1, &d1) && small(&p2, &d2) {
                break (p1, d1, p2, d2);
            }
            l = next_quality(ev, l, &what("step 2.2"))?;
        };
        let sq1 = &d1 * &d1;
        let sq2 = &d2 * &d2;
        let den = &(&p1 * &d2) - &(&p2 * &d1);
        let gap = (&(&den.abs() * &(&d1 * &d2).abs()) * &nd).mul_pow2(l - 2);
        let slack = &(&(&(&p1.abs() + &d1.abs()) * &sq2) + &(&(&p2.abs() + &d2.abs()) * &sq1)) * &nd;
        let scale = Dyadic::pow2(l - 2);
        let mut cand = NewtonCandidate {
            pair: (j1 + 1, j2 + 1),
            xi: [probes[j1].xi.clone(), probes[j2].xi.clone()],
            v: [Fraction { num: p1.clone(), den: d1.clone() }, Fraction { num: p2.clone(), den: d2.clone() }],
            delta: [
                Fraction { num: &p1.abs() + &d1.abs(), den: &scale * &sq1 },
                Fraction { num: &p2.abs() + &d2.abs(), den: &scale * &sq2 },
            ],
            lambda: None,
            quality: l,
        };
        if den.is_zero() {
            trace.candidates.push(cand);
            continue;
        }
        let close = &gap + &slack < (&(&sq1 * &sq2) * &w).mul_pow2(l - 2);

        // Step 2.3: λ̃ - a = ((ξ1 - a) den + (ξ2 - ξ1) A1 A'2) / den
        let x1 = &probes[j1].xi;
        let x2 = &probes[j2].xi;
        let mut num = &(&(x1 - a) * &den) + &(&(x2 - x1) * &(&p1 * &d2));
        let mut den = den;
        cand.lambda = Some(Fraction { num: &(a * &den) + &num, den: den.clone() });
        trace.candidates.push(cand);
        if close {
            continue;
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_negative() || num > &w * &den {
            continue;
        }
        let ell = Dyadic::floor_div(&num, &(&cell * &den));
        let lo_k = (&ell - 1u32).max(BigInt::zero());
        let hi_k = (&ell + 2u32).min(cells.clone());
        let ac = a + &(&cell * &Dyadic::from_bigint(lo_k.clone()));
        let bc = a + &(&cell * &Dyadic::from_bigint(hi_k.clone()));
        let spacing = w.mul_pow2(log_eps - log_n);
        let a_star = if lo_k.is_zero() { a.clone() } else { grid_point(ev, &ac, &spacing, mode)? };
        let b_star = if hi_k == cells { b.clone() } else { grid_point(ev, &bc, &spacing, mode)? };
        let Some(cand_iv) = Interval::new(a_star.clone(), b_star.clone()) else { continue };

        // Step 2.4
        let left_ok = match Interval::new(a.clone(), a_star) {
            Some(f) => root_free(ev, iv, &f, mode)?,
            None => true,
        };
        if !left_ok {
            continue;
        }
        let right_ok = match Interval::new(b_star, b.clone()) {
            Some(f) => root_free(ev, iv, &f, mode)?,
            None => true,
        };
        if right_ok {
            trace.interval = Some(cand_iv);
            return Ok(trace);
        }
    }
    Ok(trace)
}

/// Boundary-Test on `ai`.
pub fn boundary_test_in(ev: &Evaluator<'_>, ai: &ActiveInterval, mode: Mode) -> Result<Option<Interval>> {
    let iv = &ai.interval;
    let n = ev.degree();
    let w = iv.width();
    let log_n = ai.log2_n();
    let step = w.mul_pow2(-(log_n + 1));
    let spacing = w.mul_pow2(-(2 + ceil_log2_u64(n as u64)) - log_n);

    let ml = grid_point(ev, &(&iv.a + &step), &spacing, mode)?;
    if let Some(right) = Interval::new(ml.clone(), iv.b.clone()) {
        if root_free(ev, iv, &right, mode)? {
            return Ok(Interval::new(iv.a.clone(), ml));
        }
    }
    let mr = grid_point(ev, &(&iv.b - &step), &spacing, mode)?;
    if let Some(left) = Interval::new(iv.a.clone(), mr.clone()) {
        if root_free(ev, iv, &left, mode)? {
            return Ok(Interval::new(mr, iv.b.clone()));
        }
    }
    Ok(None)
}

/// Newton-Test: an interval of width at most `w(I)/N_I` holding every root
/// of `P` in `I`, or `None` if all probe pairs were discarded.
pub fn newton_test(p: &CoefficientOracle, ai: &ActiveInterval) -> Result<Option<Interval>> {
    Ok(newton_trace(p, ai)?.interval)
}

/// Newton-Test with its candidate pairs.
pub fn newton_trace(p: &CoefficientOracle, ai: &ActiveInterval) -> Result<NewtonTrace> {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    newton_test_in(&ev, ai, Mode::Full)
}

/// Boundary-Test: `(a, m_l*)` or `(m_r*, b)` when the rest of `I` is
/// certified root-free.
pub fn boundary_test(p: &CoefficientOracle, ai: &ActiveInterval) -> Result<Option<Interval>> {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    boundary_test_in(&ev, ai, Mode::Full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::dy;

    fn poly(v: &[i64]) -> CoefficientOracle {
        let c: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        CoefficientOracle::from_integer_poly(&c).unwrap()
    }

    fn active(a: Dyadic, b: Dyadic, level: u32) -> ActiveInterval {
        ActiveInterval::new(Interval::new(a, b).unwrap(), level)
    }

    fn within(iv: &Interval, x_num: i64, x_exp: i64) -> bool {
        iv.contains(&dy(x_num, x_exp))
    }

    #[test]
    fn levels() {
        let ai = active(Dyadic::zero(), Dyadic::one(), 1);
        assert_eq!(ai.n_factor(), dy(4, 0));
        let q = ai.quadratic(ai.interval.clone());
        assert_eq!(q.n_factor(), dy(16, 0));
        assert_eq!(q.linear(q.interval.clone()).level, 1);
        assert_eq!(ai.linear(ai.interval.clone()).level, 1);
    }

    #[test]
    fn two_point_examples() {
        assert_eq!(two_point_grid(&Dyadic::zero(), &Dyadic::one(), 2), (dy(-1, 0), dy(1, 0)));
        assert_eq!(two_point_grid(&dy(1, -1), &dy(1, -3), 3), (dy(1, -2), dy(3, -2)));
        let g = make_multipoint(&dy(1, -1), &dy(1, -3), 3).points;
        assert_eq!(two_point_grid(&dy(1, -1), &dy(1, -3), 3), (g[0].clone(), g[g.len() - 1].clone()));
    }

    #[test]
    fn mignotte_cluster() {
        let mut c = vec![BigInt::zero(); 17];
        c[16] = BigInt::one();
        c[2] = BigInt::from(-512);
        c[1] = BigInt::from(64);
        c[0] = BigInt::from(-2);
        let p = CoefficientOracle::from_integer_poly(&c).unwrap();
        let ai = active(dy(1, -8), dy(1, -2), 1);
        let out = newton_test(&p, &ai).unwrap().expect("cluster found");
        let w = ai.interval.width();
        assert!(out.width() <= w.mul_pow2(-2));
        assert!(out.width() >= w.mul_pow2(-5));
        // roots at 1/16 +- about 16^-9
        assert!(within(&out, 1, -4));
        let ev = Evaluator::new(&p, DEFAULT_PRECISION_CAP);
        assert_eq!(ev.sign(&out.a).unwrap(), ev.sign(&out.b).unwrap());
    }

    #[test]
    fn whole_polynomial_cluster() {
        // (x - 3/4 - 2^-30)(x - 3/4 - 2^-29)(x - 3/4 - 3 * 2^-30): k = n = 3
        let r: Vec<Dyadic> = (1..=3).map(|i| &dy(3, -2) + &dy(i, -30)).collect();
        let mut c = vec![Dyadic::one()];
        for x in &r {
            let mut next = vec![Dyadic::zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] = &next[i + 1] + ci;
                next[i] = &next[i] - &(ci * x);
            }
            c = next;
        }
        let p = CoefficientOracle::from_dyadic_poly(&c).unwrap();
        let ai = active(Dyadic::zero(), Dyadic::one(), 1);
        let out = newton_test(&p, &ai).unwrap().expect("cluster found");
        assert!(r.iter().all(|x| out.contains(x)));
        assert!(out.width() <= dy(1, -2));
    }

    #[test]
    fn separated_roots() {
        let p = CoefficientOracle::from_dyadic_poly(&[dy(3, -4), dy(-1, 0), Dyadic::one()]).unwrap();
        let ai = active(Dyadic::zero(), Dyadic::one(), 1);
        assert!(newton_test(&p, &ai).unwrap().is_none());
        assert!(boundary_test(&p, &ai).unwrap().is_none());
    }

    #[test]
    fn boundary_near_left() {
        let p = CoefficientOracle::from_dyadic_poly(&[dy(-1, -40), Dyadic::zero(), Dyadic::one()]).unwrap();
        let ai = active(dy(-1, -25), Dyadic::one(), 1);
        let out = boundary_test(&p, &ai).unwrap().expect("left cluster");
        assert_eq!(out.a, dy(-1, -25));
        let w = ai.interval.width();
        assert!(out.width() >= w.mul_pow2(-4) && out.width() <= w.mul_pow2(-2));
        assert!(within(&out, 1, -20));
    }

    #[test]
    fn sign_only_mode() {
        let p = poly(&[-2, 0, 1]);
        let ev = Evaluator::new(&p, DEFAULT_PRECISION_CAP);
        let ai = active(dy(5, -2), dy(3, -1), 1);
        let t = newton_test_in(&ev, &ai, Mode::SignOnly).unwrap();
        let out = t.interval.expect("single root");
        assert!(out.width() <= ai.interval.width().mul_pow2(-2));
        assert_ne!(ev.sign(&out.a).unwrap(), ev.sign(&out.b).unwrap());
    }

    #[test]
    fn candidates_bracket_newton_quotient() {
        let p = poly(&[-2, 0, 1]);
        let ai = active(dy(1, 0), dy(2, 0), 2);
        let t = newton_trace(&p, &ai).unwrap();
        assert!(!t.candidates.is_empty());
        for c in &t.candidates {
            for j in 0..2 {
                let x = &c.xi[j];
                let (v, dv) = (&(x * x) - &dy(2, 0), x.mul_pow2(1));
                // |A/A' - v/dv| < num/den, cross-multiplied
                let f = &c.v[j];
                let lhs = (&(&f.num * &dv) - &(&v * &f.den)).abs() * c.delta[j].den.clone();
                let rhs = &(&(&f.den * &dv).abs() * &c.delta[j].num);
                assert!(&lhs < rhs);
            }
        }
    }
}
