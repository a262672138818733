//! Adaptive-precision evaluation, magnitude estimation and admissible points.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

#[cfg(test)]
use num_bigint::BigInt;

use crate::dyadic::{Dyadic, Mag, Precision};
use crate::error::{Error, Result};
use crate::observe::Observer;
use crate::oracle::CoefficientOracle;

/// Default cap on any single precision-doubling loop, in bits.
pub const DEFAULT_PRECISION_CAP: u64 = 1 << 20;

/// Midpoint-radius enclosure.
#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: Dyadic,
    pub rad: Mag,
}

impl Ball {
    pub fn exact(mid: Dyadic) -> Ball {
        Ball { mid, rad: Mag::ZERO }
    }

    /// Sum without rounding.
    pub fn add(&self, o: &Ball) -> Ball {
        Ball { mid: &self.mid + &o.mid, rad: self.rad.add(o.rad) }
    }

    /// `self * x`, with the midpoint rounded to `w` fractional bits.
    pub fn mul(&self, x: &Ball, w: i64) -> Ball {
        self.mul_add(x, &Ball::exact(Dyadic::zero()), w)
    }

    /// `self * x + c`, with the midpoint rounded to `w` fractional bits.
    pub fn mul_add(&self, x: &Ball, c: &Ball, w: i64) -> Ball {
        let mid = &(&self.mid * &x.mid) + &c.mid;
        let mut rad = Mag::from_dyadic(&self.mid)
            .mul(x.rad)
            .add(Mag::from_dyadic(&x.mid).mul(self.rad))
            .add(self.rad.mul(x.rad))
            .add(c.rad);
        let mid = if mid.exponent() < -w {
            rad = rad.add(Mag::pow2(-w - 1));
            mid.round_to(w)
        } else {
            mid
        };
        Ball { mid, rad }
    }

    /// `x` rounded to `w` fractional bits.
    pub fn round_point(x: &Dyadic, w: i64) -> Ball {
        if x.exponent() < -w {
            Ball { mid: x.round_to(w), rad: Mag::pow2(-w - 1) }
        } else {
            Ball::exact(x.clone())
        }
    }
}

/// Evaluation context for one oracle: precision cap, statistics, caches of
/// magnitude estimates and shifted polynomials, and an optional observer.
pub struct Evaluator<'a> {
    oracle: &'a CoefficientOracle,
    cap: u64,
    max_bits: Cell<u64>,
    evaluations: Cell<u64>,
    magnitudes: RefCell<HashMap<Dyadic, i64>>,
    signs: RefCell<HashMap<Dyadic, i32>>,
    pub(crate) bases: RefCell<Vec<Rc<crate::descartes::Base>>>,
    observer: RefCell<Option<&'a mut dyn Observer>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(oracle: &'a CoefficientOracle, cap: u64) -> Self {
        Evaluator {
            oracle,
            cap,
            max_bits: Cell::new(0),
            evaluations: Cell::new(0),
            magnitudes: RefCell::new(HashMap::new()),
            signs: RefCell::new(HashMap::new()),
            bases: RefCell::new(Vec::new()),
            observer: RefCell::new(None),
        }
    }

    pub fn with_observer(oracle: &'a CoefficientOracle, cap: u64, observer: &'a mut dyn Observer) -> Self {
        let ev = Evaluator::new(oracle, cap);
        *ev.observer.borrow_mut() = Some(observer);
        ev
    }

    pub(crate) fn notify(&self, f: impl FnOnce(&mut dyn Observer)) {
        if let Some(o) = self.observer.borrow_mut().as_mut() {
            f(&mut **o);
        }
    }

    pub fn oracle(&self) -> &'a CoefficientOracle {
        self.oracle
    }

    pub fn degree(&self) -> usize {
        self.oracle.degree()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Largest quality requested so far.
    pub fn max_precision_bits(&self) -> u64 {
        self.max_bits.get()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.get()
    }

    pub(crate) fn note_precision(&self, bits: i64) {
        if bits > 0 && bits as u64 > self.max_bits.get() {
            self.max_bits.set(bits as u64);
        }
    }

    pub(crate) fn cap_error(&self, what: impl Into<String>) -> Error {
        Error::PrecisionCap { what: what.into(), cap: self.cap }
    }

    pub(crate) fn coeff_balls(&self, w: i64) -> Vec<Ball> {
        let exact = self.oracle.is_exact();
        let err = if exact { Mag::ZERO } else { Mag::pow2(-w) };
        self.oracle.coeffs(w).iter().map(|c| Ball { mid: c.clone(), rad: err }).collect()
    }

    fn initial_bits(&self, x: &Dyadic, l: i64) -> i64 {
        let n = self.degree() as i64;
        let growth = if x.is_zero() { 0 } else { x.ceil_log2().max(0) };
        l + 4 + ceil_log2_u64(n as u64 + 1) + n * growth
    }

    /// Horner enclosure of `P(x)` (and `P'(x)` if asked) with working
    /// precision `w`.
    fn horner(&self, x: &Dyadic, w: i64, derivative: bool) -> (Ball, Ball) {
        self.evaluations.set(self.evaluations.get() + 1);
        let c = self.coeff_balls(w);
        let xb = Ball::round_point(x, w);
        let n = c.len() - 1;
        let mut y = c[n].clone();
        let mut d = Ball::exact(Dyadic::zero());
        for ci in c[..n].iter().rev() {
            if derivative {
                d = d.mul_add(&xb, &y, w);
            }
            y = y.mul_add(&xb, ci, w);
        }
        (y, d)
    }

    fn adaptive(&self, x: &Dyadic, l: i64, derivative: bool) -> (Dyadic, Dyadic) {
        let mut w = self.initial_bits(x, l);
        loop {
            let (y, d) = self.horner(x, w, derivative);
            let worst = if derivative { max_log(y.rad, d.rad) } else { y.rad.ceil_log2() };
            match worst {
                Some(e) if e > -(l + 1) => {
                    // radius scales like 2^-w: shift by the observed excess
                    w += e + l + 2;
                }
                _ => return (y.mid.round_to(l + 1), d.mid.round_to(l + 1)),
            }
        }
    }

    /// `ỹ` with `|P(x) - ỹ| <= 2^-l`.
    pub fn eval_approx(&self, x: &Dyadic, l: i64) -> Dyadic {
        self.note_precision(l);
        self.adaptive(x, l, false).0
    }

    /// Approximations of `P(x)` and `P'(x)`, each within `2^-l`.
    pub fn eval_with_derivative(&self, x: &Dyadic, l: i64) -> (Dyadic, Dyadic) {
        self.note_precision(l);
        self.adaptive(x, l, true)
    }

    /// Integer `t` with `2^(t-1) <= |P(x)| <= 2^(t+1)`.
    pub fn magnitude(&self, x: &Dyadic) -> Result<i64> {
        if let Some(&t) = self.magnitudes.borrow().get(x) {
            return Ok(t);
        }
        let mut l: i64 = 1;
        loop {
            let y = self.eval_approx(x, l);
            if !y.is_zero() && y.abs() >= Dyadic::pow2(2 - l) {
                let t = y.log2_round();
                self.magnitudes.borrow_mut().insert(x.clone(), t);
                return Ok(t);
            }
            if l as u64 >= self.cap {
                return Err(self.cap_error(format!("magnitude of P at {x}")));
            }
            l = (2 * l).min(self.cap as i64);
        }
    }

    /// Sign of `P(x)`, which must be nonzero.
    pub fn sign(&self, x: &Dyadic) -> Result<i32> {
        if let Some(&s) = self.signs.borrow().get(x) {
            return Ok(s);
        }
        let mut l: i64 = 1;
        loop {
            let y = self.eval_approx(x, l);
            if y.abs() > Dyadic::pow2(-l) {
                self.signs.borrow_mut().insert(x.clone(), y.signum());
                return Ok(y.signum());
            }
            if l as u64 >= self.cap {
                return Err(self.cap_error(format!("sign of P at {x}")));
            }
            l = (2 * l).min(self.cap as i64);
        }
    }

    /// Index `i*` with `|P(x_i*)| >= max_i |P(x_i)| / 4`, and `t` with
    /// `2^(t-1) <= |P(x_i*)| <= max_i |P(x_i)| <= 2^(t+1)`. Ties go to the
    /// lowest index.
    pub fn admissible_point(&self, xs: &[Dyadic]) -> Result<(usize, i64)> {
        assert!(!xs.is_empty(), "admissible point of an empty set");
        let mut l: i64 = 1;
        loop {
            let vals: Vec<Dyadic> = xs.iter().map(|x| self.eval_approx(x, l).abs()).collect();
            let mut best = 0;
            for (i, v) in vals.iter().enumerate() {
                if *v > vals[best] {
                    best = i;
                }
            }
            let lam = &vals[best];
            if !lam.is_zero() && *lam >= Dyadic::pow2(2 - l) {
                return Ok((best, lam.log2_round()));
            }
            if l as u64 >= self.cap {
                return Err(self.cap_error("admissible point"));
            }
            l = (2 * l).min(self.cap as i64);
        }
    }
}

fn max_log(a: Mag, b: Mag) -> Option<i64> {
    match (a.ceil_log2(), b.ceil_log2()) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub(crate) fn ceil_log2_u64(v: u64) -> i64 {
    if v <= 1 {
        0
    } else {
        64 - i64::from((v - 1).leading_zeros())
    }
}

/// `2^(t-1) <= |value| <= 2^(t+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagnitudeEstimate {
    pub t: i64,
}

/// The points `m + (i - ceil(n/2)) * eps` for `i = 0..=2*ceil(n/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multipoint {
    pub center: Dyadic,
    pub spacing: Dyadic,
    pub points: Vec<Dyadic>,
}

pub fn make_multipoint(m: &Dyadic, eps: &Dyadic, n: usize) -> Multipoint {
    assert!(eps.is_positive(), "multipoint spacing must be positive");
    let half = n.div_ceil(2) as i64;
    let points = (-half..=half).map(|k| m + &(eps * &Dyadic::from_i64(k))).collect();
    Multipoint { center: m.clone(), spacing: eps.clone(), points }
}

/// Admissible point of a multipoint grid, as a point and magnitude.
pub fn admissible_in(ev: &Evaluator<'_>, xs: &[Dyadic]) -> Result<(Dyadic, i64)> {
    let (i, t) = ev.admissible_point(xs)?;
    Ok((xs[i].clone(), t))
}

/// `ỹ` within `2^-L` of `P(x0)`.
pub fn eval_approx(p: &CoefficientOracle, x0: &Dyadic, quality: Precision) -> Dyadic {
    Evaluator::new(p, DEFAULT_PRECISION_CAP).eval_approx(x0, quality.bits() as i64)
}

/// Magnitude estimate of `P(x0)`; fails at the cap when `P(x0) = 0`.
pub fn magnitude(p: &CoefficientOracle, x0: &Dyadic, precision_cap: Option<u64>) -> Result<MagnitudeEstimate> {
    let ev = Evaluator::new(p, precision_cap.unwrap_or(DEFAULT_PRECISION_CAP));
    ev.magnitude(x0).map(|t| MagnitudeEstimate { t })
}

/// Admissible point of `xs` and its magnitude estimate.
pub fn admissible_point(p: &CoefficientOracle, xs: &[Dyadic]) -> Result<(Dyadic, i64)> {
    admissible_in(&Evaluator::new(p, DEFAULT_PRECISION_CAP), xs)
}

/// Exact `c * 2^k` as a dyadic, for small integer constants.
#[cfg(test)]
pub(crate) fn dy(c: i64, k: i64) -> Dyadic {
    Dyadic::new(BigInt::from(c), k)
}
