//! Möbius-transformed polynomials, sign variations and the 0- and 1-Tests.
//!
//! For `I = (a, b)` the transformed polynomial is
//! `P_I(x) = (x+1)^n P((a x + b) / (x + 1))`; its number of coefficient sign
//! variations bounds the number of roots in `I`. Approximations are built by
//! shifting by `a`, scaling by `w(I)`, reversing and shifting by one, in ball
//! arithmetic with a working precision that is raised until the requested
//! quality is met.
//!
//! Shifted polynomials `P(a + w x)` are cached per context interval, so tests
//! on subintervals of a recently seen interval only pay for shifts by short
//! dyadic ratios.

use std::fmt;
use std::rc::Rc;

use num_traits::Zero;

use crate::dyadic::{Dyadic, Precision};
use crate::error::Result;
use crate::eval::{ceil_log2_u64, make_multipoint, Ball, Evaluator, DEFAULT_PRECISION_CAP};
use crate::oracle::CoefficientOracle;

const BASE_CACHE: usize = 8;

/// Open interval `(a, b)` with `a < b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl Interval {
    pub fn new(a: Dyadic, b: Dyadic) -> Option<Self> {
        (a < b).then_some(Interval { a, b })
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.a, &self.b)
    }

    pub fn width(&self) -> Dyadic {
        &self.b - &self.a
    }

    /// Whether `other` is contained in the closure of `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.a < x && x < &self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Quality-`L` approximation of `P_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedPoly {
    pub coeffs: Vec<Dyadic>,
    pub quality: Precision,
}

impl TransformedPoly {
    pub fn sign_variations(&self) -> usize {
        sign_variations(self.coeffs.iter().map(Dyadic::signum))
    }

    /// Whether every coefficient exceeds `2^-quality` in absolute value.
    fn all_certified(&self) -> bool {
        let eps = Dyadic::pow2(-(self.quality.bits() as i64));
        self.coeffs.iter().all(|c| c.abs() > eps)
    }
}

/// Number of sign changes after deleting zeros.
pub fn sign_variations<I: IntoIterator<Item = i32>>(signs: I) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// `num / den` when it is a dyadic.
pub(crate) fn try_ratio(num: &Dyadic, den: &Dyadic) -> Option<Dyadic> {
    if num.is_zero() {
        return Some(Dyadic::zero());
    }
    let (q, r) = num_integer::Integer::div_rem(num.mantissa(), den.mantissa());
    r.is_zero().then(|| Dyadic::new(q, num.exponent() - den.exponent()))
}

/// Coefficients of `P(a + w x)` for a context interval, with error radii.
pub struct Base {
    a: Dyadic,
    b: Dyadic,
    bits: i64,
    coeffs: Vec<Ball>,
}

fn taylor_shift(c: &mut [Ball], s: &Ball, bits: i64) {
    let n = c.len() - 1;
    for i in 0..n {
        for j in (i..n).rev() {
            c[j] = c[j + 1].mul_add(s, &c[j], bits);
        }
    }
}

fn shift_by_one(c: &mut [Ball]) {
    let n = c.len() - 1;
    for i in 0..n {
        for j in (i..n).rev() {
            c[j] = c[j].add(&c[j + 1]);
        }
    }
}

fn scale(c: &mut [Ball], s: &Ball, bits: i64) {
    let mut pw = Ball::exact(Dyadic::one());
    for ci in c.iter_mut().skip(1) {
        pw = pw.mul(s, bits);
        *ci = ci.mul(&pw, bits);
    }
}

fn compute_base(ev: &Evaluator<'_>, ctx: &Interval, bits: i64) -> Base {
    let mut c = ev.coeff_balls(bits);
    if !ctx.a.is_zero() {
        taylor_shift(&mut c, &Ball::round_point(&ctx.a, bits), bits);
    }
    scale(&mut c, &Ball::round_point(&ctx.width(), bits), bits);
    Base { a: ctx.a.clone(), b: ctx.b.clone(), bits, coeffs: c }
}

fn base_for(ev: &Evaluator<'_>, ctx: &Interval, bits: i64) -> Rc<Base> {
    let mut cache = ev.bases.borrow_mut();
    if let Some(pos) = cache.iter().position(|b| b.a == ctx.a && b.b == ctx.b) {
        if cache[pos].bits >= bits {
            let hit = cache.remove(pos);
            cache.push(Rc::clone(&hit));
            return hit;
        }
        cache.remove(pos);
    }
    let base = Rc::new(compute_base(ev, ctx, bits));
    if cache.len() >= BASE_CACHE {
        cache.remove(0);
    }
    cache.push(Rc::clone(&base));
    base
}

/// `P_J` for `J = (a + r0 w, a + r1 w)` from the base of `(a, a + w)`.
fn derive(base: &Base, r0: &Dyadic, r1: &Dyadic) -> Vec<Ball> {
    let mut c = base.coeffs.clone();
    if !r0.is_zero() {
        taylor_shift(&mut c, &Ball::round_point(r0, base.bits), base.bits);
    }
    let s = r1 - r0;
    if s != Dyadic::one() {
        scale(&mut c, &Ball::round_point(&s, base.bits), base.bits);
    }
    c.reverse();
    shift_by_one(&mut c);
    c
}

fn initial_bits(n: i64, ctx: &Interval, l: i64) -> i64 {
    let growth = |x: &Dyadic| if x.is_zero() { 0 } else { x.ceil_log2().max(0) };
    let la = 1 + growth(&ctx.a).max(growth(&ctx.b));
    let lw = growth(&ctx.width());
    l + n + n * (la + lw) + ceil_log2_u64(n as u64 + 1) + 8
}

/// Quality-`l` approximations of `P_J` for each `J` in `subs`, computed from
/// the shifted polynomial of `ctx`, which must enclose every `J`.
pub(crate) fn transforms(ev: &Evaluator<'_>, ctx: &Interval, subs: &[Interval], l: i64) -> Vec<TransformedPoly> {
    ev.note_precision(l);
    let w = ctx.width();
    let ratios: Option<Vec<(Dyadic, Dyadic)>> = subs
        .iter()
        .map(|j| Some((try_ratio(&(&j.a - &ctx.a), &w)?, try_ratio(&(&j.b - &ctx.a), &w)?)))
        .collect();
    let Some(ratios) = ratios else {
        return subs.iter().flat_map(|j| transforms(ev, j, std::slice::from_ref(j), l)).collect();
    };
    let quality = Precision::new(l.max(1) as u64).expect("positive quality");
    let n = ev.degree() as i64;
    let mut bits = initial_bits(n, ctx, l);
    loop {
        let base = base_for(ev, ctx, bits);
        let derived: Vec<Vec<Ball>> = ratios.iter().map(|(r0, r1)| derive(&base, r0, r1)).collect();
        let worst = derived
            .iter()
            .flatten()
            .filter_map(|b| b.rad.ceil_log2())
            .max();
        match worst {
            Some(e) if e > -(l + 1) => bits = base.bits + e + l + 2,
            _ => {
                return derived
                    .into_iter()
                    .map(|c| TransformedPoly {
                        coeffs: c.into_iter().map(|b| b.mid.round_to(l + 1)).collect(),
                        quality,
                    })
                    .collect()
            }
        }
    }
}

/// Quality-`L` approximation of `P_I`.
pub fn transform_approx(p: &CoefficientOracle, interval: &Interval, quality: Precision) -> TransformedPoly {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    transforms(&ev, interval, std::slice::from_ref(interval), quality.bits() as i64).remove(0)
}

/// `M(-x)` clamp used by the test thresholds.
fn clamp_neg(x: i64) -> i64 {
    (-x).max(1)
}

/// 0-Test on `interval`, reusing the shifted polynomial of `ctx`.
///
/// `true` means the interval contains no root; `false` means
/// `var(P, interval) > 0`.
pub fn zero_test_in(ev: &Evaluator<'_>, ctx: &Interval, interval: &Interval) -> Result<bool> {
    let n = ev.degree() as i64;
    let ta = ev.magnitude(&interval.a)?;
    let tb = ev.magnitude(&interval.b)?;
    let l = clamp_neg((ta - 1).min(tb - 1)) + 2 * (n + 1) + 1;
    let m = interval.midpoint();
    let halves = [
        Interval { a: interval.a.clone(), b: m.clone() },
        Interval { a: m, b: interval.b.clone() },
    ];
    let polys = transforms(ev, ctx, &halves, l);
    let no_root = polys.iter().all(|p| p.sign_variations() == 0 && p.all_certified());
    ev.notify(|o| o.on_zero_test(interval, no_root));
    Ok(no_root)
}

/// Outcome of a 1-Test: the isolating subinterval if the test succeeded, and
/// the admissible split point it used either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneTest {
    pub isolated: Option<Interval>,
    pub split: Dyadic,
}

/// 1-Test on `interval`, reusing the shifted polynomial of `ctx`.
pub fn one_test_in(ev: &Evaluator<'_>, ctx: &Interval, interval: &Interval) -> Result<OneTest> {
    let n = ev.degree();
    let ta = ev.magnitude(&interval.a)?;
    let tb = ev.magnitude(&interval.b)?;
    let eps = interval.width().mul_pow2(-(ceil_log2_u64(n as u64) + 2));
    let grid = make_multipoint(&interval.midpoint(), &eps, n);
    let (i, t) = ev.admissible_point(&grid.points)?;
    let split = grid.points[i].clone();
    let l = clamp_neg((ta - 1).min(tb - 1).min(t - 1)) + 4 * n as i64 + 2;
    let parts = [
        Interval { a: interval.a.clone(), b: split.clone() },
        Interval { a: split.clone(), b: interval.b.clone() },
    ];
    let polys = transforms(ev, ctx, &parts, l);
    let isolated = if !polys.iter().all(TransformedPoly::all_certified) {
        None
    } else {
        match (polys[0].sign_variations(), polys[1].sign_variations()) {
            (1, 0) => Some(parts[0].clone()),
            (0, 1) => Some(parts[1].clone()),
            _ => None,
        }
    };
    ev.notify(|o| o.on_one_test(interval, isolated.as_ref()));
    Ok(OneTest { isolated, split })
}

/// Whether `interval` certainly contains no root. Requires `P(a), P(b) != 0`.
pub fn zero_test(p: &CoefficientOracle, interval: &Interval) -> Result<bool> {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    zero_test_in(&ev, interval, interval)
}

/// A subinterval isolating the unique root of `interval`, or `None` when
/// `var(P, interval) != 1`. Requires `P(a), P(b) != 0`.
pub fn one_test(p: &CoefficientOracle, interval: &Interval) -> Result<Option<Interval>> {
    let ev = Evaluator::new(p, DEFAULT_PRECISION_CAP);
    Ok(one_test_in(&ev, interval, interval)?.isolated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::dy;
    use num_bigint::BigInt;

    fn poly(v: &[i64]) -> CoefficientOracle {
        let c: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        CoefficientOracle::from_integer_poly(&c).unwrap()
    }

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(Dyadic::from_i64(a), Dyadic::from_i64(b)).unwrap()
    }

    #[test]
    fn variation_examples() {
        assert_eq!(sign_variations([-1, 0, 0, 2, 0, -1]), 2);
        assert_eq!(sign_variations([1, 1, 1]), 0);
        assert_eq!(sign_variations([1, -1, 1, -1]), 3);
    }

    #[test]
    fn transform_examples() {
        let q = Precision::new(30).unwrap();
        // x^2 - 2 on (1, 2): (x+2)^2 - 2(x+1)^2 = 2 - x^2
        let t = transform_approx(&poly(&[-2, 0, 1]), &iv(1, 2), q);
        assert_eq!(t.coeffs, vec![dy(2, 0), Dyadic::zero(), dy(-1, 0)]);
        assert_eq!(t.sign_variations(), 1);
        // x(x - 1/2) on (0, 1): (x+1)^2 P(1/(x+1)) = 1/2 - x/2
        let p = CoefficientOracle::from_dyadic_poly(&[Dyadic::zero(), dy(-1, -1), Dyadic::one()]).unwrap();
        let t = transform_approx(&p, &iv(0, 1), q);
        assert_eq!(t.coeffs, vec![dy(1, -1), dy(-1, -1), Dyadic::zero()]);
        assert_eq!(t.sign_variations(), 1);
    }

    #[test]
    fn zero_test_examples() {
        let p = poly(&[-2, 0, 1]);
        assert!(zero_test(&p, &iv(0, 1)).unwrap());
        assert!(!zero_test(&p, &iv(1, 2)).unwrap());
        assert!(zero_test(&p, &iv(3, 4)).unwrap());
    }

    #[test]
    fn one_test_examples() {
        let p = poly(&[-2, 0, 1]);
        let j = one_test(&p, &iv(1, 2)).unwrap().expect("isolates sqrt 2");
        let w = j.width();
        assert!(w >= dy(1, -2) && w <= dy(3, -2));
        let ev = Evaluator::new(&p, DEFAULT_PRECISION_CAP);
        assert_ne!(ev.sign(&j.a).unwrap(), ev.sign(&j.b).unwrap());
        assert!(one_test(&p, &iv(-2, 2)).unwrap().is_none());
        assert!(one_test(&p, &iv(3, 4)).unwrap().is_none());
    }

    #[test]
    fn ratios() {
        assert_eq!(try_ratio(&dy(3, -4), &dy(3, -2)), Some(dy(1, -2)));
        assert_eq!(try_ratio(&dy(1, -4), &dy(3, -2)), None);
    }
}
