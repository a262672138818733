//! Coefficient oracles: the solver's view of a real polynomial.
//!
//! A polynomial is accessed only through quality-`L` approximations of its
//! coefficients. Integer and dyadic inputs are exact; rational inputs are
//! approximated by integer division with guard bits.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::dyadic::{Dyadic, Precision};
use crate::error::{Error, Result};

/// Raw coefficient provider. Coefficient `i` is the coefficient of `x^i`.
pub trait CoefficientSource: Send + Sync + fmt::Debug {
    fn degree(&self) -> usize;

    /// A dyadic within `2^-quality` of coefficient `i`. `quality` may be any
    /// integer; negative values ask for coarse approximations.
    fn approximate(&self, i: usize, quality: i64) -> Dyadic;

    /// The coefficients themselves, when they are dyadic.
    fn exact(&self) -> Option<&[Dyadic]> {
        None
    }
}

#[derive(Debug)]
struct DyadicSource(Vec<Dyadic>);

impl CoefficientSource for DyadicSource {
    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn approximate(&self, i: usize, _quality: i64) -> Dyadic {
        self.0[i].clone()
    }

    fn exact(&self) -> Option<&[Dyadic]> {
        Some(&self.0)
    }
}

#[derive(Debug)]
struct RationalSource {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

impl CoefficientSource for RationalSource {
    fn degree(&self) -> usize {
        self.num.len() - 1
    }

    fn approximate(&self, i: usize, quality: i64) -> Dyadic {
        let (p, q) = if self.den[i].is_negative() {
            (-&self.num[i], -&self.den[i])
        } else {
            (self.num[i].clone(), self.den[i].clone())
        };
        // floor(p * 2^g / q) * 2^-g with g = quality + 2 is within 2^-(quality+2)
        let g = quality + 2;
        let s = if g >= 0 { (p << g as u64).div_floor(&q) } else { p.div_floor(&(q << (-g) as u64)) };
        Dyadic::new(s, -g)
    }
}

fn is_power_of_two(q: &BigInt) -> bool {
    let m = q.magnitude();
    !m.is_zero() && m.trailing_zeros() == Some(m.bits() - 1)
}

/// Quality-`L` approximation of every coefficient of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxPolynomial {
    pub coeffs: Vec<Dyadic>,
    pub quality: Precision,
}

/// A real polynomial `sign * 2^-shift * S(x)` over a coefficient source `S`.
///
/// The shift and sign are applied exactly, so a normalized oracle has the
/// same roots as the source polynomial.
#[derive(Clone)]
pub struct CoefficientOracle {
    source: Arc<dyn CoefficientSource>,
    shift: i64,
    negate: bool,
    exact: Option<Arc<Vec<Dyadic>>>,
    tau_hint: Option<u64>,
}

impl fmt::Debug for CoefficientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientOracle")
            .field("degree", &self.degree())
            .field("shift", &self.shift)
            .field("negate", &self.negate)
            .field("tau_hint", &self.tau_hint)
            .finish()
    }
}

fn check_degree(len: usize) -> Result<()> {
    if len < 3 {
        return Err(Error::DegreeTooSmall(len.saturating_sub(1)));
    }
    Ok(())
}

impl CoefficientOracle {
    /// Oracle over an arbitrary source. The source's leading coefficient is
    /// assumed nonzero.
    pub fn from_source(source: Arc<dyn CoefficientSource>, tau_hint: Option<u64>) -> Result<Self> {
        if source.degree() < 2 {
            return Err(Error::DegreeTooSmall(source.degree()));
        }
        let exact = source.exact().map(|c| Arc::new(c.to_vec()));
        Ok(CoefficientOracle { source, shift: 0, negate: false, exact, tau_hint })
    }

    /// Oracle for `sum coeffs[i] x^i` with integer coefficients.
    pub fn from_integer_poly(coeffs: &[BigInt]) -> Result<Self> {
        let dy: Vec<Dyadic> = coeffs.iter().cloned().map(Dyadic::from_bigint).collect();
        Self::from_dyadic_poly(&dy)
    }

    /// Oracle for a polynomial with dyadic coefficients.
    pub fn from_dyadic_poly(coeffs: &[Dyadic]) -> Result<Self> {
        if coeffs.iter().all(Dyadic::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        if coeffs.last().is_some_and(Dyadic::is_zero) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        check_degree(coeffs.len())?;
        let tau = coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.ceil_log2())
            .max()
            .map(|t| t.max(0) as u64);
        Self::from_source(Arc::new(DyadicSource(coeffs.to_vec())), tau)
    }

    /// Oracle for `sum (num[i] / den[i]) x^i`.
    pub fn from_rational_poly(num: &[BigInt], den: &[BigInt]) -> Result<Self> {
        if num.len() != den.len() {
            return Err(Error::InvalidInput(format!(
                "{} numerators but {} denominators",
                num.len(),
                den.len()
            )));
        }
        if let Some(i) = den.iter().position(Zero::is_zero) {
            return Err(Error::ZeroDenominator(i));
        }
        if num.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        if num.last().is_some_and(Zero::is_zero) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        check_degree(num.len())?;
        let all_dyadic = den.iter().all(is_power_of_two);
        let src = RationalSource { num: num.to_vec(), den: den.to_vec() };
        if all_dyadic {
            let coeffs: Vec<Dyadic> = num
                .iter()
                .zip(den)
                .map(|(p, q)| {
                    let v = Dyadic::new(p.clone(), 1 - q.bits() as i64);
                    if q.is_negative() {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            return Self::from_dyadic_poly(&coeffs);
        }
        let tau = num
            .iter()
            .zip(den)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, q)| {
                let (f, _) = p.abs().div_rem(&q.abs());
                (f + 1u32).bits()
            })
            .max();
        Self::from_source(Arc::new(src), tau)
    }

    pub fn degree(&self) -> usize {
        self.source.degree()
    }

    /// Upper bound on `ceil(log2 max |coefficient|)` of the source polynomial.
    pub fn tau_hint(&self) -> Option<u64> {
        self.tau_hint
    }

    /// The exponent shift `t` applied by normalization.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_negated(&self) -> bool {
        self.negate
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact coefficients, when the source is dyadic.
    pub fn exact_coeffs(&self) -> Option<&[Dyadic]> {
        self.exact.as_deref().map(Vec::as_slice)
    }

    /// Coefficient `i` to within `2^-quality`. Exact sources return the exact
    /// value.
    pub fn coeff(&self, i: usize, quality: i64) -> Dyadic {
        if let Some(c) = &self.exact {
            return c[i].clone();
        }
        let raw = self.source.approximate(i, quality + 2 - self.shift).mul_pow2(-self.shift);
        let v = raw.round_to(quality + 1);
        if self.negate {
            -v
        } else {
            v
        }
    }

    /// All coefficients to within `2^-quality`, borrowed when exact.
    pub fn coeffs(&self, quality: i64) -> Cow<'_, [Dyadic]> {
        match &self.exact {
            Some(c) => Cow::Borrowed(c.as_slice()),
            None => Cow::Owned((0..=self.degree()).map(|i| self.coeff(i, quality)).collect()),
        }
    }

    /// A quality-`L` approximation of the whole polynomial.
    pub fn approximate(&self, quality: Precision) -> ApproxPolynomial {
        ApproxPolynomial { coeffs: self.coeffs(quality.as_i64()).into_owned(), quality }
    }

    fn with_normalization(&self, shift: i64, negate: bool) -> Self {
        let exact = self.exact.as_ref().map(|c| {
            Arc::new(
                c.iter()
                    .map(|x| {
                        let y = x.mul_pow2(-shift);
                        if negate {
                            -y
                        } else {
                            y
                        }
                    })
                    .collect(),
            )
        });
        CoefficientOracle {
            source: Arc::clone(&self.source),
            shift: self.shift + shift,
            negate: self.negate ^ negate,
            exact,
            tau_hint: self.tau_hint,
        }
    }

    /// Scales by `±2^-t` so that the leading coefficient lies in `[1/4, 1]`.
    ///
    /// Exact leading coefficients give `t = ceil(log2 |P_n|)`. Otherwise the
    /// leading coefficient is approximated with doubling quality until its
    /// magnitude is certified; `cap` bounds the quality tried.
    pub fn normalize_leading(&self, cap: u64) -> Result<(CoefficientOracle, i64)> {
        let n = self.degree();
        if let Some(c) = &self.exact {
            let lead = &c[n];
            if lead.is_zero() {
                return Err(Error::ZeroLeadingCoefficient);
            }
            let t = lead.ceil_log2();
            return Ok((self.with_normalization(t, lead.is_negative()), t));
        }
        let mut l: i64 = 1;
        loop {
            let c = self.coeff(n, l);
            if c.abs() >= Dyadic::pow2(2 - l) {
                let upper = &c.abs() + &Dyadic::pow2(-l);
                let t = upper.ceil_log2();
                return Ok((self.with_normalization(t, c.is_negative()), t));
            }
            if l as u64 >= cap {
                return Err(Error::PrecisionCap { what: "leading coefficient magnitude".into(), cap });
            }
            l = (2 * l).min(cap as i64);
        }
    }
}
