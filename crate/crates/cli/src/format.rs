//! JSON input and output.
//!
//! A polynomial is either dense, `{"coeffs": [c0, c1, ...]}` with the constant
//! term first, or sparse, `{"degree": n, "terms": [[exp, coeff], ...]}`. A
//! coefficient is an integer (JSON number or decimal string), a rational
//! `[num, den]` or a dyadic `{"m": mantissa, "e": exponent}`.
//!
//! A file holds one polynomial, `{"polynomial": {...}, "intervals": [...]}`,
//! or `{"polynomials": [...]}`. Polynomials may carry a `"name"`.

use std::path::Path;

use anewdsc::descartes::Interval;
use anewdsc::{CoefficientOracle, Dyadic};
use anewdsc_reference::{rat, ExactPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Dyadic(Dyadic),
}

impl Coeff {
    fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(v) | Coeff::Rational(v, _) => v.is_zero(),
            Coeff::Dyadic(d) => d.is_zero(),
        }
    }

    fn exact(&self) -> BigRational {
        match self {
            Coeff::Int(v) => BigRational::from_integer(v.clone()),
            Coeff::Rational(p, q) => BigRational::new(p.clone(), q.clone()),
            Coeff::Dyadic(d) => rat(d),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Coeff::Int(v) => int_json(v),
            Coeff::Rational(p, q) => json!([int_json(p), int_json(q)]),
            Coeff::Dyadic(d) => json!({"m": int_json(d.mantissa()), "e": d.exponent()}),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub name: Option<String>,
    /// Constant term first; the last entry is nonzero.
    pub coeffs: Vec<Coeff>,
}

impl Polynomial {
    pub fn from_ints(name: Option<String>, c: Vec<BigInt>) -> Self {
        Polynomial { name, coeffs: c.into_iter().map(Coeff::Int).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("degree-{}", self.degree()))
    }

    pub fn to_exact(&self) -> ExactPoly {
        ExactPoly::new(self.coeffs.iter().map(Coeff::exact).collect())
    }

    pub fn to_oracle(&self) -> Result<CoefficientOracle> {
        let c = &self.coeffs;
        if c.iter().all(|x| matches!(x, Coeff::Int(_))) {
            let v: Vec<BigInt> = c.iter().map(|x| if let Coeff::Int(v) = x { v.clone() } else { unreachable!() }).collect();
            return Ok(CoefficientOracle::from_integer_poly(&v)?);
        }
        if c.iter().any(|x| matches!(x, Coeff::Rational(..))) {
            let (num, den): (Vec<BigInt>, Vec<BigInt>) = c
                .iter()
                .map(|x| match x {
                    Coeff::Rational(p, q) => (p.clone(), q.clone()),
                    other => {
                        let r = other.exact();
                        (r.numer().clone(), r.denom().clone())
                    }
                })
                .unzip();
            return Ok(CoefficientOracle::from_rational_poly(&num, &den)?);
        }
        let v: Vec<Dyadic> = c
            .iter()
            .map(|x| match x {
                Coeff::Int(v) => Dyadic::from_bigint(v.clone()),
                Coeff::Dyadic(d) => d.clone(),
                Coeff::Rational(..) => unreachable!(),
            })
            .collect();
        Ok(CoefficientOracle::from_dyadic_poly(&v)?)
    }

    /// Square-free part with coprime integer coefficients.
    pub fn square_free(&self) -> Result<Polynomial> {
        let s = anewdsc_reference::square_free_part(&self.to_exact());
        let ints = s.to_ints().expect("primitive part is integral");
        let p = Polynomial::from_ints(self.name.clone(), ints);
        check(&p)?;
        Ok(p)
    }

    /// Sparse form when fewer than half of the coefficients are nonzero.
    pub fn to_json(&self) -> Value {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        let mut v = if 2 * nonzero < self.coeffs.len() {
            let terms: Vec<Value> = self
                .coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| json!([i, c.to_json()]))
                .collect();
            json!({"degree": self.degree(), "terms": terms})
        } else {
            json!({"coeffs": self.coeffs.iter().map(Coeff::to_json).collect::<Vec<_>>()})
        };
        if let Some(n) = &self.name {
            v["name"] = json!(n);
        }
        v
    }
}

/// Integers that fit in `i64` stay JSON numbers; larger ones become strings.
fn int_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                n.to_string().parse().map_err(|_| schema(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| schema(format!("'{s}' is not an integer"))),
        other => Err(schema(format!("expected an integer, found {other}"))),
    }
}

fn parse_coeff(v: &Value) -> Result<Coeff> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Coeff::Rational(parse_int(&a[0])?, parse_int(&a[1])?)),
        Value::Array(a) => Err(schema(format!("rational coefficient needs [num, den], got {} entries", a.len()))),
        Value::Object(_) => Ok(Coeff::Dyadic(parse_dyadic(v)?)),
        _ => Ok(Coeff::Int(parse_int(v)?)),
    }
}

pub fn parse_dyadic(v: &Value) -> Result<Dyadic> {
    let m = v.get("m").ok_or_else(|| schema("dyadic needs an 'm' field"))?;
    let e = v.get("e").and_then(Value::as_i64).ok_or_else(|| schema("dyadic needs an integer 'e' field"))?;
    Ok(Dyadic::new(parse_int(m)?, e))
}

fn check(p: &Polynomial) -> Result<()> {
    for (i, c) in p.coeffs.iter().enumerate() {
        if let Coeff::Rational(_, q) = c {
            if q.is_zero() {
                return Err(CliError::ZeroDenominator(i));
            }
        }
    }
    if p.coeffs.last().is_none_or(Coeff::is_zero) {
        return Err(CliError::ZeroLeading);
    }
    if p.degree() < 2 {
        return Err(CliError::Degree(p.degree()));
    }
    Ok(())
}

pub fn parse_polynomial(v: &Value) -> Result<Polynomial> {
    let name = v.get("name").and_then(Value::as_str).map(str::to_owned);
    let coeffs = if let Some(c) = v.get("coeffs") {
        let c = c.as_array().ok_or_else(|| schema("'coeffs' must be an array"))?;
        c.iter().map(parse_coeff).collect::<Result<Vec<_>>>()?
    } else if let Some(t) = v.get("terms") {
        let n = v.get("degree").and_then(Value::as_u64).ok_or_else(|| schema("sparse form needs an integer 'degree'"))?;
        let n = usize::try_from(n).map_err(|_| schema("degree too large"))?;
        let mut c = vec![Coeff::Int(BigInt::zero()); n + 1];
        let mut seen = vec![false; n + 1];
        for term in t.as_array().ok_or_else(|| schema("'terms' must be an array"))? {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(|| schema("each term is [exp, coeff]"))?;
            let e = pair[0].as_u64().ok_or_else(|| schema("term exponent must be a nonnegative integer"))? as usize;
            if e > n {
                return Err(schema(format!("exponent {e} exceeds degree {n}")));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(schema(format!("exponent {e} appears twice")));
            }
            c[e] = parse_coeff(&pair[1])?;
        }
        c
    } else {
        return Err(schema("polynomial needs 'coeffs' or 'degree' and 'terms'"));
    };
    let p = Polynomial { name, coeffs };
    check(&p)?;
    Ok(p)
}

/// Contents of an input file.
#[derive(Clone, Debug)]
pub struct Document {
    pub polynomials: Vec<Polynomial>,
    /// Isolating intervals for the single polynomial, if given.
    pub intervals: Option<Vec<Interval>>,
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text)?;
    if let Some(list) = v.get("polynomials") {
        let list = list.as_array().ok_or_else(|| schema("'polynomials' must be an array"))?;
        let polynomials = list.iter().map(parse_polynomial).collect::<Result<Vec<_>>>()?;
        return Ok(Document { polynomials, intervals: None });
    }
    let p = parse_polynomial(v.get("polynomial").unwrap_or(&v))?;
    let intervals = match v.get("intervals") {
        None => None,
        Some(list) => Some(
            list.as_array()
                .ok_or_else(|| schema("'intervals' must be an array"))?
                .iter()
                .map(parse_interval)
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(Document { polynomials: vec![p], intervals })
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    parse_document(&text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicOut {
    /// Mantissa as a decimal string.
    pub m: String,
    pub e: i64,
}

impl From<&Dyadic> for DyadicOut {
    fn from(d: &Dyadic) -> Self {
        DyadicOut { m: d.mantissa().to_string(), e: d.exponent() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalOut {
    pub lo: DyadicOut,
    pub hi: DyadicOut,
    pub decimal_hint: String,
}

impl From<&Interval> for IntervalOut {
    fn from(i: &Interval) -> Self {
        IntervalOut { lo: (&i.a).into(), hi: (&i.b).into(), decimal_hint: decimal_hint(i) }
    }
}

/// Midpoint in decimal with a radius that covers the whole interval.
pub fn decimal_hint(i: &Interval) -> String {
    // 10^-d >= width, so d - 1 digits and radius 10^(1-d) cover the midpoint
    // truncation plus half the width
    let lw = i.width().ceil_log2();
    let d = ((-lw).max(0) as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let digits = d.saturating_sub(1).min(60);
    let s = i.midpoint().to_decimal(digits);
    let body = s.split(" ± ").next().unwrap_or(&s);
    if d <= 1 {
        let r = (i.width().abs().ceil_log2().max(0) as f64 * std::f64::consts::LOG10_2).ceil() as i32;
        format!("{body} ± 1e{}", r.max(1))
    } else {
        format!("{body} ± 1e-{digits}")
    }
}

pub fn parse_interval(v: &Value) -> Result<Interval> {
    let lo = parse_dyadic(v.get("lo").ok_or_else(|| schema("interval needs 'lo'"))?)?;
    let hi = parse_dyadic(v.get("hi").ok_or_else(|| schema("interval needs 'hi'"))?)?;
    Interval::new(lo.clone(), hi.clone()).ok_or_else(|| schema(format!("empty interval ({lo}, {hi})")))
}

/// `2^k` as an exact rational.
pub fn pow2_rat(k: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << k.unsigned_abs());
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}
