//! Exact rational polynomial arithmetic for checking solver output.
//!
//! Everything here is deliberately naive: Sturm sequences for root counting,
//! Möbius transforms by direct expansion, Bernstein coefficients by
//! de Casteljau subdivision, and square-free parts by Euclid's algorithm.

use std::fmt;

use anewdsc::descartes::Interval;
use anewdsc::{CoefficientOracle, Dyadic};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RefError {
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("endpoint {0} is a root")]
    EndpointRoot(String),
    #[error("empty interval")]
    EmptyInterval,
}

pub fn rat(x: &Dyadic) -> BigRational {
    let m = BigRational::from_integer(x.mantissa().clone());
    let p = BigRational::from_integer(BigInt::one() << x.exponent().unsigned_abs());
    if x.exponent() >= 0 {
        m * p
    } else {
        m / p
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Polynomial with rational coefficients, lowest degree first, without
/// trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactPoly {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "ExactPoly[{}]", parts.join(", "))
    }
}

impl ExactPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ExactPoly { coeffs }
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn from_dyadics(c: &[Dyadic]) -> Self {
        Self::new(c.iter().map(rat).collect())
    }

    /// `prod (x - r)` over `roots`.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        let mut p = ExactPoly::new(vec![BigRational::one()]);
        for r in roots {
            p = p.mul(&ExactPoly::new(vec![-r.clone(), BigRational::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        int_sign_at(&int_multiple(self), x)
    }

    pub fn derivative(&self) -> ExactPoly {
        ExactPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, o: &ExactPoly) -> ExactPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        ExactPoly::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &ExactPoly) -> ExactPoly {
        if self.is_zero() || o.is_zero() {
            return ExactPoly::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPoly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> ExactPoly {
        ExactPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &ExactPoly) -> (ExactPoly, ExactPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dn = d.degree();
        let lead = d.leading();
        if r.len() < d.coeffs.len() {
            return (ExactPoly::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dn);
        (ExactPoly::new(q), ExactPoly::new(r))
    }

    /// Positive rational multiple with coprime integer coefficients and a
    /// positive leading coefficient.
    pub fn primitive(&self) -> ExactPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        ExactPoly::from_ints(&ints.iter().map(|c| c / &g).collect::<Vec<_>>())
    }

    /// Integer coefficients; `None` if some coefficient is not integral.
    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn to_oracle(&self) -> anewdsc::Result<CoefficientOracle> {
        let num: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer().clone()).collect();
        let den: Vec<BigInt> = self.coeffs.iter().map(|c| c.denom().clone()).collect();
        CoefficientOracle::from_rational_poly(&num, &den)
    }
}

/// Integer coefficients, lowest degree first, without trailing zeros.
type IntPoly = Vec<BigInt>;

fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Positive integer multiple of `p` with coprime coefficients.
fn int_multiple(p: &ExactPoly) -> IntPoly {
    let q = p.primitive();
    let v = q.to_ints().expect("primitive part is integral");
    if p.leading().signum() == q.leading().signum() {
        v
    } else {
        v.into_iter().map(|c| -c).collect()
    }
}

/// Divides by the positive gcd of the coefficients.
fn strip_content(v: IntPoly) -> IntPoly {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|c| c / &g).collect()
    }
}

/// A positive multiple of the remainder of `a` modulo `b`, content removed.
fn pos_rem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let s = lb.abs();
    let neg = lb.is_negative();
    let mut r = a.to_vec();
    while r.len() > db {
        // r <- |lb| r - sign(lb) lc(r) x^k b cancels the leading term
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let f = if neg { -lr } else { lr };
        for c in r.iter_mut() {
            *c *= &s;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &f * bj;
        }
        r = trim(r);
    }
    strip_content(r)
}

fn int_to_exact(v: &[BigInt]) -> ExactPoly {
    ExactPoly::from_ints(v)
}

pub fn gcd(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_zero() {
        return b.primitive();
    }
    let (mut x, mut y) = (int_multiple(a), int_multiple(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pos_rem(&x, &y);
        x = y;
        y = r;
    }
    int_to_exact(&x).primitive()
}

/// `p / gcd(p, p')` as a primitive integer polynomial.
pub fn square_free_part(p: &ExactPoly) -> ExactPoly {
    if p.degree() == 0 {
        return p.primitive();
    }
    let g = gcd(p, &p.derivative());
    p.div_rem(&g).0.primitive()
}

pub fn is_square_free(p: &ExactPoly) -> bool {
    gcd(p, &p.derivative()).degree() == 0
}

/// Sturm sequence with every member scaled by a positive integer.
fn sturm_sequence(p: &ExactPoly) -> Vec<IntPoly> {
    let mut seq = vec![int_multiple(p), int_multiple(&p.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            return seq;
        }
        let r = pos_rem(&seq[n - 2], &seq[n - 1]);
        seq.push(r.into_iter().map(|c| -c).collect());
    }
}

/// Sign of `v(x)` for an integer polynomial `v`.
fn int_sign_at(v: &[BigInt], x: &BigRational) -> i32 {
    // q^d v(p / q) with q > 0 has the sign of v(p / q)
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qk = BigInt::one();
    for c in v.iter().rev() {
        acc = acc * p + c * &qk;
        qk *= q;
    }
    sign_of(&acc)
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm sequence of a nonzero polynomial, built once for repeated counts.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &ExactPoly) -> Result<Self, RefError> {
        if p.is_zero() {
            return Err(RefError::ZeroPolynomial);
        }
        Ok(Sturm { seq: sturm_sequence(p) })
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> Result<usize, RefError> {
        if a >= b {
            return Err(RefError::EmptyInterval);
        }
        for x in [a, b] {
            if int_sign_at(&self.seq[0], x) == 0 {
                return Err(RefError::EndpointRoot(x.to_string()));
            }
        }
        let va = variations(self.seq.iter().map(|q| int_sign_at(q, a)));
        let vb = variations(self.seq.iter().map(|q| int_sign_at(q, b)));
        Ok(va - vb)
    }
}

/// Number of distinct real roots of `p` in the open interval `(a, b)`.
pub fn sturm_count(p: &ExactPoly, a: &BigRational, b: &BigRational) -> Result<usize, RefError> {
    Sturm::new(p)?.count(a, b)
}

/// Number of distinct real roots of `p`.
pub fn real_root_count(p: &ExactPoly) -> Result<usize, RefError> {
    if p.is_zero() {
        return Err(RefError::ZeroPolynomial);
    }
    let seq = sturm_sequence(p);
    let at_pos = |q: &IntPoly| sign_of(q.last().expect("nonzero member"));
    let at_neg = |q: &IntPoly| if q.len() % 2 == 1 { at_pos(q) } else { -at_pos(q) };
    Ok(variations(seq.iter().map(at_neg)) - variations(seq.iter().map(at_pos)))
}

/// `(x+1)^n P((a x + b) / (x + 1))` with `n = deg P`, as `n + 1` coefficients.
pub fn exact_transform(p: &ExactPoly, a: &BigRational, b: &BigRational) -> Vec<BigRational> {
    let n = p.degree();
    let lin = ExactPoly::new(vec![b.clone(), a.clone()]);
    let one_plus = ExactPoly::new(vec![BigRational::one(), BigRational::one()]);
    let mut lin_pow = vec![ExactPoly::new(vec![BigRational::one()])];
    let mut one_pow = vec![ExactPoly::new(vec![BigRational::one()])];
    for _ in 0..n {
        lin_pow.push(lin_pow.last().unwrap().mul(&lin));
        one_pow.push(one_pow.last().unwrap().mul(&one_plus));
    }
    let mut acc = ExactPoly::new(Vec::new());
    for (i, c) in p.coeffs.iter().enumerate() {
        acc = acc.add(&lin_pow[i].mul(&one_pow[n - i]).scale(c));
    }
    let mut out = acc.coeffs;
    out.resize(n + 1, BigRational::zero());
    out
}

pub fn exact_transform_on(p: &ExactPoly, iv: &Interval) -> Vec<BigRational> {
    exact_transform(p, &rat(&iv.a), &rat(&iv.b))
}

/// Sign variations of a rational sequence.
pub fn sign_variations(c: &[BigRational]) -> usize {
    variations(c.iter().map(|x| if x.is_zero() { 0 } else if x.is_positive() { 1 } else { -1 }))
}

/// `var(P, (a, b))`.
pub fn descartes_var(p: &ExactPoly, a: &BigRational, b: &BigRational) -> usize {
    let t = transform_ints(p, a, b);
    variations(t.iter().map(sign_of))
}

/// A positive multiple of [`exact_transform`] with integer coefficients,
/// computed by Taylor shifts instead of expansion.
pub fn transform_ints(p: &ExactPoly, a: &BigRational, b: &BigRational) -> Vec<BigInt> {
    if p.is_zero() {
        return vec![BigInt::zero()];
    }
    let d = a.denom().lcm(b.denom());
    let alpha = (a * BigRational::from_integer(d.clone())).to_integer();
    let beta = (b * BigRational::from_integer(d.clone())).to_integer();
    // Q(y) = d^n P(y / d)
    let mut dk = BigInt::one();
    let mut q = int_multiple(p);
    for c in q.iter_mut().rev() {
        *c *= &dk;
        dk *= &d;
    }
    // S(t) = Q(alpha + (beta - alpha) t)
    taylor_shift(&mut q, &alpha);
    let w = &beta - &alpha;
    let mut wk = BigInt::one();
    for c in q.iter_mut() {
        *c *= &wk;
        wk *= &w;
    }
    // (x + 1)^n S(1 / (x + 1))
    q.reverse();
    taylor_shift(&mut q, &BigInt::one());
    q
}

/// `v(x) <- v(x + s)` in place.
fn taylor_shift(v: &mut [BigInt], s: &BigInt) {
    let n = v.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &v[j + 1] * s;
            v[j] += t;
        }
    }
}

pub fn descartes_var_on(p: &ExactPoly, iv: &Interval) -> usize {
    descartes_var(p, &rat(&iv.a), &rat(&iv.b))
}

/// Bernstein coefficients of `p` on `[c, d]`, from the monomial coefficients
/// of `p(c + (d - c) t)`.
pub fn bernstein(p: &ExactPoly, c: &BigRational, d: &BigRational) -> Vec<BigRational> {
    let n = p.degree();
    let sub = ExactPoly::new(vec![c.clone(), d - c]);
    let mut q = ExactPoly::new(Vec::new());
    let mut pow = ExactPoly::new(vec![BigRational::one()]);
    for coef in &p.coeffs {
        q = q.add(&pow.scale(coef));
        pow = pow.mul(&sub);
    }
    let mut qc = q.coeffs;
    qc.resize(n + 1, BigRational::zero());
    (0..=n)
        .map(|i| {
            (0..=i).fold(BigRational::zero(), |acc, k| {
                acc + &qc[k] * BigRational::new(binomial(i, k), binomial(n, k))
            })
        })
        .collect()
}

/// de Casteljau split of Bernstein coefficients at parameter `t`.
pub fn de_casteljau(b: &[BigRational], t: &BigRational) -> (Vec<BigRational>, Vec<BigRational>) {
    let s = BigRational::one() - t;
    let mut row = b.to_vec();
    let mut left = vec![row[0].clone()];
    let mut right = vec![row[row.len() - 1].clone()];
    while row.len() > 1 {
        row = row.windows(2).map(|w| &w[0] * &s + &w[1] * t).collect();
        left.push(row[0].clone());
        right.push(row[row.len() - 1].clone());
    }
    right.reverse();
    (left, right)
}

/// `binom(n, i)` as a rational.
pub fn binomial_rat(n: usize, i: usize) -> BigRational {
    BigRational::from_integer(binomial(n, i))
}
