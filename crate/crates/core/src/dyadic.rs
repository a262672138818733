//! Exact dyadic arithmetic.
//!
//! A [`Dyadic`] is a rational `m * 2^e` with an arbitrary-precision mantissa.
//! Dyadics are closed under addition, subtraction and multiplication, so every
//! ring operation here is exact. Rounding only happens where a caller asks for
//! it, always onto a grid `2^-bits` with an explicit direction.
//!
//! [`Mag`] is a short, always-rounded-up magnitude used to carry error radii
//! cheaply, and [`DyadicInterval`] is a closed interval with outward rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Absolute quality `L >= 1`: an approximation of quality `L` is within `2^-L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u64);

impl Precision {
    pub fn new(bits: u64) -> Option<Self> {
        (bits >= 1).then_some(Precision(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub(crate) fn as_i64(self) -> i64 {
        self.0 as i64
    }
}

/// Exact value `mantissa * 2^exponent`, kept canonical: the mantissa is odd,
/// or zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.canonicalize();
        d
    }

    fn canonicalize(&mut self) {
        match self.mantissa.trailing_zeros() {
            None => self.exponent = 0,
            Some(0) => {}
            Some(tz) => {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// `self * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    /// Number of significant mantissa bits.
    pub fn mantissa_bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Number of fractional bits needed to represent the value exactly.
    pub fn fractional_bits(&self) -> i64 {
        (-self.exponent).max(0)
    }

    /// `floor(log2 |self|)`. Panics on zero.
    pub fn floor_log2(&self) -> i64 {
        assert!(!self.is_zero(), "log2 of zero");
        self.mantissa.bits() as i64 - 1 + self.exponent
    }

    /// `ceil(log2 |self|)`. Panics on zero.
    pub fn ceil_log2(&self) -> i64 {
        assert!(!self.is_zero(), "log2 of zero");
        if self.mantissa.magnitude().is_one() {
            self.exponent
        } else {
            self.mantissa.bits() as i64 + self.exponent
        }
    }

    /// An integer `t` with `|t - log2 |self|| <= 1/2`. Panics on zero.
    pub fn log2_round(&self) -> i64 {
        let k = self.mantissa.bits() as i64 - 1;
        // log2|m| >= k + 1/2  <=>  m^2 >= 2^(2k+1)
        let sq = self.mantissa.magnitude() * self.mantissa.magnitude();
        let up = sq.bits() as i64 - 1 >= 2 * k + 1;
        k + self.exponent + i64::from(up)
    }

    /// Largest multiple of `2^-bits` that is `<= self`.
    pub fn floor_to(&self, bits: i64) -> Dyadic {
        if self.exponent >= -bits {
            return self.clone();
        }
        let shift = (-bits - self.exponent) as u64;
        // arithmetic shift on BigInt rounds toward negative infinity
        Dyadic::new(&self.mantissa >> shift, -bits)
    }

    /// Smallest multiple of `2^-bits` that is `>= self`.
    pub fn ceil_to(&self, bits: i64) -> Dyadic {
        -(-self).floor_to(bits)
    }

    /// Nearest multiple of `2^-bits` (ties upward); error at most `2^-(bits+1)`.
    pub fn round_to(&self, bits: i64) -> Dyadic {
        if self.exponent >= -bits {
            return self.clone();
        }
        (self + &Dyadic::pow2(-bits - 1)).floor_to(bits)
    }

    /// A quality-`L` approximation on the grid `2^-(L+1)`, within `2^-(L+2)` of `self`.
    pub fn round_to_quality(&self, quality: Precision) -> Dyadic {
        self.round_to(quality.as_i64() + 1)
    }

    /// `self * 2^bits` rounded toward negative infinity.
    pub fn floor_scaled(&self, bits: i64) -> BigInt {
        let e = self.exponent + bits;
        if e >= 0 {
            &self.mantissa << (e as u64)
        } else {
            &self.mantissa >> ((-e) as u64)
        }
    }

    /// Exact `floor(num / den)`. Panics if `den` is zero.
    pub fn floor_div(num: &Dyadic, den: &Dyadic) -> BigInt {
        assert!(!den.is_zero(), "division by zero");
        let diff = num.exponent - den.exponent;
        if diff >= 0 {
            (&num.mantissa << (diff as u64)).div_floor(&den.mantissa)
        } else {
            num.mantissa.div_floor(&(&den.mantissa << ((-diff) as u64)))
        }
    }

    /// Midpoint `(a + b) / 2`, exact.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }

    /// Decimal rendering truncated toward zero with `digits` fractional digits,
    /// together with an error radius (`0` when the rendering is exact).
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten_pow = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.mantissa.abs() * ten_pow;
        let (q, exact) = if self.exponent >= 0 {
            (scaled << (self.exponent as u64), true)
        } else {
            let sh = (-self.exponent) as u64;
            let q = &scaled >> sh;
            let exact = (&q << sh) == scaled;
            (q, exact)
        };
        let s = q.to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        let sign = if self.is_negative() { "-" } else { "" };
        let body = if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        };
        if exact {
            format!("{body} ± 0")
        } else {
            format!("{body} ± 1e-{digits}")
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_i64(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_bigint(v)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (la, lb) = (self.floor_log2(), other.floor_log2());
        if la != lb {
            let by_mag = la.cmp(&lb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exponent.min(other.exponent);
        let ma = &self.mantissa << ((self.exponent - e) as u64);
        let mb = &other.mantissa << ((other.exponent - e) as u64);
        ma.cmp(&mb)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

fn add_signed(a: &Dyadic, b: &Dyadic, negate_b: bool) -> Dyadic {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let e = a.exponent.min(b.exponent);
    let ma = &a.mantissa << ((a.exponent - e) as u64);
    let mb = &b.mantissa << ((b.exponent - e) as u64);
    let m = if negate_b { ma - mb } else { ma + mb };
    Dyadic::new(m, e)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        add_signed(self, rhs, false)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        add_signed(self, rhs, true)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic { mantissa: &self.mantissa * &rhs.mantissa, exponent: self.exponent + rhs.exponent }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $f(self, rhs: Dyadic) -> Dyadic {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $f(self, rhs: &Dyadic) -> Dyadic {
                (&self).$f(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $f(self, rhs: Dyadic) -> Dyadic {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed dyadic literal {0:?}: expected `m*2^e` or an integer")]
pub struct ParseDyadicError(pub String);

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDyadicError(s.to_string());
        let s = s.trim();
        match s.split_once("*2^") {
            Some((m, e)) => {
                let m: BigInt = m.trim().parse().map_err(|_| err())?;
                let e: i64 = e.trim().parse().map_err(|_| err())?;
                Ok(Dyadic::new(m, e))
            }
            None => s.parse::<BigInt>().map(Dyadic::from_bigint).map_err(|_| err()),
        }
    }
}

const MAG_BITS: u32 = 32;

/// Upper bound `man * 2^exp` on a nonnegative real, rounded up to at most
/// 32 mantissa bits. Used for error radii where exactness is not needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn norm(man: u128, exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits <= MAG_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = bits - MAG_BITS;
        let mut m = man >> shift;
        if m << shift != man {
            m += 1;
        }
        Mag { man: m as u64, exp: exp + shift as i64 }
    }

    pub fn pow2(e: i64) -> Mag {
        Mag { man: 1, exp: e }
    }

    /// Smallest representable bound `>= |d|`.
    pub fn from_dyadic(d: &Dyadic) -> Mag {
        if d.is_zero() {
            return Mag::ZERO;
        }
        let mag = d.mantissa().magnitude();
        let bits = mag.bits();
        if bits <= u64::from(MAG_BITS) {
            let m = mag.iter_u64_digits().next().unwrap_or(0);
            return Mag { man: m, exp: d.exponent() };
        }
        let shift = bits - u64::from(MAG_BITS);
        let top = (mag >> shift).iter_u64_digits().next().unwrap_or(0);
        Mag::norm(u128::from(top) + 1, d.exponent() + shift as i64)
    }

    pub fn is_zero(self) -> bool {
        self.man == 0
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let diff = hi.exp - lo.exp;
        if diff > 64 {
            // lo < 2^(lo.exp + 32) <= ulp(hi)
            return Mag::norm(u128::from(hi.man) + 1, hi.exp);
        }
        Mag::norm((u128::from(hi.man) << diff) + u128::from(lo.man), lo.exp)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(u128::from(self.man) * u128::from(o.man), self.exp + o.exp)
    }

    pub fn mul_pow2(self, k: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag { man: self.man, exp: self.exp + k }
        }
    }

    /// Whether `self <= 2^k`.
    pub fn le_pow2(self, k: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        let d = k - self.exp;
        if d < 0 {
            false
        } else if d >= 63 {
            true
        } else {
            self.man <= 1u64 << d
        }
    }

    /// `ceil(log2 self)`, or `None` for zero.
    pub fn ceil_log2(self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let c = if self.man == 1 { 0 } else { 64 - (self.man - 1).leading_zeros() as i64 };
        Some(c + self.exp)
    }

    pub fn to_dyadic(self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    /// Returns `None` unless `lo <= hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Option<Self> {
        (lo <= hi).then_some(DyadicInterval { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    /// `[center - radius, center + radius]`.
    pub fn from_ball(center: &Dyadic, radius: Mag) -> Self {
        let r = radius.to_dyadic();
        DyadicInterval { lo: center - &r, hi: center + &r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn rounded(lo: Dyadic, hi: Dyadic, working_bits: Option<i64>) -> Self {
        match working_bits {
            None => DyadicInterval { lo, hi },
            Some(bits) => DyadicInterval { lo: lo.floor_to(bits), hi: hi.ceil_to(bits) },
        }
    }

    /// Sum, rounded outward to `working_bits` fractional bits (`None`: exact).
    pub fn add(&self, o: &DyadicInterval, working_bits: Option<i64>) -> Self {
        Self::rounded(&self.lo + &o.lo, &self.hi + &o.hi, working_bits)
    }

    pub fn sub(&self, o: &DyadicInterval, working_bits: Option<i64>) -> Self {
        Self::rounded(&self.lo - &o.hi, &self.hi - &o.lo, working_bits)
    }

    pub fn mul(&self, o: &DyadicInterval, working_bits: Option<i64>) -> Self {
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        Self::rounded(lo, hi, working_bits)
    }
}
