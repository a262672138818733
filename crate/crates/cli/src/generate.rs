//! Seeded benchmark families.

use anewdsc_reference::{is_square_free, ExactPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::Polynomial;
use crate::{CliError, Result};

pub const FAMILIES: [&str; 5] = ["mignotte", "wilkinson", "random-dense", "random-sparse", "chebyshev-like"];

/// Generator parameters; which ones are required depends on the family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub a: Option<u64>,
    pub k: Option<usize>,
    pub tau: Option<u32>,
    pub terms: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `x^n - 2 (a x - 1)^2`.
    Mignotte { n: usize, a: u64 },
    /// `(x - 1)(x - 2)...(x - k)`.
    Wilkinson { k: usize },
    /// Degree `n`, coefficients uniform with absolute value below `2^tau`.
    RandomDense { n: usize, tau: u32, seed: u64 },
    /// `terms` nonzero coefficients including `x^n` and the constant term.
    RandomSparse { n: usize, terms: usize, tau: u32, seed: u64 },
    /// Chebyshev polynomial of the first kind, `T_n`.
    ChebyshevLike { n: usize },
}

fn need<T: Copy>(v: Option<T>, what: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Params(format!("{family} needs --{what}")))
}

impl Family {
    pub fn from_name(name: &str, p: &Params) -> Result<Family> {
        let f = match name {
            "mignotte" => Family::Mignotte { n: need(p.n, "n", name)?, a: need(p.a, "a", name)? },
            "wilkinson" => Family::Wilkinson { k: need(p.k.or(p.n), "k", name)? },
            "random-dense" => Family::RandomDense {
                n: need(p.n, "n", name)?,
                tau: p.tau.unwrap_or(16),
                seed: p.seed.unwrap_or(0),
            },
            "random-sparse" => Family::RandomSparse {
                n: need(p.n, "n", name)?,
                terms: p.terms.unwrap_or(4),
                tau: p.tau.unwrap_or(16),
                seed: p.seed.unwrap_or(0),
            },
            "chebyshev-like" => Family::ChebyshevLike { n: need(p.n, "n", name)? },
            other => return Err(CliError::UnknownFamily(other.to_owned())),
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Params(m));
        match *self {
            Family::Mignotte { n, a } if n < 3 || a < 2 => bad(format!("mignotte needs n >= 3 and a >= 2, got n = {n}, a = {a}")),
            Family::Wilkinson { k } if !(2..=1000).contains(&k) => bad(format!("wilkinson needs 2 <= k <= 1000, got {k}")),
            Family::RandomDense { n, tau, .. } | Family::RandomSparse { n, tau, .. } if n < 2 || !(1..=4096).contains(&tau) => {
                bad(format!("random families need n >= 2 and 1 <= tau <= 4096, got n = {n}, tau = {tau}"))
            }
            Family::RandomSparse { n, terms, .. } if terms < 2 || terms > n + 1 => {
                bad(format!("random-sparse needs 2 <= terms <= n + 1, got {terms}"))
            }
            Family::ChebyshevLike { n } if n < 2 => bad(format!("chebyshev-like needs n >= 2, got {n}")),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Mignotte { n, a } => format!("mignotte-n{n}-a{a}"),
            Family::Wilkinson { k } => format!("wilkinson-{k}"),
            Family::RandomDense { n, tau, seed } => format!("random-dense-n{n}-t{tau}-s{seed}"),
            Family::RandomSparse { n, terms, tau, seed } => format!("random-sparse-n{n}-k{terms}-t{tau}-s{seed}"),
            Family::ChebyshevLike { n } => format!("chebyshev-{n}"),
        }
    }

    pub fn generate(&self) -> Polynomial {
        let c = match *self {
            Family::Mignotte { n, a } => mignotte(n, a),
            Family::Wilkinson { k } => wilkinson(k),
            Family::RandomDense { n, tau, seed } => random_square_free(seed, |rng| dense(rng, n, tau)),
            Family::RandomSparse { n, terms, tau, seed } => random_square_free(seed, |rng| sparse(rng, n, terms, tau)),
            Family::ChebyshevLike { n } => chebyshev(n),
        };
        Polynomial::from_ints(Some(self.name()), c)
    }
}

pub fn mignotte(n: usize, a: u64) -> Vec<BigInt> {
    let a = BigInt::from(a);
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    c[2] = BigInt::from(-2) * &a * &a;
    c[1] = BigInt::from(4) * &a;
    c[0] = BigInt::from(-2);
    c
}

pub fn wilkinson(k: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for i in 1..=k {
        // multiply by (x - i)
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            next[j + 1] += cj;
            next[j] -= cj * BigInt::from(i);
        }
        c = next;
    }
    c
}

/// `T_0 = 1`, `T_1 = x`, `T_{k+1} = 2 x T_k - T_{k-1}`.
pub fn chebyshev(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (j, cj) in cur.iter().enumerate() {
            next[j + 1] += cj * 2;
        }
        for (j, pj) in prev.iter().enumerate() {
            next[j] -= pj;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn nonzero(rng: &mut ChaCha8Rng, tau: u32) -> BigInt {
    loop {
        let v = signed(rng, tau);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Uniform in `(-2^tau, 2^tau)`.
fn signed(rng: &mut ChaCha8Rng, tau: u32) -> BigInt {
    let words = tau.div_ceil(32) as usize;
    let raw: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let mag = num_bigint::BigUint::new(raw) >> (words as u32 * 32 - tau);
    let v = BigInt::from(mag);
    if rng.gen() {
        -v
    } else {
        v
    }
}

fn dense(rng: &mut ChaCha8Rng, n: usize, tau: u32) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..n).map(|_| signed(rng, tau)).collect();
    c.push(nonzero(rng, tau));
    c
}

fn sparse(rng: &mut ChaCha8Rng, n: usize, terms: usize, tau: u32) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = nonzero(rng, tau);
    c[n] = nonzero(rng, tau);
    for i in sample(rng, n - 1, terms - 2) {
        c[i + 1] = nonzero(rng, tau);
    }
    c
}

/// Draws until the result is square-free; the draw sequence depends only on
/// the seed.
fn random_square_free(seed: u64, mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<BigInt>) -> Vec<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let c = draw(&mut rng);
        if is_square_free(&ExactPoly::from_ints(&c)) {
            return c;
        }
    }
}
