#![allow(dead_code)]

use anewdsc::descartes::Interval;
use anewdsc::{CoefficientOracle, Dyadic};
use anewdsc_reference::ExactPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn oracle(v: &[i64]) -> CoefficientOracle {
    CoefficientOracle::from_integer_poly(&ints(v)).unwrap()
}

pub fn dy(m: i64, e: i64) -> Dyadic {
    Dyadic::new(BigInt::from(m), e)
}

pub fn iv(a: Dyadic, b: Dyadic) -> Interval {
    Interval::new(a, b).expect("a < b")
}

/// Random integer coefficients in `[-2^bits, 2^bits]` with a nonzero leading one.
pub fn random_ints(rng: &mut impl Rng, n: usize, bits: u32) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..=n)
        .map(|_| {
            let m: BigInt = BigInt::from(rng.gen::<u64>()) >> (64 - bits.min(64));
            if rng.gen() {
                -m
            } else {
                m
            }
        })
        .collect();
    if c[n] == BigInt::from(0) {
        c[n] = BigInt::from(1);
    }
    c
}

/// Random dyadic with `k` fractional bits in `[-r, r]`.
pub fn random_dyadic(rng: &mut impl Rng, r: i64, k: i64) -> Dyadic {
    let span = r << k;
    Dyadic::new(BigInt::from(rng.gen_range(-span..=span)), -k)
}

/// `prod (x - r_i)` over dyadic roots, with dyadic coefficients.
pub fn from_roots(roots: &[Dyadic]) -> (CoefficientOracle, ExactPoly) {
    let mut c = vec![Dyadic::one()];
    for r in roots {
        let mut next = vec![Dyadic::zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] - &(ci * r);
        }
        c = next;
    }
    (CoefficientOracle::from_dyadic_poly(&c).unwrap(), ExactPoly::from_dyadics(&c))
}

pub fn in_open(x: &BigRational, i: &Interval) -> bool {
    let a = anewdsc_reference::rat(&i.a);
    let b = anewdsc_reference::rat(&i.b);
    &a < x && x < &b
}
