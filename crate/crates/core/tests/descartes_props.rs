mod common;

use anewdsc::descartes::{one_test, transform_approx, zero_test, Interval};
use anewdsc::{Dyadic, Precision};
use anewdsc_reference::{
    bernstein, binomial_rat, de_casteljau, descartes_var_on, exact_transform_on, rat, sturm_count, ExactPoly,
};
use common::*;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, max_n: usize, bits: u32) -> (anewdsc::CoefficientOracle, ExactPoly) {
    use rand::Rng;
    let n = rng.gen_range(2..=max_n);
    let c = random_ints(rng, n, bits);
    (anewdsc::CoefficientOracle::from_integer_poly(&c).unwrap(), ExactPoly::from_ints(&c))
}

/// Four sorted distinct dyadics.
fn four_points(rng: &mut ChaCha8Rng) -> [Dyadic; 4] {
    loop {
        let mut v: Vec<Dyadic> = (0..4).map(|_| random_dyadic(rng, 4, 6)).collect();
        v.sort();
        if v.windows(2).all(|w| w[0] < w[1]) {
            return [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn subadditivity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p) = random_poly(&mut rng, 9, 10);
        let [a, c, d, b] = four_points(&mut rng);
        let whole = descartes_var_on(&p, &iv(a.clone(), b.clone()));
        let left = descartes_var_on(&p, &iv(a, c));
        let right = descartes_var_on(&p, &iv(d, b));
        prop_assert!(left + right <= whole, "{left} + {right} > {whole}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bernstein_matches_transform(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p) = random_poly(&mut rng, 7, 8);
        let [c, a, b, d] = four_points(&mut rng);
        let (c, a, b, d) = (rat(&c), rat(&a), rat(&b), rat(&d));
        let base = bernstein(&p, &c, &d);
        let (upto_b, _) = de_casteljau(&base, &((&b - &c) / (&d - &c)));
        let (_, on_ab) = de_casteljau(&upto_b, &((&a - &c) / (&b - &c)));
        let n = p.degree();
        let pi = anewdsc_reference::exact_transform(&p, &a, &b);
        for i in 0..=n {
            prop_assert_eq!(&pi[i], &(&on_ab[n - i] * binomial_rat(n, i)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transform_quality(seed in any::<u64>(), l in 1u64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (o, p) = random_poly(&mut rng, 12, 32);
        let [a, _, _, b] = four_points(&mut rng);
        let i = iv(a, b);
        let approx = transform_approx(&o, &i, Precision::new(l).unwrap());
        let exact = exact_transform_on(&p, &i);
        let tol = BigRational::one() / BigRational::from_integer(num_bigint::BigInt::one() << l);
        for (x, y) in approx.coeffs.iter().zip(&exact) {
            prop_assert!((rat(x) - y).abs() <= tol);
        }
    }
}

/// Random polynomial with known dyadic roots and a random interval whose
/// endpoints avoid them.
fn rooted_case(rng: &mut ChaCha8Rng) -> (anewdsc::CoefficientOracle, ExactPoly, Vec<Dyadic>, Interval) {
    use rand::Rng;
    let k = rng.gen_range(2..=7);
    let mut roots: Vec<Dyadic> = Vec::new();
    while roots.len() < k {
        let k = rng.gen_range(1..12);
        let r = random_dyadic(rng, 2, k);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let (o, p) = from_roots(&roots);
    loop {
        let a = random_dyadic(rng, 3, 7);
        let w = Dyadic::new(num_bigint::BigInt::from(rng.gen_range(1..400)), -7);
        let b = &a + &w;
        if !roots.contains(&a) && !roots.contains(&b) {
            return (o, p, roots, iv(a, b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zero_and_one_tests_are_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (o, p, roots, i) = rooted_case(&mut rng);
        let inside = roots.iter().filter(|r| i.contains(r)).count();
        let var = descartes_var_on(&p, &i);
        let z = zero_test(&o, &i).unwrap();
        if z {
            prop_assert_eq!(inside, 0);
        } else {
            prop_assert!(var > 0);
        }
        if var == 0 {
            prop_assert!(z);
        }
        match one_test(&o, &i).unwrap() {
            Some(j) => {
                prop_assert!(i.encloses(&j));
                prop_assert_eq!(roots.iter().filter(|r| j.contains(r)).count(), 1);
                prop_assert_eq!(descartes_var_on(&p, &j), 1);
            }
            None => prop_assert_ne!(var, 1),
        }
        prop_assert_eq!(sturm_count(&p, &rat(&i.a), &rat(&i.b)).unwrap(), inside);
    }
}
