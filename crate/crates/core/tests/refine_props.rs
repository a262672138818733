mod common;

use anewdsc::isolate::{isolate, Config};
use anewdsc::refine::{refine, sign_test, RefineRequest};
use anewdsc::{CoefficientOracle, Dyadic};
use anewdsc_reference::{rat, sturm_count, ExactPoly};
use common::*;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(o: &CoefficientOracle, p: &ExactPoly, kappa: u64) -> anewdsc::refine::RefineStats {
    let iso = isolate(o, &Config::default()).unwrap();
    let req = RefineRequest { intervals: iso.intervals.clone(), kappa };
    let r = refine(o, &req, &Config::default()).unwrap();
    assert_eq!(r.intervals.len(), iso.intervals.len());
    let target = Dyadic::pow2(-(kappa as i64));
    for (j, i) in r.intervals.iter().zip(&iso.intervals) {
        assert!(j.width() < target, "{j} too wide");
        assert!(i.encloses(j), "{j} escapes {i}");
        assert_eq!(p.sign_at(&rat(&j.a)) * p.sign_at(&rat(&j.b)), -1);
        assert_eq!(sturm_count(p, &rat(&j.a), &rat(&j.b)).unwrap(), 1);
        assert_eq!(sign_test(o, &j.a, &j.b).unwrap(), -1);
    }
    r.stats
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refined_intervals_keep_their_root(seed in any::<u64>(), kappa in 1u64..160) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..6);
        let roots: Vec<Dyadic> = (0..k).map(|_| random_dyadic(&mut rng, 16, 24)).collect();
        let mut roots = roots;
        roots.sort();
        roots.dedup();
        if roots.len() < 2 {
            roots.push(dy(1, 20));
        }
        let (o, p) = from_roots(&roots);
        check(&o, &p, kappa);
    }
}

#[test]
fn random_integer_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..12 {
        let n = rng.gen_range(2..16);
        let c = random_ints(&mut rng, n, 20);
        let p = ExactPoly::from_ints(&c);
        if p.degree() < 1 || !anewdsc_reference::is_square_free(&p) {
            continue;
        }
        let o = CoefficientOracle::from_integer_poly(&c).unwrap();
        check(&o, &p, 64);
    }
}

#[test]
fn clustered_roots_step_quadratically() {
    // Mignotte: two roots within 2^-40 of each other near 1/16
    let mut c = vec![BigInt::from(0); 17];
    c[16] = BigInt::one();
    c[2] = BigInt::from(-512);
    c[1] = BigInt::from(64);
    c[0] = BigInt::from(-2);
    let o = CoefficientOracle::from_integer_poly(&c).unwrap();
    let p = ExactPoly::from_ints(&c);
    let s = check(&o, &p, 400);
    assert!(s.quadratic_steps > 0);
    assert!(s.max_level >= 4, "{s:?}");
    // quadratic convergence: far fewer steps than bisection would take
    assert!(s.iterations < 4 * 400, "{s:?}");
}

#[test]
fn refined_root_stays_far_from_others() {
    let roots = [dy(-5, 0), dy(1, -20), dy(3, -20), dy(7, 3)];
    let (o, _) = from_roots(&roots);
    let iso = isolate(&o, &Config::default()).unwrap();
    let r = refine(&o, &RefineRequest { intervals: iso.intervals, kappa: 80 }, &Config::default()).unwrap();
    for (j, z) in r.intervals.iter().zip(&roots) {
        assert!(in_open(&rat(z), j));
        for other in roots.iter().filter(|w| *w != z) {
            assert!(!in_open(&rat(other), j));
        }
    }
}
