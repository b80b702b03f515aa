use num_bigint::BigInt;
use num_traits::{One, Zero};
use pellgroup::intkernel::{factorize, primes_up_to, FactorConfig};
use pellgroup::lambdasieve::{in_lambda, lambda_primes, lemma32_test, triple_from_prime};
use pellgroup::Error;

mod common;
use common::ctx;

#[test]
fn lemma32_implies_membership() {
    for m in [2i64, 3, 5, 6, 7, 29] {
        let c = ctx(m);
        for p in primes_up_to(10_000).into_iter().filter(|&p| p > 2 && m % p as i64 != 0) {
            if lemma32_test(&c, p).unwrap() {
                assert!(in_lambda(&c, p).unwrap().in_lambda, "m={m} p={p}");
            }
        }
    }
}

/// Multiplies `(a + b sqrt m)` mod `p` until returning to 1; true if some `a_n = 0`.
fn some_a_n_vanishes(m: u64, a: u64, b: u64, p: u64) -> bool {
    let (a, b, m) = (a % p, b % p, m % p);
    let (mut x, mut y) = (a, b);
    loop {
        if x == 0 {
            return true;
        }
        if (x, y) == (1, 0) {
            return false;
        }
        let nx = (x * a + m * (y * b % p)) % p;
        let ny = (x * b + y * a) % p;
        x = nx;
        y = ny;
    }
}

#[test]
fn membership_agrees_with_definition() {
    for m in [2u64, 5] {
        let c = ctx(m as i64);
        let f = c.fundamental();
        let (a, b) = (u64::try_from(&f.a).unwrap(), u64::try_from(&f.b).unwrap());
        for v in lambda_primes(&c, 300, 1).unwrap() {
            assert!(!some_a_n_vanishes(m, a, b, v.p), "m={m} p={}", v.p);
        }
        for p in primes_up_to(300).into_iter().filter(|&p| p > 2 && m % p != 0) {
            let v = in_lambda(&c, p).unwrap();
            if v.legendre_m && v.legendre_neg_m {
                assert_eq!(v.in_lambda, !some_a_n_vanishes(m, a, b, p), "m={m} p={p}");
            }
        }
    }
}

#[test]
fn witness_z_has_a_single_odd_prime() {
    let cfg = FactorConfig::default();
    for m in [2i64, 5, 6, 7, 13, 29] {
        let c = ctx(m);
        for p in primes_up_to(400).into_iter().filter(|&p| p > 2 && m % p as i64 != 0) {
            let w = match triple_from_prime(&c, p) {
                Ok(w) => w,
                Err(Error::NotEligible(_)) => continue,
                Err(e) => panic!("m={m} p={p}: {e}"),
            };
            let f = factorize(w.triple.z(), &cfg).unwrap();
            let odd: Vec<&BigInt> = f.factors.iter().map(|(q, _)| q).filter(|q| *q != &BigInt::from(2)).collect();
            assert_eq!(odd, vec![&BigInt::from(p)], "m={m} p={p}");
            let z = w.triple.z();
            assert_eq!(z, &(BigInt::from(p).pow(w.k) << w.delta));
            assert!(c.on_conic(w.triple.x(), w.triple.y(), z));
            assert!(!w.triple.y().is_zero());
        }
    }
}

#[test]
fn witnesses_for_lambda_primes_are_coprime() {
    let c = ctx(5);
    let zs: Vec<BigInt> = [29u64, 41, 61]
        .iter()
        .map(|&p| pellgroup::lambdasieve::odd_part(triple_from_prime(&c, p).unwrap().triple.z()))
        .collect();
    for i in 0..zs.len() {
        for j in 0..i {
            assert!(num_integer::Integer::gcd(&zs[i], &zs[j]).is_one());
        }
    }
}
