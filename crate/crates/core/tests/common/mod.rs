#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use pellgroup::intkernel::{jacobi_u64, primes_up_to};
use pellgroup::lambdasieve::triple_from_prime;
use pellgroup::triplegroup::{add, from_parameters, pell_generator, GroupContext, PrimitiveTriple};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ctx(m: i64) -> GroupContext {
    GroupContext::new(&BigInt::from(m)).unwrap()
}

pub fn squarefree_upto(n: i64) -> Vec<i64> {
    (2..=n)
        .filter(|&m| (2..).take_while(|q| q * q <= m).all(|q| m % (q * q) != 0))
        .collect()
}

/// Seed triples for `m`: Pell generators, prime witnesses and parametrized points.
pub fn seed_pool(c: &GroupContext, with_pell: bool) -> Vec<PrimitiveTriple> {
    let m = c.m().clone();
    let mut pool = Vec::new();
    if with_pell {
        pool.push(pell_generator(c, 1).unwrap());
    }
    let m_i = i64::try_from(&m).unwrap();
    for p in primes_up_to(200).into_iter().filter(|&p| p > 2 && m_i % p as i64 != 0) {
        if jacobi_u64(m_i, p) == 1 && jacobi_u64(-m_i, p) == 1 {
            if let Ok(w) = triple_from_prime(c, p) {
                pool.push(w.triple);
            }
        }
        if pool.len() >= 6 {
            break;
        }
    }
    for u in 1..6i64 {
        for v in 1..5i64 {
            if u.gcd(&v) == 1 {
                pool.push(from_parameters(c, &BigInt::from(u), &BigInt::from(v)).unwrap());
            }
        }
    }
    pool
}

/// A random element: sum of one to three seeds.
pub fn random_triple(c: &GroupContext, pool: &[PrimitiveTriple], rng: &mut ChaCha8Rng) -> PrimitiveTriple {
    let terms = rng.gen_range(1..=3);
    let mut t = pool[rng.gen_range(0..pool.len())].clone();
    for _ in 1..terms {
        t = add(c, &t, &pool[rng.gen_range(0..pool.len())]);
    }
    t
}
