use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use pellgroup::intkernel::is_perfect_square;
use pellgroup::triplegroup::{add, add_with_gcd, neg, order, scalar_mul, Order};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{ctx, random_triple, seed_pool};

#[test]
fn group_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in [2i64, 3, 5, 6, 13, 29] {
        let c = ctx(m);
        let pool = seed_pool(&c, true);
        let e = c.identity();
        for _ in 0..200 {
            let t1 = random_triple(&c, &pool, &mut rng);
            let t2 = random_triple(&c, &pool, &mut rng);
            let t3 = random_triple(&c, &pool, &mut rng);
            assert_eq!(add(&c, &add(&c, &t1, &t2), &t3), add(&c, &t1, &add(&c, &t2, &t3)));
            assert_eq!(add(&c, &t1, &t2), add(&c, &t2, &t1));
            assert_eq!(add(&c, &t1, &e), t1);
            assert!(add(&c, &t1, &neg(&c, &t1)).is_identity());
            assert!(c.on_conic(t1.x(), t1.y(), t1.z()));
        }
    }
}

#[test]
fn product_gcd_is_square_times_power_of_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for m in [2i64, 3, 5, 6, 7] {
        let c = ctx(m);
        let pool = seed_pool(&c, true);
        for _ in 0..500 {
            let t1 = random_triple(&c, &pool, &mut rng);
            let t2 = random_triple(&c, &pool, &mut rng);
            let (_, g) = add_with_gcd(&c, &t1, &t2);
            let square = is_perfect_square(&g).is_some()
                || (g.is_even() && is_perfect_square(&(&g / 2)).is_some());
            assert!(square, "m={m} g={g}");
            if t1.z().is_odd() && t2.z().is_odd() && t1.z().gcd(t2.z()).is_one() {
                assert!(g.is_one() || g == BigInt::from(2), "m={m} g={g}");
            }
        }
    }
}

#[test]
fn order_three_only_for_m_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in common::squarefree_upto(30) {
        let c = ctx(m);
        let pool = seed_pool(&c, false);
        for _ in 0..60 {
            let t = random_triple(&c, &pool, &mut rng);
            let o = order(&c, &t);
            if o == Order::Three {
                assert_eq!(m, 3);
                assert!(scalar_mul(&c, &BigInt::from(3), &t).is_identity());
            }
        }
    }
    let c3 = ctx(3);
    let t = pellgroup::triplegroup::triple(&c3, 1, 1, 2).unwrap();
    assert_eq!(order(&c3, &t), Order::Three);
}

#[test]
fn scalar_mul_is_repeated_addition() {
    let c = ctx(5);
    let t = pellgroup::triplegroup::triple(&c, 2, 1, 3).unwrap();
    let mut acc = c.identity();
    for k in 0..10i64 {
        assert_eq!(scalar_mul(&c, &BigInt::from(k), &t), acc);
        assert_eq!(scalar_mul(&c, &BigInt::from(-k), &t), neg(&c, &acc));
        acc = add(&c, &acc, &t);
    }
}

#[test]
fn printed_triples_parse_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = ctx(13);
    let pool = seed_pool(&c, true);
    for _ in 0..50 {
        let t = random_triple(&c, &pool, &mut rng);
        let pellgroup::triplegroup::RawTriple(x, y, z) = t.to_string().parse().unwrap();
        assert_eq!(pellgroup::triplegroup::normalize(&c, &x, &y, &z).unwrap(), t);
    }
}
