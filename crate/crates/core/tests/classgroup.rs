use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use pellgroup::classgroup::{
    certify_order_two, class_number, discriminant, f_m_image, ideal_from_triple, reduced_forms, QuadForm,
    QuadIdeal,
};
use pellgroup::intkernel::ext_gcd;
use pellgroup::triplegroup::{add, pell_generator, triple, PrimitiveTriple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{ctx, random_triple, seed_pool};

#[test]
fn f_m_is_a_homomorphism_into_two_torsion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in [5i64, 6, 13, 21, 29, 30] {
        let c = ctx(m);
        let pool = seed_pool(&c, true);
        let principal = QuadForm::principal(&discriminant(c.m()));
        for _ in 0..200 {
            let t1 = random_triple(&c, &pool, &mut rng);
            let t2 = random_triple(&c, &pool, &mut rng);
            let (f1, f2) = (f_m_image(&c, &t1).unwrap(), f_m_image(&c, &t2).unwrap());
            assert_eq!(f_m_image(&c, &add(&c, &t1, &t2)).unwrap(), f1.compose(&f2), "m={m} {t1} {t2}");
            assert_eq!(f1.compose(&f1), principal);
        }
    }
}

#[test]
fn pell_subgroup_lies_in_the_kernel() {
    for m in common::squarefree_upto(200) {
        let c = ctx(m);
        if c.fundamental().negative_fundamental.is_none() {
            continue;
        }
        for n in 1..=4 {
            let t = pell_generator(&c, n).unwrap();
            assert!(f_m_image(&c, &t).unwrap().is_principal(), "m={m} n={n}");
        }
    }
    let c6 = ctx(6);
    assert!(!f_m_image(&c6, &triple(&c6, 1, 2, 5).unwrap()).unwrap().is_principal());
}

fn brute_class_number(m: i64) -> u64 {
    let d = if m % 4 == 3 { -m } else { -4 * m };
    let bound = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    let mut h = 0;
    for a in 1..=bound {
        for b in -bound..=bound {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let reduced = b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c));
            if reduced && a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
    }
    h
}

#[test]
fn class_number_matches_double_loop() {
    for m in common::squarefree_upto(200) {
        assert_eq!(class_number(&BigInt::from(m)), brute_class_number(m), "m = {m}");
    }
}

#[test]
fn composition_matches_ideal_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for m in [5i64, 14, 21, 23, 47, 65, 71, 105, 161] {
        let disc = discriminant(&BigInt::from(m));
        let forms = reduced_forms(&disc.d);
        for _ in 0..40 {
            let f1 = &forms[rng.gen_range(0..forms.len())];
            let f2 = &forms[rng.gen_range(0..forms.len())];
            let i1 = QuadIdeal::from_form(&disc, f1).unwrap();
            let i2 = QuadIdeal::from_form(&disc, f2).unwrap();
            let prod = i1.mul(&i2).unwrap().to_form().unwrap().reduce();
            assert_eq!(prod, f1.compose(f2), "m={m} {f1} {f2}");
        }
    }
}

/// `<z, x beta + sqrt(-m)>` with `z gamma + y beta = 1`.
fn beta_ideal(m: &BigInt, t: &PrimitiveTriple, shift: i64) -> QuadIdeal {
    let disc = discriminant(m);
    let (g, _, beta) = ext_gcd(t.z(), t.y());
    assert!(g.is_one());
    let beta = beta + t.z() * shift;
    let gen = |u: BigInt, v: BigInt| -> (BigInt, BigInt) {
        if disc.half_integral() {
            (&u - &v, v * 2)
        } else {
            (u, v)
        }
    };
    let gens = [gen(t.z().clone(), BigInt::zero()), gen(t.x() * beta, BigInt::one())];
    QuadIdeal::generated_by(&disc, &gens).unwrap()
}

#[test]
fn ideal_agrees_with_beta_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for m in [5i64, 6, 7, 13, 15, 29, 35] {
        let c = ctx(m);
        let pool = seed_pool(&c, true);
        for _ in 0..40 {
            let t = random_triple(&c, &pool, &mut rng);
            let hnf = ideal_from_triple(&c, &t).unwrap();
            assert!(t.z().is_multiple_of(&hnf.norm()) || hnf.norm().is_multiple_of(t.z()), "m={m} t={t}");
            assert_eq!(beta_ideal(c.m(), &t, 0), hnf, "m={m} t={t}");
            assert_eq!(beta_ideal(c.m(), &t, 1), hnf, "m={m} t={t}");
        }
    }
}

#[test]
fn certificates_carry_checkable_doubling() {
    let cases = [(5i64, [2i64, 1, 3]), (29, [70, 13, 99]), (145, [12, 1, 17]), (985, [408, 13, 577])];
    for (m, [x, y, z]) in cases {
        let c = ctx(m);
        let t = triple(&c, x, y, z).unwrap();
        let cert = certify_order_two(&c, &t).unwrap();
        let two_t = add(&c, &t, &t);
        assert_eq!(cert.twice, two_t);
        let (x, y, z) = (t.x(), t.y(), t.z());
        let d = triple(&c, 1, 0, 1).unwrap();
        assert!(add(&c, &cert.doubling, &two_t) == d);
        let xy2 = x * y * 2;
        assert_eq!(cert.doubling.y(), &xy2);
        assert!((z * z * z * z - c.m() * &xy2 * &xy2).is_one());
        assert!(!cert.form.is_principal());
    }
}
