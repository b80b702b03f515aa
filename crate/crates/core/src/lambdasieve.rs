//! Primes `p` with `(m/p) = (-m/p) = 1` that never divide a Pell `a_n`,
//! tested directly (via the rank of apparition) and through the
//! splitting of `x^8 - 2a x^4 + 1` mod `p`; plus witness triples whose
//! `z` has `p` as its only odd prime factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classgroup::class_number;
use crate::error::{Error, Result};
use crate::intkernel::{is_perfect_square, is_prime, jacobi, primes_up_to};
use crate::pell::rank_rho;
use crate::polyfp::splits_completely;
use crate::triplegroup::{normalize, GroupContext, PrimitiveTriple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LambdaVerdict {
    pub p: u64,
    pub in_lambda: bool,
    pub legendre_m: bool,
    pub legendre_neg_m: bool,
    /// The rank of apparition of `p` is odd.
    pub rank_parity: bool,
    pub rho: u64,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime(&BigInt::from(p))? {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

pub fn in_lambda(ctx: &GroupContext, p: u64) -> Result<LambdaVerdict> {
    check_odd_prime(p)?;
    let pb = BigInt::from(p);
    if ctx.m().is_multiple_of(&pb) {
        return Err(Error::invalid(format!("{p} divides m = {}", ctx.m())));
    }
    let legendre_m = jacobi(ctx.m(), &pb)? == 1;
    let legendre_neg_m = jacobi(&-ctx.m(), &pb)? == 1;
    let rank = rank_rho(&ctx.fundamental().a, p)?;
    let rank_parity = rank.rho % 2 == 1;
    Ok(LambdaVerdict {
        p,
        in_lambda: legendre_m && legendre_neg_m && rank_parity,
        legendre_m,
        legendre_neg_m,
        rank_parity,
        rho: rank.rho,
    })
}

fn candidate_primes(ctx: &GroupContext, bound: u64) -> Vec<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2 && !ctx.m().is_multiple_of(&BigInt::from(p)))
        .collect()
}

/// Members of `Lambda_m` up to `bound`, ascending. With `jobs > 1` the
/// range is split across a thread pool; the output order is unchanged.
pub fn lambda_primes(ctx: &GroupContext, bound: u64, jobs: usize) -> Result<Vec<LambdaVerdict>> {
    if bound < 3 {
        return Err(Error::invalid(format!("bound must be >= 3, got {bound}")));
    }
    let primes = candidate_primes(ctx, bound);
    // force the cached fundamental solution before fanning out
    ctx.fundamental();
    let verdicts: Vec<LambdaVerdict> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
        pool.install(|| {
            primes
                .par_iter()
                .map(|&p| in_lambda(ctx, p))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        primes
            .iter()
            .map(|&p| in_lambda(ctx, p))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(verdicts.into_iter().filter(|v| v.in_lambda).collect())
}

/// Sufficient condition: `p > a^2`, `p != 1 (mod 16)` and the octic
/// splits completely mod `p`.
pub fn lemma32_test(ctx: &GroupContext, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    let a = &ctx.fundamental().a;
    if BigInt::from(p) <= a * a || p % 16 == 1 {
        return Ok(false);
    }
    splits_completely(a, p)
}

/// Primes up to `bound` accepted by [`lemma32_test`], ascending.
pub fn lemma32_primes(ctx: &GroupContext, bound: u64, jobs: usize) -> Result<Vec<u64>> {
    let primes = candidate_primes(ctx, bound);
    ctx.fundamental();
    let keep = |&p: &u64| lemma32_test(ctx, p).map(|ok| ok.then_some(p));
    let hits: Vec<Option<u64>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
        pool.install(|| primes.par_iter().map(keep).collect::<Result<Vec<_>>>())?
    } else {
        primes.iter().map(keep).collect::<Result<Vec<_>>>()?
    };
    Ok(hits.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimeWitnessTriple {
    pub p: u64,
    pub triple: PrimitiveTriple,
    pub k: u32,
    pub delta: u8,
    /// `(u, v)` with `x = 2u + v`, `y = v` when `delta = 1`.
    pub representation: Option<(String, String)>,
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest `y >= 1` with `z^2 - m y^2 = x^2` and `gcd(x, y) = 1`.
fn scan_representation(m: &BigInt, z: &BigInt) -> Option<(BigInt, BigInt)> {
    let zz = z * z;
    let y_max = crate::intkernel::isqrt(&(&zz / m));
    if let (Some(zz_s), Some(m_s), Some(y_max_s)) = (zz.to_u128(), m.to_u128(), y_max.to_u128()) {
        if zz_s < (1u128 << 120) {
            for y in 1..=y_max_s {
                let r = zz_s - m_s * y * y;
                let x = isqrt_u128(r);
                if x * x == r && num_integer::gcd(x, y) == 1 {
                    return Some((BigInt::from(x), BigInt::from(y)));
                }
            }
            return None;
        }
    }
    let mut y = BigInt::one();
    while y <= y_max {
        if let Some(x) = is_perfect_square(&(&zz - m * &y * &y)) {
            if x.gcd(&y).is_one() {
                return Some((x, y));
            }
        }
        y += 1;
    }
    None
}

/// Primitive `[x, y, 2^delta p^k]` with the least `k` (then `delta = 0`
/// first), searching `k` up to the class number.
pub fn triple_from_prime(ctx: &GroupContext, p: u64) -> Result<PrimeWitnessTriple> {
    check_odd_prime(p)?;
    let pb = BigInt::from(p);
    if ctx.m().is_multiple_of(&pb) {
        return Err(Error::invalid(format!("{p} divides m = {}", ctx.m())));
    }
    if jacobi(ctx.m(), &pb)? != 1 || jacobi(&-ctx.m(), &pb)? != 1 {
        return Err(Error::NotEligible(format!("(+-{}/{p}) != 1", ctx.m())));
    }
    let h = class_number(ctx.m());
    let mut pk = BigInt::one();
    for k in 1..=h as u32 {
        pk *= p;
        for delta in 0..=1u8 {
            let z = &pk << delta;
            let Some((x, y)) = scan_representation(ctx.m(), &z) else {
                continue;
            };
            let triple = normalize(ctx, &x, &y, &z)?;
            if triple.z() != &z {
                return Err(Error::contract(format!("[{x},{y},{z}] is not primitive")));
            }
            let representation = (delta == 1 && x.is_odd() && y.is_odd())
                .then(|| ((&x - &y) / BigInt::from(2)).to_string())
                .map(|u| (u, y.to_string()));
            return Ok(PrimeWitnessTriple {
                p,
                triple,
                k,
                delta,
                representation,
            });
        }
    }
    Err(Error::NotFound(format!(
        "no x^2 + {}y^2 = (2^d {p}^k)^2 with k <= {h}",
        ctx.m()
    )))
}

/// Largest odd divisor.
pub fn odd_part(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    n >> tz
}
