//! Exact integer utilities shared by the rest of the crate.
//!
//! Everything here works on [`BigInt`] at the API boundary. Factorization
//! runs on `u128` internally: trial division up to 10^4, then Pollard rho
//! with Brent's cycle detection, with every prime factor certified by a
//! deterministic Miller-Rabin base set.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Miller-Rabin with the first 13 prime bases is deterministic below this bound.
pub const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const TRIAL_DIVISION_LIMIT: u128 = 10_000;

/// Knobs for the factorizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    pub timeout: Duration,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            timeout: Duration::from_secs(10),
        }
    }
}

/// Prime factorization, ascending by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c)
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Floor of the square root. Panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // Quadratic residues mod 64 reject most non-squares cheaply.
    let low = (n & BigInt::from(63u8)).to_u8().unwrap_or(0);
    if (0x0202_0212_0203_0213u64 >> low) & 1 == 0 {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.sign() != Sign::Plus || n.is_even() {
        return Err(Error::invalid(format!(
            "jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    let three = BigInt::from(3u8);
    let five = BigInt::from(5u8);
    let eight = BigInt::from(8u8);
    let four = BigInt::from(4u8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Legendre-style symbol on machine words; `p` odd.
pub fn jacobi_u64(a: i64, p: u64) -> i8 {
    jacobi(&BigInt::from(a), &BigInt::from(p)).expect("odd modulus")
}

/// Sieve of Eratosthenes: all primes `<= bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// u128 modular arithmetic

fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    if a >= n - b {
        a - (n - b)
    } else {
        a + b
    }
}

fn mul_mod(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a % n) * (b % n) % n;
    }
    let (mut a, mut b) = (a % n, b % n);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, n);
        }
        a = add_mod(a, a, n);
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, n: u128) -> u128 {
    let mut acc = 1u128 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic primality test for `n` below [`MR_DETERMINISTIC_BOUND`].
pub fn is_prime_u128(n: u128) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    for &p in &MR_BASES {
        if n == p {
            return Ok(true);
        }
        if n % p == 0 {
            return Ok(false);
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &base in &MR_BASES {
        let mut x = pow_mod(base, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    // a composite verdict is always final; "prime" is only certified below the bound
    if n >= MR_DETERMINISTIC_BOUND {
        return Err(Error::OutOfRange(n.to_string()));
    }
    Ok(true)
}

pub fn is_prime(n: &BigInt) -> Result<bool> {
    if !n.is_positive() {
        return Ok(false);
    }
    match n.to_u128() {
        Some(v) => is_prime_u128(v),
        None => Err(Error::OutOfRange(n.to_string())),
    }
}

/// One Brent run with polynomial `x^2 + c`. Returns a nontrivial factor or
/// `None` when the run collapses.
fn brent_run(n: u128, c: u128, x0: u128, deadline: Instant) -> Option<std::result::Result<u128, ()>> {
    const BATCH: u64 = 128;
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let mut y = x0;
    let mut r: u64 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        if Instant::now() > deadline {
            return Some(Err(()));
        }
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(Ok(g))
    }
}

fn split_composite(n: u128, deadline: Instant) -> std::result::Result<u128, ()> {
    for attempt in 0u128.. {
        let c = 1 + attempt;
        let x0 = 2 + 3 * attempt;
        match brent_run(n, c % n, x0 % n, deadline) {
            Some(res) => return res,
            None => continue,
        }
    }
    unreachable!()
}

fn factor_into(n: u128, out: &mut Vec<u128>, deadline: Instant, original: u128, start: Instant) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u128(n)? {
        out.push(n);
        return Ok(());
    }
    if let Some(r) = is_perfect_square(&BigInt::from(n)).and_then(|r| r.to_u128()) {
        factor_into(r, out, deadline, original, start)?;
        return factor_into(r, out, deadline, original, start);
    }
    let d = split_composite(n, deadline).map_err(|_| Error::FactorTimeout {
        n: original.to_string(),
        elapsed_ms: start.elapsed().as_millis(),
    })?;
    factor_into(d, out, deadline, original, start)?;
    factor_into(n / d, out, deadline, original, start)
}

/// Full factorization of a positive integer that fits in 128 bits.
pub fn factorize(n: &BigInt, cfg: &FactorConfig) -> Result<Factorization> {
    if !n.is_positive() {
        return Err(Error::invalid(format!("cannot factor non-positive {n}")));
    }
    let Some(mut rest) = n.to_u128() else {
        return Err(Error::OutOfRange(n.to_string()));
    };
    let original = rest;
    let start = Instant::now();
    let deadline = start + cfg.timeout;

    let mut primes: Vec<u128> = Vec::new();
    let mut d = 2u128;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest <= TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT {
            primes.push(rest);
        } else {
            factor_into(rest, &mut primes, deadline, original, start)?;
        }
    }
    primes.sort_unstable();

    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == BigInt::from(p) => *e += 1,
            _ => factors.push((BigInt::from(p), 1)),
        }
    }
    Ok(Factorization { factors })
}

/// Splits `n = m * b^2` with `m` squarefree.
pub fn squarefree_part(n: &BigInt, cfg: &FactorConfig) -> Result<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(Error::invalid(format!("squarefree part needs n >= 1, got {n}")));
    }
    let fac = factorize(n, cfg)?;
    let mut m = BigInt::one();
    let mut b = BigInt::one();
    for (p, e) in &fac.factors {
        if e % 2 == 1 {
            m *= p;
        }
        b *= num_traits::pow(p.clone(), (*e / 2) as usize);
    }
    Ok((m, b))
}

pub fn is_squarefree(n: &BigInt, cfg: &FactorConfig) -> Result<bool> {
    Ok(squarefree_part(n, cfg)?.1.is_one())
}
