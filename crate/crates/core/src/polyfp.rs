//! Dense polynomials over `F_p` (enough to count the roots of
//! `x^8 - 2a x^4 + 1`) and the rational factorization of that polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intkernel::is_perfect_square;

/// Polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

impl PolyFp {
    pub fn new(p: u64, coeffs: &[i128]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i128) as u64)
            .collect();
        Self::trimmed(p, coeffs)
    }

    fn trimmed(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFp { p, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mulmod(acc, x, self.p) + c) % self.p)
    }

    fn sub(&self, other: &PolyFp) -> PolyFp {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::trimmed(self.p, c)
    }

    fn mul(&self, other: &PolyFp) -> PolyFp {
        if self.is_zero() || other.is_zero() {
            return Self::trimmed(self.p, Vec::new());
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        Self::trimmed(self.p, c)
    }

    fn rem(&self, divisor: &PolyFp) -> PolyFp {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[d], self.p);
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = r.len() - 1;
            let q = mulmod(r[top], lead_inv, self.p);
            if q != 0 {
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    let idx = top - d + i;
                    r[idx] = (r[idx] + self.p - mulmod(q, dc, self.p)) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::trimmed(self.p, r)
    }

    fn gcd(&self, other: &PolyFp) -> PolyFp {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `x^e mod self` by square-and-multiply.
    fn x_pow_mod(&self, mut e: u64) -> PolyFp {
        let mut acc = PolyFp::new(self.p, &[1]).rem(self);
        let mut base = PolyFp::new(self.p, &[0, 1]).rem(self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }
}

/// Number of distinct roots in `F_p`: `deg gcd(x^p - x, f)`.
pub fn count_distinct_roots(f: &PolyFp) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::invalid("the zero polynomial has every element as a root"));
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let x = PolyFp::new(f.p, &[0, 1]);
    let h = f.x_pow_mod(f.p).sub(&x);
    Ok(f.gcd(&h).degree().unwrap_or(0))
}

/// `x^8 - 2a x^4 + 1` reduced mod `p`.
pub fn octic_mod(a: &BigInt, p: u64) -> PolyFp {
    let two_a = (a * 2u8).mod_floor(&BigInt::from(p)).to_i128().expect("reduced below p");
    PolyFp::new(p, &[1, 0, 0, 0, -two_a, 0, 0, 0, 1])
}

pub fn splits_completely(a: &BigInt, p: u64) -> Result<bool> {
    if *a < BigInt::from(2) {
        return Err(Error::invalid(format!("need a >= 2, got {a}")));
    }
    if p < 3 || p % 2 == 0 {
        return Err(Error::invalid(format!("need an odd prime, got {p}")));
    }
    Ok(count_distinct_roots(&octic_mod(a, p))? == 8)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFactorization {
    pub reducible: bool,
    /// `t` with `t^2 = 2(a - 1)`.
    pub t: Option<BigInt>,
    /// `(x^4 - t x^2 - 1, x^4 + t x^2 - 1)`, coefficients lowest degree first.
    pub factors: Option<(Vec<BigInt>, Vec<BigInt>)>,
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Factorization of `x^8 - 2a x^4 + 1` over the rationals, for `a` the
/// least Pell solution of some squarefree `m`.
pub fn rational_factorization(a: &BigInt) -> Result<RationalFactorization> {
    if *a < BigInt::from(2) {
        return Err(Error::invalid(format!("need a >= 2, got {a}")));
    }
    if is_perfect_square(&((a + 1u8) * 2u8)).is_some() {
        return Err(Error::contract(format!(
            "2(a+1) is a square for a = {a}; a is not a least Pell solution"
        )));
    }
    let Some(t) = is_perfect_square(&((a - 1u8) * 2u8)) else {
        return Ok(RationalFactorization {
            reducible: false,
            t: None,
            factors: None,
        });
    };
    let one = BigInt::from(1);
    let zero = BigInt::zero();
    let minus = vec![-&one, zero.clone(), -&t, zero.clone(), one.clone()];
    let plus = vec![-&one, zero.clone(), t.clone(), zero.clone(), one.clone()];
    let product = poly_mul_z(&minus, &plus);
    let mut target = vec![BigInt::zero(); 9];
    target[0] = one.clone();
    target[4] = -(a * 2u8);
    target[8] = one;
    if product != target {
        return Err(Error::contract(format!("P_- P_+ does not expand to the octic for a = {a}")));
    }
    Ok(RationalFactorization {
        reducible: true,
        t: Some(t),
        factors: Some((minus, plus)),
    })
}
