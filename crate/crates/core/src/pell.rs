//! Continued fractions of square roots, Pell solutions and the companion
//! sequences `F_n`, `G_n` of `A_{n+1} = 2a A_n - A_{n-1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intkernel::{is_perfect_square, is_prime, isqrt};

/// Periodic expansion `sqrt(m) = [u0; period, period, ...]` with the
/// shortest period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub m: BigInt,
    pub u0: BigInt,
    pub period: Vec<BigInt>,
}

impl CFExpansion {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient `u_i`.
    pub fn term(&self, i: usize) -> &BigInt {
        if i == 0 {
            &self.u0
        } else {
            &self.period[(i - 1) % self.period.len()]
        }
    }

    pub fn convergents(&self) -> Convergents<'_> {
        Convergents {
            cf: self,
            i: 0,
            prev: (BigInt::one(), BigInt::zero()),
            prev2: (BigInt::zero(), BigInt::one()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub i: usize,
    pub h: BigInt,
    pub k: BigInt,
}

/// Lazy stream of convergents `h_i / k_i`.
pub struct Convergents<'a> {
    cf: &'a CFExpansion,
    i: usize,
    prev: (BigInt, BigInt),
    prev2: (BigInt, BigInt),
}

impl Iterator for Convergents<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let u = self.cf.term(self.i);
        let h = u * &self.prev.0 + &self.prev2.0;
        let k = u * &self.prev.1 + &self.prev2.1;
        let prev = std::mem::replace(&mut self.prev, (h.clone(), k.clone()));
        self.prev2 = prev;
        let out = Convergent { i: self.i, h, k };
        self.i += 1;
        Some(out)
    }
}

pub fn cf_sqrt(m: &BigInt) -> Result<CFExpansion> {
    if *m < BigInt::from(2) {
        return Err(Error::invalid(format!("continued fraction of sqrt({m}) needs m >= 2")));
    }
    if is_perfect_square(m).is_some() {
        return Err(Error::invalid(format!("{m} is a perfect square")));
    }
    let u0 = isqrt(m);
    // (P, Q) state: sqrt(m) complete quotient (P + sqrt m) / Q.
    let step = |p: &BigInt, q: &BigInt, u: &BigInt| {
        let p_next = u * q - p;
        let q_next = (m - &p_next * &p_next) / q;
        let u_next = (&u0 + &p_next) / &q_next;
        (p_next, q_next, u_next)
    };
    let (p1, q1, u1) = step(&BigInt::zero(), &BigInt::one(), &u0);
    let start = (p1.clone(), q1.clone());
    let mut period = vec![u1.clone()];
    let (mut p, mut q, mut u) = (p1, q1, u1);
    let mut returns_to_unit = 0usize;
    loop {
        if q.is_one() {
            returns_to_unit += 1;
        }
        let (pn, qn, un) = step(&p, &q, &u);
        if (&pn, &qn) == (&start.0, &start.1) {
            break;
        }
        period.push(un.clone());
        p = pn;
        q = qn;
        u = un;
    }
    if period.last() != Some(&(&u0 * 2)) || returns_to_unit != 1 {
        return Err(Error::contract(format!(
            "continued fraction of sqrt({m}) has a malformed period"
        )));
    }
    Ok(CFExpansion {
        m: m.clone(),
        u0,
        period,
    })
}

pub fn convergents(cf: &CFExpansion, count: usize) -> Vec<Convergent> {
    cf.convergents().take(count).collect()
}

/// Least positive solutions of `X^2 - m Y^2 = 1` and, when it exists,
/// of `X^2 - m Y^2 = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellFundamental {
    pub m: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub negative_fundamental: Option<(BigInt, BigInt)>,
}

impl PellFundamental {
    /// `(a_n, b_n)` with `a_n + b_n sqrt(m) = (a + b sqrt(m))^n`.
    pub fn power(&self, n: u64) -> (BigInt, BigInt) {
        quadratic_pow(&self.m, (&self.a, &self.b), n)
    }
}

/// `(x + y sqrt(m))^n` by square-and-multiply.
fn quadratic_pow(m: &BigInt, base: (&BigInt, &BigInt), mut n: u64) -> (BigInt, BigInt) {
    let mul = |l: &(BigInt, BigInt), r: &(BigInt, BigInt)| {
        (
            &l.0 * &r.0 + m * &l.1 * &r.1,
            &l.0 * &r.1 + &l.1 * &r.0,
        )
    };
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut sq = (base.0.clone(), base.1.clone());
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(&acc, &sq);
        }
        n >>= 1;
        if n > 0 {
            sq = mul(&sq, &sq);
        }
    }
    acc
}

pub fn least_pell(m: &BigInt) -> Result<PellFundamental> {
    let cf = cf_sqrt(m)?;
    let r = cf.period_len();
    let l = if r % 2 == 0 { r } else { 2 * r };
    let mut negative = None;
    let mut fundamental = None;
    for c in cf.convergents().take(l) {
        if r % 2 == 1 && c.i == r - 1 {
            negative = Some((c.h.clone(), c.k.clone()));
        }
        if c.i == l - 1 {
            fundamental = Some((c.h, c.k));
        }
    }
    let (a, b) = fundamental.expect("l >= 1 convergents taken");
    if &a * &a - m * &b * &b != BigInt::one() {
        return Err(Error::contract(format!("h_(l-1)^2 - {m} k_(l-1)^2 != 1")));
    }
    if let Some((a0, b0)) = &negative {
        let sq = quadratic_pow(m, (a0, b0), 2);
        if a0 * a0 - m * b0 * b0 != -BigInt::one() || sq != (a.clone(), b.clone()) {
            return Err(Error::contract(format!("negative Pell solution for {m} is inconsistent")));
        }
    }
    Ok(PellFundamental {
        m: m.clone(),
        a,
        b,
        negative_fundamental: negative,
    })
}

pub fn pell_power(m: &BigInt, n: u64) -> Result<(BigInt, BigInt)> {
    if n == 0 {
        return Err(Error::invalid("Pell power index must be >= 1"));
    }
    Ok(least_pell(m)?.power(n))
}

/// `F_n`, `G_n` of the recurrence with `F_0 = 0, F_1 = 1, G_0 = 2, G_1 = 2a`,
/// optionally reduced modulo an odd prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasPair {
    pub n: u64,
    pub f: BigInt,
    pub g: BigInt,
    pub modulus: Option<BigInt>,
}

type Mat = [[BigInt; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat, modulus: Option<&BigInt>) -> Mat {
    let entry = |i: usize, j: usize| {
        let v = &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        match modulus {
            Some(p) => v.mod_floor(p),
            None => v,
        }
    };
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// Computes `(F_n, G_n)` from the matrix power
/// `[[2a, -1], [1, 0]]^n = [[F_{n+1}, -F_n], [F_n, -F_{n-1}]]`,
/// using `G_n = F_{n+1} - F_{n-1}`.
pub fn lucas_pair(a: &BigInt, n: u64, modulus: Option<&BigInt>) -> Result<LucasPair> {
    if *a < BigInt::from(2) {
        return Err(Error::invalid(format!("Lucas pair needs a >= 2, got {a}")));
    }
    if let Some(p) = modulus {
        if p.is_even() || !is_prime(p)? {
            return Err(Error::invalid(format!("modulus {p} is not an odd prime")));
        }
    }
    let reduce = |v: BigInt| match modulus {
        Some(p) => v.mod_floor(p),
        None => v,
    };
    let mut acc: Mat = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    let mut base: Mat = [
        [reduce(a * 2), reduce(-BigInt::one())],
        [BigInt::one(), BigInt::zero()],
    ];
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, modulus);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base, modulus);
        }
    }
    let f_next = acc[0][0].clone();
    let f = acc[1][0].clone();
    let f_prev = -acc[1][1].clone();
    Ok(LucasPair {
        n,
        f: reduce(f),
        g: reduce(f_next - f_prev),
        modulus: modulus.cloned(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub p: u64,
    pub rho: u64,
    pub divides_some_a_n: bool,
    /// `p | a^2 - 1`: the characteristic polynomial has a double root mod p.
    pub degenerate: bool,
}

/// Rank of apparition of `p` in `F_n`: least `n > 0` with `p | F_n`.
pub fn rank_rho(a: &BigInt, p: u64) -> Result<RankResult> {
    if p < 3 || p % 2 == 0 || !is_prime(&BigInt::from(p))? {
        return Err(Error::invalid(format!("rank needs an odd prime, got {p}")));
    }
    let pm = BigInt::from(p);
    let a_mod = a.mod_floor(&pm).to_u64().expect("reduced below p");
    let two_a = (2 * a_mod as u128 % p as u128) as u64;
    let degenerate = (a_mod as u128 * a_mod as u128 % p as u128) == 1;

    let (mut prev, mut cur) = (0u64, 1u64);
    let mut n = 1u64;
    while cur != 0 {
        if n > p + 1 {
            return Err(Error::contract(format!("rank of {p} exceeds p + 1")));
        }
        let next = ((two_a as u128 * cur as u128 + (p - prev) as u128) % p as u128) as u64;
        prev = cur;
        cur = next;
        n += 1;
    }
    if degenerate && n != p {
        return Err(Error::contract(format!("degenerate rank of {p} is {n}, expected p")));
    }
    Ok(RankResult {
        p,
        rho: n,
        divides_some_a_n: n % 2 == 0,
        degenerate,
    })
}

pub(crate) fn is_negative_one(v: &BigInt) -> bool {
    v.is_negative() && v.abs().is_one()
}
