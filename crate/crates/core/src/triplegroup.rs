//! The group of primitive solutions of `x^2 + m y^2 = z^2`.
//!
//! A class is stored as its canonical primitive representative: `z > 0`,
//! `gcd(x, y, z) = 1`, and `y > 0` or (`y = 0` and `x > 0`). The pairs
//! `[x, y, z]` and `[-x, -y, z]` name the same class.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intkernel::{gcd3, squarefree_part, FactorConfig};
use crate::pell::{least_pell, PellFundamental};

/// Fixes `m` for all group operations. The fundamental Pell solution is
/// computed on first use; for large `m` it can be enormous and most
/// operations never need it.
#[derive(Debug)]
pub struct GroupContext {
    m: BigInt,
    fundamental: OnceLock<PellFundamental>,
}

impl GroupContext {
    pub fn new(m: &BigInt) -> Result<Self> {
        Self::with_config(m, &FactorConfig::default())
    }

    pub fn with_config(m: &BigInt, cfg: &FactorConfig) -> Result<Self> {
        if *m <= BigInt::one() {
            return Err(Error::invalid(format!("m must be > 1, got {m}")));
        }
        let (_, b) = squarefree_part(m, cfg)?;
        if !b.is_one() {
            return Err(Error::invalid(format!("m = {m} is not squarefree")));
        }
        Ok(GroupContext {
            m: m.clone(),
            fundamental: OnceLock::new(),
        })
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn fundamental(&self) -> &PellFundamental {
        self.fundamental
            .get_or_init(|| least_pell(&self.m).expect("squarefree m > 1 is never a square"))
    }

    pub fn identity(&self) -> PrimitiveTriple {
        PrimitiveTriple {
            x: BigInt::one(),
            y: BigInt::zero(),
            z: BigInt::one(),
        }
    }

    pub fn on_conic(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> bool {
        x * x + &self.m * y * y == z * z
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitiveTriple {
    x: BigInt,
    y: BigInt,
    z: BigInt,
}

impl PrimitiveTriple {
    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn z(&self) -> &BigInt {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_one() && self.y.is_zero() && self.z.is_one()
    }

    pub fn components(&self) -> [&BigInt; 3] {
        [&self.x, &self.y, &self.z]
    }
}

impl fmt::Display for PrimitiveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl Serialize for PrimitiveTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string(), self.z.to_string()].serialize(s)
    }
}

/// Unvalidated `x,y,z` as typed on a command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTriple(pub BigInt, pub BigInt, pub BigInt);

impl FromStr for RawTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected x,y,z but got {s:?}")));
        }
        let parse = |p: &str| {
            p.parse::<BigInt>()
                .map_err(|_| Error::invalid(format!("{p:?} is not an integer")))
        };
        Ok(RawTriple(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
    }
}

/// Divides out the content, forces `z > 0` and applies the canonical sign.
pub fn normalize(ctx: &GroupContext, x: &BigInt, y: &BigInt, z: &BigInt) -> Result<PrimitiveTriple> {
    if z.is_zero() {
        return Err(Error::invalid("z must be nonzero"));
    }
    if !ctx.on_conic(x, y, z) {
        return Err(Error::invalid(format!(
            "({x}, {y}, {z}) is not on x^2 + {}y^2 = z^2",
            ctx.m
        )));
    }
    Ok(canonical(x, y, z))
}

/// Canonical form of a point already known to lie on the conic.
fn canonical(x: &BigInt, y: &BigInt, z: &BigInt) -> PrimitiveTriple {
    let g = gcd3(x, y, z);
    let (mut x, mut y, mut z) = (x / &g, y / &g, z / &g);
    if z.is_negative() {
        x = -x;
        y = -y;
        z = -z;
    }
    if y.is_negative() || (y.is_zero() && x.is_negative()) {
        x = -x;
        y = -y;
    }
    debug_assert!(!x.is_zero(), "x = 0 is impossible for squarefree m > 1");
    PrimitiveTriple { x, y, z }
}

pub fn triple(ctx: &GroupContext, x: i64, y: i64, z: i64) -> Result<PrimitiveTriple> {
    normalize(ctx, &BigInt::from(x), &BigInt::from(y), &BigInt::from(z))
}

/// Group law; also returns the content `g` removed from the raw product.
pub fn add_with_gcd(ctx: &GroupContext, t1: &PrimitiveTriple, t2: &PrimitiveTriple) -> (PrimitiveTriple, BigInt) {
    let (x, y, z) = (&t1.x, &t1.y, &t1.z);
    let (a, b, c) = (&t2.x, &t2.y, &t2.z);
    let u = x * a - &ctx.m * y * b;
    let v = x * b + y * a;
    let w = z * c;
    let g = gcd3(&u, &v, &w);
    (canonical(&u, &v, &w), g)
}

pub fn add(ctx: &GroupContext, t1: &PrimitiveTriple, t2: &PrimitiveTriple) -> PrimitiveTriple {
    add_with_gcd(ctx, t1, t2).0
}

pub fn neg(_ctx: &GroupContext, t: &PrimitiveTriple) -> PrimitiveTriple {
    canonical(&t.x, &-&t.y, &t.z)
}

pub fn scalar_mul(ctx: &GroupContext, k: &BigInt, t: &PrimitiveTriple) -> PrimitiveTriple {
    let base = if k.is_negative() { neg(ctx, t) } else { t.clone() };
    let mut e = k.abs();
    let mut acc = ctx.identity();
    let mut sq = base;
    while !e.is_zero() {
        if e.is_odd() {
            acc = add(ctx, &acc, &sq);
        }
        e >>= 1;
        if !e.is_zero() {
            sq = add(ctx, &sq, &sq);
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    One,
    Three,
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::One => "1",
            Order::Three => "3",
            Order::Infinite => "infinite",
        })
    }
}

/// Torsion in `G_m` is trivial except for `Z/3Z` when `m = 3`.
pub fn order(ctx: &GroupContext, t: &PrimitiveTriple) -> Order {
    if t.is_identity() {
        Order::One
    } else if ctx.m == BigInt::from(3) && scalar_mul(ctx, &BigInt::from(3), t).is_identity() {
        Order::Three
    } else {
        Order::Infinite
    }
}

/// `[1, b_n, a_n]` for the `n`-th Pell solution.
pub fn pell_generator(ctx: &GroupContext, n: u64) -> Result<PrimitiveTriple> {
    if n == 0 {
        return Err(Error::invalid("Pell generator index must be >= 1"));
    }
    let (a, b) = ctx.fundamental().power(n);
    normalize(ctx, &BigInt::one(), &b, &a)
}

/// `[u^2 - m v^2, 2uv, u^2 + m v^2]`, the class of `(u + v sqrt(-m))^2`.
/// Every class of `G_m` arises this way.
pub fn from_parameters(ctx: &GroupContext, u: &BigInt, v: &BigInt) -> Result<PrimitiveTriple> {
    let mv2 = &ctx.m * v * v;
    let uu = u * u;
    normalize(ctx, &(&uu - &mv2), &(u * v * 2), &(&uu + &mv2))
}
