//! Ideal classes of `Q(sqrt(-m))` realized as reduced positive definite
//! binary quadratic forms, the map `[x, y, z] -> [<z, x + y sqrt(-m)>]`,
//! and certificates for order-2 cosets modulo the Pell subgroup.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intkernel::{ext_gcd, gcd3, is_perfect_square, isqrt};
use crate::pell::is_negative_one;
use crate::triplegroup::{add, neg, normalize, GroupContext, PrimitiveTriple};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discriminant {
    pub m: BigInt,
    pub d: BigInt,
}

impl Discriminant {
    /// True when the maximal order is `Z[(1 + sqrt(-m))/2]`.
    pub fn half_integral(&self) -> bool {
        self.d == -&self.m
    }
}

/// `-m` when `m = 3 (mod 4)`, else `-4m`.
pub fn discriminant(m: &BigInt) -> Discriminant {
    let d = if m.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
        -m.clone()
    } else {
        -m * 4
    };
    Discriminant { m: m.clone(), d }
}

/// `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string(), self.c.to_string()].serialize(s)
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Form with leading coefficient `a` and middle `b`; `c` solved from `d`.
    pub fn from_ab(a: BigInt, b: BigInt, d: &BigInt) -> Result<Self> {
        let num = &b * &b - d;
        let four_a = &a * 4;
        if a.is_zero() || !num.is_multiple_of(&four_a) {
            return Err(Error::contract(format!(
                "no form ({a}, {b}, ?) of discriminant {d}"
            )));
        }
        let c = num / four_a;
        Ok(QuadForm { a, b, c })
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - &self.a * &self.c * 4
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(&self.a, &self.b, &self.c).is_one()
    }

    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        abs_b <= self.a
            && self.a <= self.c
            && (!(abs_b == self.a || self.a == self.c) || !self.b.is_negative())
    }

    /// The identity class: `(1, 0, m)` or `(1, 1, (1 + m)/4)`.
    pub fn principal(disc: &Discriminant) -> QuadForm {
        let b = if disc.half_integral() { BigInt::one() } else { BigInt::zero() };
        QuadForm::from_ab(BigInt::one(), b, &disc.d).expect("principal form exists")
    }

    pub fn is_principal(&self) -> bool {
        let r = self.reduce();
        r.a.is_one()
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm::new(self.a.clone(), -&self.b, self.c.clone()).reduce()
    }

    /// Gauss reduction to the unique reduced form of the class.
    pub fn reduce(&self) -> QuadForm {
        assert!(self.a.is_positive() && self.c.is_positive(), "form {self} is not positive definite");
        let d = self.discriminant();
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        loop {
            if b > a || b <= -&a {
                // b - 2ak in (-a, a]
                let two_a = &a * 2;
                let k = -(-(&b - &a)).div_floor(&two_a);
                b -= &two_a * k;
                c = (&b * &b - &d) / (&a * 4);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b.is_negative() {
                b = -b;
            }
            break;
        }
        QuadForm { a, b, c }
    }

    /// Dirichlet composition, returned reduced.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let d = self.discriminant();
        assert_eq!(d, other.discriminant(), "composing forms of different discriminants");
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let s: BigInt = (&f1.b + &f2.b) / 2;
        let n = &f2.b - &s;
        let (d0, y1) = if f2.a.is_multiple_of(&f1.a) {
            (f1.a.clone(), BigInt::zero())
        } else {
            let (g, u, _) = ext_gcd(&f2.a, &f1.a);
            (g, u)
        };
        let (d1, x2, y2) = if s.is_multiple_of(&d0) {
            (d0.clone(), BigInt::zero(), -BigInt::one())
        } else {
            let (g, u, v) = ext_gcd(&s, &d0);
            (g, u, -v)
        };
        let v1 = &f1.a / &d1;
        let v2 = &f2.a / &d1;
        let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
        let b3 = &f2.b + &v2 * &r * 2;
        let a3 = &v1 * &v2;
        let c3 = (&f2.c * &d1 + &r * (&f2.b + &v2 * &r)) / &v1;
        let out = QuadForm::new(a3, b3, c3);
        debug_assert_eq!(out.discriminant(), d);
        out.reduce()
    }
}

/// All reduced primitive forms of discriminant `d`, ascending by `(a, b)`.
pub fn reduced_forms(d: &BigInt) -> Vec<QuadForm> {
    let bound = isqrt(&(-d / 3));
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while a <= bound {
        let four_a = &a * 4;
        let mut b: BigInt = -&a + 1;
        while b <= a {
            let num: BigInt = &b * &b - d;
            if num.is_multiple_of(&four_a) {
                let f = QuadForm::new(a.clone(), b.clone(), &num / &four_a);
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

pub fn class_number(m: &BigInt) -> u64 {
    reduced_forms(&discriminant(m).d).len() as u64
}

/// Integral ideal with Z-basis `{n, t + s w}` over the maximal order basis
/// `{1, w}`, where `w = sqrt(-m)` or `(1 + sqrt(-m))/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadIdeal {
    pub disc: Discriminant,
    pub n: BigInt,
    pub t: BigInt,
    pub s: BigInt,
}

/// Element `u + v w` of the maximal order, as coordinates `(u, v)`.
type Elem = (BigInt, BigInt);

fn elem_mul(disc: &Discriminant, x: &Elem, y: &Elem) -> Elem {
    let (u1, v1) = x;
    let (u2, v2) = y;
    if disc.half_integral() {
        // w^2 = w - (1 + m)/4
        let k = (&disc.m + 1) / 4;
        let vv = v1 * v2;
        (u1 * u2 - &k * &vv, u1 * v2 + v1 * u2 + vv)
    } else {
        // w^2 = -m
        (u1 * u2 - &disc.m * v1 * v2, u1 * v2 + v1 * u2)
    }
}

/// `x + y sqrt(-m)` in `{1, w}` coordinates.
fn from_sqrt_coords(disc: &Discriminant, x: &BigInt, y: &BigInt) -> Elem {
    if disc.half_integral() {
        (x - y, y * 2)
    } else {
        (x.clone(), y.clone())
    }
}

impl QuadIdeal {
    /// Ideal generated over the maximal order by the given elements.
    pub fn generated_by(disc: &Discriminant, gens: &[Elem]) -> Result<QuadIdeal> {
        let w: Elem = (BigInt::zero(), BigInt::one());
        let mut lattice = Vec::with_capacity(2 * gens.len());
        for g in gens {
            lattice.push(g.clone());
            lattice.push(elem_mul(disc, g, &w));
        }
        Self::from_lattice(disc, lattice)
    }

    /// Hermite normal form of the Z-span of `rows`.
    fn from_lattice(disc: &Discriminant, rows: Vec<Elem>) -> Result<QuadIdeal> {
        let mut pivot: Elem = (BigInt::zero(), BigInt::zero());
        let mut n = BigInt::zero();
        for row in rows {
            let (mut p, mut r) = (pivot, row);
            while !r.1.is_zero() {
                let q = p.1.div_floor(&r.1);
                p = (&p.0 - &q * &r.0, &p.1 - &q * &r.1);
                std::mem::swap(&mut p, &mut r);
            }
            n = n.gcd(&r.0);
            pivot = p;
        }
        if pivot.1.is_negative() {
            pivot = (-pivot.0, -pivot.1);
        }
        if n.is_zero() || pivot.1.is_zero() {
            return Err(Error::contract("ideal lattice is not of full rank"));
        }
        let s = pivot.1;
        let t = pivot.0.mod_floor(&n);
        if !n.is_multiple_of(&s) || !t.is_multiple_of(&s) {
            return Err(Error::contract(format!("HNF ({n}, {t}, {s}) is not an ideal")));
        }
        let ideal = QuadIdeal { disc: disc.clone(), n, t, s };
        ideal.check_closed()?;
        Ok(ideal)
    }

    fn contains(&self, e: &Elem) -> bool {
        if !e.1.is_multiple_of(&self.s) {
            return false;
        }
        let k = &e.1 / &self.s;
        (&e.0 - &k * &self.t).is_multiple_of(&self.n)
    }

    fn basis(&self) -> [Elem; 2] {
        [
            (self.n.clone(), BigInt::zero()),
            (self.t.clone(), self.s.clone()),
        ]
    }

    fn check_closed(&self) -> Result<()> {
        let w: Elem = (BigInt::zero(), BigInt::one());
        for b in self.basis() {
            if !self.contains(&elem_mul(&self.disc, &b, &w)) {
                return Err(Error::contract("lattice is not closed under w"));
            }
        }
        Ok(())
    }

    pub fn norm(&self) -> BigInt {
        &self.n * &self.s
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        let mut gens = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                gens.push(elem_mul(&self.disc, &x, &y));
            }
        }
        Self::from_lattice(&self.disc, gens)
    }

    /// Norm form of the primitive part `[A, B + w]`, `A = n/s`, `B = t/s`.
    pub fn to_form(&self) -> Result<QuadForm> {
        let a = &self.n / &self.s;
        let bb = &self.t / &self.s;
        let (b, c_num) = if self.disc.half_integral() {
            let k = (&self.disc.m + 1) / 4;
            (&bb * 2 + 1, &bb * &bb + &bb + k)
        } else {
            (&bb * 2, &bb * &bb + &self.disc.m)
        };
        if !c_num.is_multiple_of(&a) {
            return Err(Error::contract(format!("ideal {self:?} has no integral norm form")));
        }
        Ok(QuadForm::new(a.clone(), b, c_num / a))
    }

    /// Inverse of [`QuadIdeal::to_form`] on primitive forms.
    pub fn from_form(disc: &Discriminant, f: &QuadForm) -> Result<QuadIdeal> {
        let bb = if disc.half_integral() { (&f.b - 1) / 2 } else { &f.b / 2 };
        let gens = [(f.a.clone(), BigInt::zero()), (bb, BigInt::one())];
        Self::from_lattice(disc, gens.to_vec())
    }
}

/// `<z, x + y sqrt(-m)>` over the maximal order.
pub fn ideal_from_triple(ctx: &GroupContext, t: &PrimitiveTriple) -> Result<QuadIdeal> {
    let disc = discriminant(ctx.m());
    let gens = [
        (t.z().clone(), BigInt::zero()),
        from_sqrt_coords(&disc, t.x(), t.y()),
    ];
    QuadIdeal::generated_by(&disc, &gens)
}

/// Reduced form of the class of `<z, x + y sqrt(-m)>`.
pub fn f_m_image(ctx: &GroupContext, t: &PrimitiveTriple) -> Result<QuadForm> {
    Ok(ideal_from_triple(ctx, t)?.to_form()?.reduce())
}

/// Some `(x, y)` with `x, y >= 0` and `x^2 + m y^2 = c`, preferring the
/// largest `y`.
pub fn represents(c: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    if c.is_negative() || !m.is_positive() {
        return None;
    }
    let mut y = isqrt(&(c / m));
    loop {
        if let Some(x) = is_perfect_square(&(c - m * &y * &y)) {
            return Some((x, y));
        }
        if y.is_zero() {
            return None;
        }
        y -= 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum NonPrincipalityEvidence {
    /// `m > z`: no element of norm `z` exists.
    MGreaterC,
    /// `x^2 + m y^2 = z` has no solution.
    RepresentationFailure,
    /// The reduced form of the class is not the principal form.
    ReducedFormNonprincipal,
}

/// Evidence that `t + P_m` has order exactly 2 in `G_m / P_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TorsionCertificate {
    pub triple: PrimitiveTriple,
    pub negative_pell: bool,
    /// `[1, 2xy, z^2]`, the Pell-subgroup element equal to `-2t`.
    pub doubling: PrimitiveTriple,
    /// `2t` itself.
    pub twice: PrimitiveTriple,
    pub evidence: NonPrincipalityEvidence,
    /// Reduced form of the image class.
    pub form: QuadForm,
}

pub fn certify_order_two(ctx: &GroupContext, t: &PrimitiveTriple) -> Result<TorsionCertificate> {
    let m = ctx.m();
    let (x, y, z) = (t.x(), t.y(), t.z());
    if !is_negative_one(&(x * x - m * y * y)) {
        return Err(Error::NotEligible(format!("{x}^2 - {m}*{y}^2 != -1 for [{t}]")));
    }

    let twice = add(ctx, t, t);
    let two_xy = x * y * 2;
    let z2 = z * z;
    let doubling = normalize(ctx, &BigInt::one(), &two_xy, &z2)?;
    if BigInt::one() + m * &two_xy * &two_xy != &z2 * &z2 || twice != neg(ctx, &doubling) {
        return Err(Error::contract(format!("doubling identity fails for [{t}]")));
    }

    let disc = discriminant(m);
    let ideal = ideal_from_triple(ctx, t)?;
    if ideal.norm() != *z {
        return Err(Error::contract(format!("ideal of [{t}] has norm {} != {z}", ideal.norm())));
    }
    let form = ideal.to_form()?.reduce();
    let form_principal = form == QuadForm::principal(&disc);

    let evidence = if m > z {
        NonPrincipalityEvidence::MGreaterC
    } else if !disc.half_integral() && represents(z, m).is_none() {
        NonPrincipalityEvidence::RepresentationFailure
    } else if !form_principal {
        NonPrincipalityEvidence::ReducedFormNonprincipal
    } else {
        return Err(Error::CertificateRefused(format!(
            "the class of <{z}, {x} + {y} sqrt(-{m})> is principal"
        )));
    };
    if form_principal {
        return Err(Error::contract(format!(
            "{evidence:?} claims non-principal but the reduced form of [{t}] is principal"
        )));
    }
    Ok(TorsionCertificate {
        triple: t.clone(),
        negative_pell: true,
        doubling,
        twice,
        evidence,
        form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triplegroup::triple;

    fn ctx(m: i64) -> GroupContext {
        GroupContext::new(&BigInt::from(m)).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&BigInt::from(5)).d, BigInt::from(-20));
        assert_eq!(discriminant(&BigInt::from(6)).d, BigInt::from(-24));
        assert_eq!(discriminant(&BigInt::from(3)).d, BigInt::from(-3));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(QuadForm::new(3, 4, 3).reduce(), QuadForm::new(2, 2, 3));
        assert_eq!(QuadForm::new(1, 0, 5).reduce(), QuadForm::new(1, 0, 5));
        assert_eq!(QuadForm::new(5, 6, 3).reduce(), QuadForm::new(2, 0, 3));
        assert_eq!(
            reduced_forms(&BigInt::from(-24)),
            vec![QuadForm::new(1, 0, 6), QuadForm::new(2, 0, 3)]
        );
        // large b relative to a
        let f = QuadForm::new(9, 14, 6);
        assert_eq!(f.reduce(), QuadForm::new(1, 0, 5));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(QuadForm::new(1, 0, 6).compose(&QuadForm::new(2, 0, 3)), QuadForm::new(2, 0, 3));
        assert_eq!(QuadForm::new(2, 2, 3).compose(&QuadForm::new(2, 2, 3)), QuadForm::new(1, 0, 5));
        assert_eq!(QuadForm::new(2, 0, 3).compose(&QuadForm::new(2, 0, 3)), QuadForm::new(1, 0, 6));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(&BigInt::from(6)), 2);
        assert_eq!(class_number(&BigInt::from(5)), 2);
        assert_eq!(class_number(&BigInt::from(29)), 6);
        assert_eq!(class_number(&BigInt::from(3)), 1);
    }

    #[test]
    fn ideal_examples() {
        let c5 = ctx(5);
        let i = ideal_from_triple(&c5, &triple(&c5, 2, 1, 3).unwrap()).unwrap();
        assert_eq!((i.n.clone(), i.t.clone(), i.s.clone()), (3.into(), 2.into(), 1.into()));
        assert_eq!(i.norm(), BigInt::from(3));
        assert_eq!(i.to_form().unwrap(), QuadForm::new(3, 4, 3));

        let i = ideal_from_triple(&c5, &c5.identity()).unwrap();
        assert_eq!(i.norm(), BigInt::one());

        let c6 = ctx(6);
        let i = ideal_from_triple(&c6, &triple(&c6, 1, 2, 5).unwrap()).unwrap();
        assert_eq!((i.n.clone(), i.t.clone(), i.s.clone()), (5.into(), 3.into(), 1.into()));
        assert_eq!(i.to_form().unwrap(), QuadForm::new(5, 6, 3));

        let i = ideal_from_triple(&c5, &triple(&c5, 1, 4, 9).unwrap()).unwrap();
        assert_eq!(i.to_form().unwrap(), QuadForm::new(9, 14, 6));
    }

    #[test]
    fn image_examples() {
        let c5 = ctx(5);
        assert_eq!(f_m_image(&c5, &triple(&c5, 2, 1, 3).unwrap()).unwrap(), QuadForm::new(2, 2, 3));
        assert_eq!(f_m_image(&c5, &triple(&c5, 1, 4, 9).unwrap()).unwrap(), QuadForm::new(1, 0, 5));
        let c6 = ctx(6);
        let img = f_m_image(&c6, &triple(&c6, 1, 2, 5).unwrap()).unwrap();
        assert_eq!(img, QuadForm::new(2, 0, 3));
        assert!(!img.is_principal());
    }

    #[test]
    fn half_integral_ideals() {
        // m = 3: [1,1,2] and 1 + sqrt(-3) = 2w, so <2, 2w> = <2>
        let c3 = ctx(3);
        let i = ideal_from_triple(&c3, &triple(&c3, 1, 1, 2).unwrap()).unwrap();
        assert_eq!(i.norm(), BigInt::from(4));
        assert!(i.to_form().unwrap().is_principal());
        let c7 = ctx(7);
        let i = ideal_from_triple(&c7, &triple(&c7, 3, 1, 4).unwrap()).unwrap();
        assert_eq!(i.to_form().unwrap().discriminant(), BigInt::from(-7));
    }

    #[test]
    fn represents_examples() {
        assert_eq!(represents(&BigInt::from(99), &BigInt::from(29)), None);
        assert_eq!(
            represents(&BigInt::from(9), &BigInt::from(5)),
            Some((BigInt::from(2), BigInt::from(1)))
        );
        assert_eq!(
            represents(&BigInt::from(1), &BigInt::from(7)),
            Some((BigInt::from(1), BigInt::from(0)))
        );
    }

    #[test]
    fn certificate_examples() {
        let c5 = ctx(5);
        let cert = certify_order_two(&c5, &triple(&c5, 2, 1, 3).unwrap()).unwrap();
        assert_eq!(cert.evidence, NonPrincipalityEvidence::MGreaterC);
        assert_eq!(cert.twice.to_string(), "-1,4,9");
        assert_eq!(cert.doubling.to_string(), "1,4,9");

        let c29 = ctx(29);
        let cert = certify_order_two(&c29, &triple(&c29, 70, 13, 99).unwrap()).unwrap();
        assert_eq!(cert.evidence, NonPrincipalityEvidence::RepresentationFailure);

        let c145 = ctx(145);
        let cert = certify_order_two(&c145, &triple(&c145, 12, 1, 17).unwrap()).unwrap();
        assert_eq!(cert.evidence, NonPrincipalityEvidence::MGreaterC);
    }

    #[test]
    fn certificate_errors() {
        let c6 = ctx(6);
        assert!(matches!(
            certify_order_two(&c6, &triple(&c6, 1, 2, 5).unwrap()),
            Err(Error::NotEligible(_))
        ));
        // the inverse class certifies as well
        let c5 = ctx(5);
        assert!(certify_order_two(&c5, &triple(&c5, -2, 1, 3).unwrap()).is_ok());
    }
}
