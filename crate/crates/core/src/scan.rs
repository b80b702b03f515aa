//! Search for order-2 cosets along the even-index convergent denominators
//! of `sqrt(2)`.
//!
//! If `a^2 - m b^2 = -1` and `a^2 + m b^2 = c^2` then `c^2 - 2a^2 = 1`, and
//! `c - a`, `c + a` are consecutive even-index denominators `k_{2s-2}`,
//! `k_{2s}`. Each pair yields `m` as the squarefree part of their product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::classgroup::{certify_order_two, TorsionCertificate};
use crate::error::{Error, Result};
use crate::intkernel::{squarefree_part, FactorConfig};
use crate::triplegroup::{normalize, GroupContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub s: u64,
    pub k_prev: BigInt,
    pub k_next: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub m: BigInt,
    pub satisfies_m_gt_c: bool,
}

impl Candidate {
    /// Re-checks every defining identity exactly.
    pub fn verify(&self, cfg: &FactorConfig) -> Result<()> {
        let (a, b, c, m) = (&self.a, &self.b, &self.c, &self.m);
        let ok = c - a == self.k_prev
            && c + a == self.k_next
            && c * c == a * a * 2 + 1
            && m * b * b == &self.k_prev * &self.k_next
            && a * a - m * b * b == BigInt::from(-1)
            && a * a + m * b * b == c * c
            && squarefree_part(m, cfg)?.1.is_one();
        if ok {
            Ok(())
        } else {
            Err(Error::contract(format!("candidate s={} fails its identities", self.s)))
        }
    }
}

/// `k_0, k_2, k_4, ...` from `k_{2(s+1)} = 6 k_{2s} - k_{2s-2}`, `k_0 = 1`, `k_2 = 5`.
pub fn sqrt2_even_denominators(count: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(count);
    for i in 0..count {
        let next = match i {
            0 => BigInt::one(),
            1 => BigInt::from(5),
            _ => &out[i - 1] * 6 - &out[i - 2],
        };
        out.push(next);
    }
    out
}

pub fn scan_candidates(max_s: u64, cfg: &FactorConfig) -> Result<Vec<Candidate>> {
    if max_s == 0 {
        return Err(Error::invalid("max_s must be >= 1"));
    }
    let ks = sqrt2_even_denominators(max_s as usize + 1);
    ks.windows(2)
        .zip(1..)
        .map(|(pair, s)| {
            let wrap = |e: Error| Error::Candidate { s, source: Box::new(e) };
            let (k_prev, k_next) = (&pair[0], &pair[1]);
            let (m, b) = squarefree_part(&(k_prev * k_next), cfg).map_err(wrap)?;
            let c = (k_prev + k_next).div_floor(&BigInt::from(2));
            let a = (k_next - k_prev).div_floor(&BigInt::from(2));
            let cand = Candidate {
                s,
                k_prev: k_prev.clone(),
                k_next: k_next.clone(),
                satisfies_m_gt_c: m > c,
                a,
                b,
                c,
                m,
            };
            cand.verify(cfg).map_err(wrap)?;
            Ok(cand)
        })
        .collect()
}

/// Candidate together with its order-2 certificate, when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedCandidate {
    pub candidate: Candidate,
    pub certificate: Option<TorsionCertificate>,
}

pub fn certify_candidate(cand: &Candidate, cfg: &FactorConfig) -> Result<TorsionCertificate> {
    let ctx = GroupContext::with_config(&cand.m, cfg)?;
    let t = normalize(&ctx, &cand.a, &cand.b, &cand.c)?;
    certify_order_two(&ctx, &t)
}

/// Every candidate up to `max_s`, with certificates attached where the
/// class map proves non-principality.
pub fn scan_certified(max_s: u64, cfg: &FactorConfig) -> Result<Vec<CertifiedCandidate>> {
    scan_candidates(max_s, cfg)?
        .into_iter()
        .map(|candidate| {
            let certificate = match certify_candidate(&candidate, cfg) {
                Ok(cert) => Some(cert),
                Err(Error::CertificateRefused(_)) if !candidate.satisfies_m_gt_c => None,
                Err(e) => {
                    return Err(Error::Candidate {
                        s: candidate.s,
                        source: Box::new(e),
                    })
                }
            };
            Ok(CertifiedCandidate { candidate, certificate })
        })
        .collect()
}

/// Rows with `m > c`, each certified; any refusal is an error.
pub fn reproduce_table(max_s: u64, cfg: &FactorConfig) -> Result<Vec<CertifiedCandidate>> {
    scan_candidates(max_s, cfg)?
        .into_iter()
        .filter(|c| c.satisfies_m_gt_c)
        .map(|candidate| {
            let cert = certify_candidate(&candidate, cfg).map_err(|e| Error::Candidate {
                s: candidate.s,
                source: Box::new(e),
            })?;
            Ok(CertifiedCandidate {
                candidate,
                certificate: Some(cert),
            })
        })
        .collect()
}

/// One JSON-lines record.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateRecord {
    pub s: u64,
    pub m: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub m_greater_c: bool,
    pub certificate: Option<TorsionCertificate>,
}

impl From<&CertifiedCandidate> for CandidateRecord {
    fn from(cc: &CertifiedCandidate) -> Self {
        let c = &cc.candidate;
        CandidateRecord {
            s: c.s,
            m: c.m.to_string(),
            a: c.a.to_string(),
            b: c.b.to_string(),
            c: c.c.to_string(),
            m_greater_c: c.satisfies_m_gt_c,
            certificate: cc.certificate.clone(),
        }
    }
}
