//! Irreducibility certificates: a stable JSON encoding and a verifier that
//! re-derives every hypothesis from the polynomial and the witness alone.
//!
//! Integers are written as decimal strings so that no consumer silently
//! rounds them. Keys appear in a fixed order and unknown keys are rejected.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::Variant;
use crate::nt::{self, PrimalityResult, Sign, Verdict};
use crate::poly::Polynomial;

pub const FORMAT_VERSION: u32 = 1;
pub const FILE_EXTENSION: &str = ".irrcert.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimalityEvidence {
    pub method: String,
    pub deterministic: bool,
}

impl From<PrimalityResult> for PrimalityEvidence {
    fn from(r: PrimalityResult) -> Self {
        PrimalityEvidence {
            method: r.method.to_string(),
            deterministic: r.is_deterministic(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub polynomial: Polynomial,
    pub n: BigUint,
    pub sign: Sign,
    pub p: BigUint,
    pub k: u32,
    pub d: BigUint,
    pub variant: Variant,
    pub j: u32,
    /// `s_0..=s_j` of `f(x + n)`.
    pub taylor_evidence: Vec<BigInt>,
    pub primality: PrimalityEvidence,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("field `{field}`: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    UnknownVersion(u32),
}

fn field_err(field: &'static str, message: impl Into<String>) -> CertificateError {
    CertificateError::Field {
        field,
        message: message.into(),
    }
}

/// On-disk layout; field order is the canonical key order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: u32,
    polynomial: Vec<String>,
    n: String,
    sign: i8,
    p: String,
    k: u32,
    d: String,
    variant: Variant,
    j: u32,
    taylor_evidence: Vec<String>,
    primality: PrimalityEvidence,
    tool_version: String,
}

fn parse_int(field: &'static str, s: &str) -> Result<BigInt, CertificateError> {
    let canonical = s
        .strip_prefix('-')
        .unwrap_or(s)
        .bytes()
        .all(|b| b.is_ascii_digit())
        && !s.is_empty()
        && s != "-";
    if !canonical {
        return Err(field_err(field, format!("`{s}` is not a decimal integer")));
    }
    s.parse::<BigInt>()
        .map_err(|_| field_err(field, format!("`{s}` is not a decimal integer")))
}

fn parse_nat(field: &'static str, s: &str) -> Result<BigUint, CertificateError> {
    let v = parse_int(field, s)?;
    v.to_biguint()
        .ok_or_else(|| field_err(field, format!("`{s}` must be nonnegative")))
}

impl Certificate {
    /// Structural checks that need no arithmetic on the polynomial.
    pub fn check_structure(&self) -> Result<(), CertificateError> {
        let m = self
            .polynomial
            .degree()
            .ok_or_else(|| field_err("polynomial", "must be nonzero"))?;
        if m < 2 {
            return Err(field_err("polynomial", format!("degree {m} < 2")));
        }
        if self.n.is_zero() {
            return Err(field_err("n", "n must be >= 1"));
        }
        if self.p < BigUint::from(2u32) {
            return Err(field_err("p", "p must be >= 2"));
        }
        if self.k == 0 {
            return Err(field_err("k", "k must be ≥ 1"));
        }
        if self.d.is_zero() {
            return Err(field_err("d", "d must be ≥ 1"));
        }
        if self.j == 0 || self.j as usize > m {
            return Err(field_err("j", format!("j must satisfy 1 ≤ j ≤ {m}")));
        }
        if self.k.gcd(&self.j) != 1 {
            return Err(field_err(
                "j",
                format!("gcd(k, j) = gcd({}, {}) ≠ 1", self.k, self.j),
            ));
        }
        match self.variant {
            Variant::Girstmair if self.k != 1 || self.j != 1 => {
                return Err(field_err("variant", "girstmair requires k = 1 and j = 1"));
            }
            Variant::Theorem1 if self.k < 2 || self.j != 1 => {
                return Err(field_err("variant", "theorem1 requires k ≥ 2 and j = 1"));
            }
            Variant::Theorem2 if self.k < 2 || self.j < 2 => {
                return Err(field_err("variant", "theorem2 requires k ≥ 2 and j ≥ 2"));
            }
            _ => {}
        }
        if self.taylor_evidence.len() != self.j as usize + 1 {
            return Err(field_err(
                "taylor_evidence",
                format!(
                    "expected {} entries s_0..s_{}, found {}",
                    self.j + 1,
                    self.j,
                    self.taylor_evidence.len()
                ),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, CertificateError> {
        self.check_structure()?;
        let doc = Document {
            format_version: FORMAT_VERSION,
            polynomial: self
                .polynomial
                .coeffs()
                .iter()
                .map(ToString::to_string)
                .collect(),
            n: self.n.to_string(),
            sign: self.sign.into(),
            p: self.p.to_string(),
            k: self.k,
            d: self.d.to_string(),
            variant: self.variant,
            j: self.j,
            taylor_evidence: self
                .taylor_evidence
                .iter()
                .map(ToString::to_string)
                .collect(),
            primality: self.primality.clone(),
            tool_version: self.tool_version.clone(),
        };
        let mut out = serde_json::to_string_pretty(&doc)
            .map_err(|e| CertificateError::Malformed(e.to_string()))?;
        out.push('\n');
        Ok(out)
    }

    pub fn serialize(&self) -> Result<Vec<u8>, CertificateError> {
        self.to_json().map(String::into_bytes)
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Certificate, CertificateError> {
        let value: serde_json::Value = serde_json::from_slice(bytes)
            .map_err(|e| CertificateError::Malformed(e.to_string()))?;
        if let Some(v) = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
        {
            if v != FORMAT_VERSION as u64 {
                return Err(CertificateError::UnknownVersion(
                    v.try_into().unwrap_or(u32::MAX),
                ));
            }
        }
        let doc: Document = serde_json::from_value(value)
            .map_err(|e| CertificateError::Malformed(e.to_string()))?;
        let coeffs = doc
            .polynomial
            .iter()
            .map(|c| parse_int("polynomial", c))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(field_err(
                "polynomial",
                "leading coefficient must be nonzero",
            ));
        }
        let sign = Sign::try_from(doc.sign).map_err(|m| field_err("sign", m))?;
        let cert = Certificate {
            polynomial: Polynomial::new(coeffs),
            n: parse_nat("n", &doc.n)?,
            sign,
            p: parse_nat("p", &doc.p)?,
            k: doc.k,
            d: parse_nat("d", &doc.d)?,
            variant: doc.variant,
            j: doc.j,
            taylor_evidence: doc
                .taylor_evidence
                .iter()
                .map(|s| parse_int("taylor_evidence", s))
                .collect::<Result<_, _>>()?,
            primality: doc.primality,
            tool_version: doc.tool_version,
        };
        cert.check_structure()?;
        Ok(cert)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: &'static str,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub valid: bool,
    pub caveats: Vec<String>,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    fn fail(&mut self, condition: &'static str, expected: impl ToString, found: impl ToString) {
        self.failures.push(Failure {
            condition,
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
}

/// Re-checks every hypothesis from scratch. Never trusts `taylor_evidence`.
pub fn verify(c: &Certificate) -> VerifyReport {
    let mut r = VerifyReport::default();
    let f = &c.polynomial;
    let Some(m) = f.degree() else {
        r.fail("degree", "nonzero polynomial", "zero polynomial");
        return r;
    };
    if m < 2 {
        r.fail("degree", "degree ≥ 2", m);
    }
    match f.content() {
        Ok(content) if !content.is_one() => r.fail("primitive", "content 1", content),
        _ => {}
    }
    if c.n.is_zero() {
        r.fail("n", "n ≥ 1", &c.n);
    }
    if c.k == 0 {
        r.fail("k", "k ≥ 1", c.k);
    }
    if c.d.is_zero() {
        r.fail("d", "d ≥ 1", &c.d);
    }
    if c.j == 0 || c.j as usize > m {
        r.fail("j", format!("1 ≤ j ≤ {m}"), c.j);
    }
    if c.k.gcd(&c.j) != 1 {
        r.fail("gcd(k,j)", 1, c.k.gcd(&c.j));
    }
    let coherent = match c.variant {
        Variant::Girstmair => c.k == 1 && c.j == 1,
        Variant::Theorem1 => c.k >= 2 && c.j == 1,
        Variant::Theorem2 => c.k >= 2 && c.j >= 2,
    };
    if !coherent {
        r.fail(
            "variant",
            format!("fields consistent with {}", c.variant),
            format!("k = {}, j = {}", c.k, c.j),
        );
    }

    let n = BigInt::from(c.n.clone());
    let value = f.evaluate(&n);
    let claimed = c.sign.apply(BigInt::from(c.p.pow(c.k) * &c.d));
    if value != claimed {
        r.fail("f(n) ≠ sign·p^k·d", &claimed, &value);
    }

    let primality = nt::is_prime(&c.p);
    match primality.verdict {
        Verdict::Composite => r.fail("p prime", "prime", format!("{} is composite", c.p)),
        Verdict::ProbablePrime => r.caveats.push(format!(
            "p = {} is a probable prime ({}); primality is not proven",
            c.p, primality.method
        )),
        Verdict::PrimeDeterministic => {}
    }
    let recomputed = PrimalityEvidence::from(primality);
    if primality.is_prime() && recomputed != c.primality {
        r.fail(
            "primality",
            format!(
                "{} (deterministic: {})",
                recomputed.method, recomputed.deterministic
            ),
            format!(
                "{} (deterministic: {})",
                c.primality.method, c.primality.deterministic
            ),
        );
    }
    if c.p > BigUint::one() && (&c.d % &c.p).is_zero() {
        r.fail("p ∤ d", format!("{} not dividing d", c.p), &c.d);
    }

    if m >= 1 {
        let h = f.root_bound().expect("degree checked");
        if !h.admits(&n, &BigInt::from(c.d.clone())) {
            r.fail("n < H+d+1", format!("n ≥ {h} + {} + 1", c.d), &c.n);
        }
    }

    let s = f.taylor_shift(&n).expect("nonzero polynomial");
    let s = s.coeffs();
    let j = c.j as usize;
    if j >= 1 && j <= m {
        if c.taylor_evidence.len() != j + 1 {
            r.fail(
                "taylor_evidence",
                format!("{} entries", j + 1),
                c.taylor_evidence.len(),
            );
        }
        for (i, (given, actual)) in c.taylor_evidence.iter().zip(s).enumerate() {
            if given != actual {
                r.fail("taylor_evidence", format!("s_{i} = {actual}"), given);
            }
        }
        if c.k > 1 {
            let p = BigInt::from(c.p.clone());
            let pk = BigInt::from(c.p.pow(c.k));
            for (i, si) in s[..j].iter().enumerate() {
                if !si.is_multiple_of(&pk) {
                    r.fail("p^k | s_i", format!("p^k = {pk} dividing s_{i}"), si);
                }
            }
            if p > BigInt::one() && s[j].is_multiple_of(&p) {
                r.fail("p ∤ s_j", format!("p = {p} not dividing s_{j}"), &s[j]);
            }
        }
    }

    r.valid = r.failures.is_empty();
    r
}
