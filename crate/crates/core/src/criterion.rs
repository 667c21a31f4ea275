//! Irreducibility from a single prime-power value.
//!
//! A primitive `f` of degree `m >= 2` is irreducible when, for some natural
//! `n >= H + d + 1`, the value splits as `f(n) = ±p^k·d` with `p` prime and
//! `p ∤ d`, and in addition:
//!
//! * `k = 1` (Girstmair), or
//! * `k > 1` and `p ∤ f'(n)` (the derivative variant, `j = 1`), or
//! * `k > 1` and some `j <= m` with `gcd(k, j) = 1`, `p^k | s_i` for
//!   `i < j` and `p ∤ s_j`, where `s_i` are the Taylor coefficients of
//!   `f(x + n)` (the Taylor variant, reported only for `j >= 2`).
//!
//! Everything here is exact integer arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, PrimalityEvidence};
use crate::nt::{self, FactorConfig, NtError, PrimePowerSplit, Sign};
use crate::poly::{PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has degree {0}; degree >= 2 is required")]
    DegreeTooSmall(usize),
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(BigInt),
    #[error("n must be >= 1")]
    NonPositivePoint,
    #[error("f({n}) = {value}, but the split gives {claimed}")]
    ValueMismatch {
        n: BigInt,
        value: BigInt,
        claimed: BigInt,
    },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Nt(#[from] NtError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Girstmair,
    Theorem1,
    Theorem2,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Girstmair, Variant::Theorem1, Variant::Theorem2];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Girstmair => "girstmair",
            Variant::Theorem1 => "theorem1",
            Variant::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s.trim())
            .ok_or_else(|| {
                format!("unknown variant `{s}` (expected girstmair, theorem1 or theorem2)")
            })
    }
}

/// The tuple that makes the hypotheses hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: BigUint,
    pub sign: Sign,
    pub p: BigUint,
    pub k: u32,
    pub d: BigUint,
    pub j: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    /// `n < H + d + 1`.
    BelowBound,
    /// `k > 1` and `p | f'(n)`.
    DerivativeDivisible,
    /// `k > 1` and no `j` satisfies the Taylor conditions.
    NoValidJ,
    /// `f(n) = 0`.
    ZeroValue,
    /// `|f(n)| = 1`.
    UnitValue,
    /// `|f(n)|` could not be fully factored within budget.
    FactoringIncomplete,
    /// The only usable splits belong to disabled variants.
    VariantDisabled,
    /// Every split has `d` above the configured cap.
    CofactorCapExceeded,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::BelowBound => "below_bound",
            ReasonCode::DerivativeDivisible => "derivative_divisible",
            ReasonCode::NoValidJ => "no_valid_j",
            ReasonCode::ZeroValue => "zero_value",
            ReasonCode::UnitValue => "unit_value",
            ReasonCode::FactoringIncomplete => "factoring_incomplete",
            ReasonCode::VariantDisabled => "variant_disabled",
            ReasonCode::CofactorCapExceeded => "cofactor_cap_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub code: ReasonCode,
    pub message: String,
}

impl Reason {
    fn new(code: ReasonCode, message: impl Into<String>) -> Self {
        Reason {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionOutcome {
    Accepted { variant: Variant, witness: Witness },
    PreconditionFailed(Reason),
    NotApplicable(Reason),
    Inconclusive(Reason),
}

impl CriterionOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CriterionOutcome::Accepted { .. })
    }

    pub fn reason(&self) -> Option<&Reason> {
        match self {
            CriterionOutcome::Accepted { .. } => None,
            CriterionOutcome::PreconditionFailed(r)
            | CriterionOutcome::NotApplicable(r)
            | CriterionOutcome::Inconclusive(r) => Some(r),
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CriterionOutcome::Accepted { .. } => "accepted",
            CriterionOutcome::PreconditionFailed(_) => "precondition_failed",
            CriterionOutcome::NotApplicable(_) => "not_applicable",
            CriterionOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Non-empty set of enabled variants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantSet(BTreeSet<Variant>);

impl VariantSet {
    pub fn all() -> Self {
        VariantSet(Variant::ALL.into_iter().collect())
    }

    pub fn only(v: Variant) -> Self {
        VariantSet([v].into_iter().collect())
    }

    pub fn new(variants: impl IntoIterator<Item = Variant>) -> Option<Self> {
        let set: BTreeSet<Variant> = variants.into_iter().collect();
        (!set.is_empty()).then_some(VariantSet(set))
    }

    pub fn contains(&self, v: Variant) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Variant> + '_ {
        self.0.iter().copied()
    }
}

impl Default for VariantSet {
    fn default() -> Self {
        Self::all()
    }
}

impl FromStr for VariantSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(Variant::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        VariantSet::new(parsed).ok_or_else(|| "at least one variant must be enabled".to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n_max: u64,
    /// Raises the start of the search; never lowers it below `⌈H⌉ + 2`.
    pub n_min: Option<u64>,
    pub d_max: Option<BigUint>,
    pub factoring: FactorConfig,
    pub variants: VariantSet,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_max: 10_000,
            n_min: None,
            d_max: None,
            factoring: FactorConfig::default(),
            variants: VariantSet::all(),
        }
    }
}

impl SearchConfig {
    pub fn with_variants(variants: VariantSet) -> Self {
        SearchConfig {
            variants,
            ..SearchConfig::default()
        }
    }

    fn validate(&self) -> Result<(), CriterionError> {
        if self.n_max < 1 {
            return Err(CriterionError::InvalidConfig("n_max must be >= 1"));
        }
        Ok(())
    }
}

/// Degree and primitivity checks shared by every entry point.
pub fn validate_polynomial(f: &Polynomial) -> Result<usize, CriterionError> {
    let m = f.degree().ok_or(CriterionError::ZeroPolynomial)?;
    if m < 2 {
        return Err(CriterionError::DegreeTooSmall(m));
    }
    let c = f.content()?;
    if !c.is_one() {
        return Err(CriterionError::NotPrimitive(c));
    }
    Ok(m)
}

fn validate_point(
    f: &Polynomial,
    n: &BigUint,
    split: &PrimePowerSplit,
    sign: Sign,
) -> Result<BigInt, CriterionError> {
    validate_polynomial(f)?;
    if n.is_zero() {
        return Err(CriterionError::NonPositivePoint);
    }
    let n = BigInt::from(n.clone());
    let value = f.evaluate(&n);
    let claimed = sign.apply(BigInt::from(split.magnitude()));
    if value != claimed {
        return Err(CriterionError::ValueMismatch { n, value, claimed });
    }
    Ok(n)
}

fn below_bound(
    f: &Polynomial,
    n: &BigInt,
    split: &PrimePowerSplit,
) -> Result<Option<Reason>, CriterionError> {
    let h = f.root_bound()?;
    let d = BigInt::from(split.d().clone());
    if h.admits(n, &d) {
        return Ok(None);
    }
    Ok(Some(Reason::new(
        ReasonCode::BelowBound,
        format!("n < H+d+1 (n = {n}, H = {h}, d = {d})"),
    )))
}

fn accepted(
    variant: Variant,
    n: &BigInt,
    split: &PrimePowerSplit,
    sign: Sign,
    j: u32,
) -> CriterionOutcome {
    CriterionOutcome::Accepted {
        variant,
        witness: Witness {
            n: n.magnitude().clone(),
            sign,
            p: split.p().clone(),
            k: split.k(),
            d: split.d().clone(),
            j,
        },
    }
}

/// Girstmair for `k = 1`, the derivative condition `p ∤ f'(n)` for `k > 1`.
pub fn check_theorem1(
    f: &Polynomial,
    n: &BigUint,
    split: &PrimePowerSplit,
    sign: Sign,
) -> Result<CriterionOutcome, CriterionError> {
    let n = validate_point(f, n, split, sign)?;
    if let Some(reason) = below_bound(f, &n, split)? {
        return Ok(CriterionOutcome::PreconditionFailed(reason));
    }
    if split.k() == 1 {
        return Ok(accepted(Variant::Girstmair, &n, split, sign, 1));
    }
    let p = BigInt::from(split.p().clone());
    let slope = f.derivative().evaluate(&n);
    if slope.is_multiple_of(&p) {
        return Ok(CriterionOutcome::NotApplicable(Reason::new(
            ReasonCode::DerivativeDivisible,
            format!("p = {p} divides f'(n) = {slope}"),
        )));
    }
    Ok(accepted(Variant::Theorem1, &n, split, sign, 1))
}

/// Scans `j = 1..=m` for the smallest `j` meeting the Taylor conditions.
pub fn check_theorem2(
    f: &Polynomial,
    n: &BigUint,
    split: &PrimePowerSplit,
    sign: Sign,
) -> Result<CriterionOutcome, CriterionError> {
    let n = validate_point(f, n, split, sign)?;
    if let Some(reason) = below_bound(f, &n, split)? {
        return Ok(CriterionOutcome::PreconditionFailed(reason));
    }
    if split.k() == 1 {
        return Ok(accepted(Variant::Girstmair, &n, split, sign, 1));
    }
    let k = split.k();
    let p = BigInt::from(split.p().clone());
    let pk = BigInt::from(split.prime_power());
    let s = f.taylor_shift(&n)?;
    let s = s.coeffs();
    // s_0 = f(n) is divisible by p^k by construction of the split.
    for j in 1..s.len() {
        if !s[j - 1].is_multiple_of(&pk) {
            break;
        }
        if (k as usize).gcd(&j) == 1 && !s[j].is_multiple_of(&p) {
            let variant = if j == 1 {
                Variant::Theorem1
            } else {
                Variant::Theorem2
            };
            return Ok(accepted(variant, &n, split, sign, j as u32));
        }
    }
    Ok(CriterionOutcome::NotApplicable(Reason::new(
        ReasonCode::NoValidJ,
        format!(
            "no j <= {} with gcd({k}, j) = 1, p^k | s_i for i < j and p ∤ s_j (p = {p})",
            s.len() - 1
        ),
    )))
}

/// Result of [`certify_at`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified(Box<Certificate>),
    Failed(CriterionOutcome),
}

impl Certification {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Failed(_) => None,
        }
    }

    pub fn outcome(&self) -> Option<&CriterionOutcome> {
        match self {
            Certification::Certified(_) => None,
            Certification::Failed(o) => Some(o),
        }
    }
}

/// Runs the enabled checks on one split.
fn try_split(
    f: &Polynomial,
    n: &BigUint,
    split: &PrimePowerSplit,
    sign: Sign,
    variants: &VariantSet,
) -> Result<CriterionOutcome, CriterionError> {
    if split.k() == 1 {
        if !variants.contains(Variant::Girstmair) {
            return Ok(CriterionOutcome::NotApplicable(Reason::new(
                ReasonCode::VariantDisabled,
                format!("split {split} has k = 1 but girstmair is disabled"),
            )));
        }
        return check_theorem1(f, n, split, sign);
    }
    let mut last = None;
    if variants.contains(Variant::Theorem1) {
        let outcome = check_theorem1(f, n, split, sign)?;
        if outcome.is_accepted() || matches!(outcome, CriterionOutcome::PreconditionFailed(_)) {
            return Ok(outcome);
        }
        last = Some(outcome);
    }
    if variants.contains(Variant::Theorem2) {
        return check_theorem2(f, n, split, sign);
    }
    Ok(last.unwrap_or_else(|| {
        CriterionOutcome::NotApplicable(Reason::new(
            ReasonCode::VariantDisabled,
            format!("split {split} has k > 1 but theorem1 and theorem2 are disabled"),
        ))
    }))
}

fn failure_rank(o: &CriterionOutcome) -> u8 {
    match o {
        CriterionOutcome::NotApplicable(r) if r.code != ReasonCode::VariantDisabled => 3,
        CriterionOutcome::PreconditionFailed(_) => 2,
        CriterionOutcome::NotApplicable(_) => 1,
        _ => 0,
    }
}

/// `f(n)` together with its factorization, or the reason there is none.
enum PointValue {
    Factored(nt::FactoredInteger),
    Failed(CriterionOutcome),
}

fn evaluate_point(
    f: &Polynomial,
    n: &BigUint,
    cfg: &SearchConfig,
) -> Result<PointValue, CriterionError> {
    let value = f.evaluate(&BigInt::from(n.clone()));
    if value.is_zero() {
        return Ok(PointValue::Failed(CriterionOutcome::NotApplicable(
            Reason::new(ReasonCode::ZeroValue, format!("f({n}) = 0")),
        )));
    }
    if value.abs().is_one() {
        return Ok(PointValue::Failed(CriterionOutcome::NotApplicable(
            Reason::new(
                ReasonCode::UnitValue,
                format!("f({n}) = {value} has no prime factor"),
            ),
        )));
    }
    let factored = nt::factor(&value, &cfg.factoring)?;
    if !factored.is_complete() {
        return Ok(PointValue::Failed(CriterionOutcome::Inconclusive(
            Reason::new(
                ReasonCode::FactoringIncomplete,
                format!(
                    "could not factor f({n}) = {value}; unfactored part {}",
                    factored.cofactor
                ),
            ),
        )));
    }
    Ok(PointValue::Factored(factored))
}

fn certify_factored(
    f: &Polynomial,
    n: &BigUint,
    factored: &nt::FactoredInteger,
    variants: &VariantSet,
    d_max: Option<&BigUint>,
) -> Result<Certification, CriterionError> {
    let sign = factored.sign;
    let mut best: Option<CriterionOutcome> = None;
    for split in nt::prime_power_splits(factored)? {
        if d_max.is_some_and(|cap| split.d() > cap) {
            if best.is_none() {
                best = Some(CriterionOutcome::NotApplicable(Reason::new(
                    ReasonCode::CofactorCapExceeded,
                    format!("d = {} exceeds the configured cap", split.d()),
                )));
            }
            continue;
        }
        let outcome = try_split(f, n, &split, sign, variants)?;
        if let CriterionOutcome::Accepted { variant, witness } = outcome {
            return Ok(Certification::Certified(Box::new(build_certificate(
                f, variant, witness,
            )?)));
        }
        if best
            .as_ref()
            .is_none_or(|b| failure_rank(&outcome) > failure_rank(b))
        {
            best = Some(outcome);
        }
    }
    Ok(Certification::Failed(best.unwrap_or_else(|| {
        CriterionOutcome::NotApplicable(Reason::new(ReasonCode::UnitValue, "no prime factors"))
    })))
}

/// Evaluates, factors and tries every split of `f(n)` in ascending-`d` order.
pub fn certify_at(
    f: &Polynomial,
    n: &BigUint,
    cfg: &SearchConfig,
) -> Result<Certification, CriterionError> {
    validate_polynomial(f)?;
    cfg.validate()?;
    if n.is_zero() {
        return Err(CriterionError::NonPositivePoint);
    }
    match evaluate_point(f, n, cfg)? {
        PointValue::Failed(outcome) => Ok(Certification::Failed(outcome)),
        PointValue::Factored(factored) => {
            certify_factored(f, n, &factored, &cfg.variants, cfg.d_max.as_ref())
        }
    }
}

fn build_certificate(
    f: &Polynomial,
    variant: Variant,
    w: Witness,
) -> Result<Certificate, CriterionError> {
    let s = f.taylor_shift(&BigInt::from(w.n.clone()))?;
    let taylor_evidence = s.coeffs()[..=w.j as usize].to_vec();
    let primality = nt::is_prime(&w.p);
    Ok(Certificate {
        polynomial: f.clone(),
        n: w.n,
        sign: w.sign,
        p: w.p,
        k: w.k,
        d: w.d,
        variant,
        j: w.j,
        taylor_evidence,
        primality: PrimalityEvidence::from(primality),
        tool_version: crate::TOOL_VERSION.to_string(),
    })
}

/// Why a search ended without a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub n_start: u64,
    pub n_end: u64,
    /// Points whose value resisted factoring within budget.
    pub inconclusive: Vec<u64>,
    pub evaluated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Certificate>),
    Exhausted(SearchReport),
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::Exhausted(_) => None,
        }
    }
}

/// Smallest `n` with `n >= H + 2`, the first point that can be admissible.
pub fn search_start(f: &Polynomial) -> Result<u64, CriterionError> {
    let h = f.root_bound()?;
    let start = h.ceil() + 2u32;
    u64::try_from(start)
        .map_err(|_| CriterionError::InvalidConfig("root bound exceeds the search range"))
}

/// Tries `n = ⌈H⌉+2, …, n_max` in order and returns the first certificate.
pub fn search(f: &Polynomial, cfg: &SearchConfig) -> Result<SearchOutcome, CriterionError> {
    validate_polynomial(f)?;
    cfg.validate()?;
    let start = search_start(f)?.max(cfg.n_min.unwrap_or(0)).max(1);
    let mut report = SearchReport {
        n_start: start,
        n_end: cfg.n_max,
        inconclusive: Vec::new(),
        evaluated: 0,
    };
    for n in start..=cfg.n_max {
        report.evaluated += 1;
        match certify_at(f, &BigUint::from(n), cfg)? {
            Certification::Certified(c) => return Ok(SearchOutcome::Found(c)),
            Certification::Failed(CriterionOutcome::Inconclusive(_)) => report.inconclusive.push(n),
            Certification::Failed(_) => {}
        }
    }
    Ok(SearchOutcome::Exhausted(report))
}

/// Smallest accepting `n` for each enabled variant taken on its own.
///
/// Every `f(n)` is factored once and shared across variants.
pub fn smallest_per_variant(
    f: &Polynomial,
    cfg: &SearchConfig,
) -> Result<Vec<(Variant, Option<Certificate>)>, CriterionError> {
    validate_polynomial(f)?;
    cfg.validate()?;
    let start = search_start(f)?.max(cfg.n_min.unwrap_or(0)).max(1);
    let mut rows: Vec<(Variant, Option<Certificate>)> =
        cfg.variants.iter().map(|v| (v, None)).collect();
    for n in start..=cfg.n_max {
        if rows.iter().all(|(_, c)| c.is_some()) {
            break;
        }
        let n = BigUint::from(n);
        let PointValue::Factored(factored) = evaluate_point(f, &n, cfg)? else {
            continue;
        };
        for (variant, slot) in rows.iter_mut().filter(|(_, c)| c.is_none()) {
            let only = VariantSet::only(*variant);
            if let Certification::Certified(c) =
                certify_factored(f, &n, &factored, &only, cfg.d_max.as_ref())?
            {
                *slot = Some(*c);
            }
        }
    }
    Ok(rows)
}
