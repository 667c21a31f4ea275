//! Integer number theory: primality, bounded-effort factoring, valuations and
//! the `|N| = p^k * d` splits the criteria consume.
//!
//! Values that fit in a `u64` take a machine-word path; everything else runs on
//! `BigUint`. Both paths give identical answers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("cannot factor zero")]
    Zero,
    #[error("{0} is not a prime")]
    NotPrime(BigUint),
    #[error("factorization is incomplete (unfactored cofactor {0})")]
    IncompleteFactorization(BigUint),
    #[error("invalid prime-power split: {0}")]
    InvalidSplit(&'static str),
}

/// Sign of a nonzero integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(n: &BigInt) -> Sign {
        if n.sign() == BigSign::Minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn apply(self, n: BigInt) -> BigInt {
        match self {
            Sign::Plus => n,
            Sign::Minus => -n,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Composite,
    PrimeDeterministic,
    ProbablePrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimalityResult {
    pub verdict: Verdict,
    pub method: &'static str,
}

impl PrimalityResult {
    pub fn is_prime(&self) -> bool {
        self.verdict != Verdict::Composite
    }

    pub fn is_deterministic(&self) -> bool {
        self.verdict == Verdict::PrimeDeterministic
    }
}

pub const METHOD_TRIVIAL: &str = "trivial";
pub const METHOD_MR_DETERMINISTIC: &str = "miller-rabin-deterministic";
pub const METHOD_BPSW: &str = "baillie-psw";

/// Twelve prime bases suffice below 3.18e23, so certainly for all of `u64`.
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Thirteen prime bases suffice below this bound (Sorenson and Webster).
const MR_BASES_BIG: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_DETERMINISTIC_LIMIT: &str = "3317044064679887385961981";

fn deterministic_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| MR_DETERMINISTIC_LIMIT.parse().unwrap())
}

pub fn is_prime(n: &BigUint) -> PrimalityResult {
    let composite = |method| PrimalityResult {
        verdict: Verdict::Composite,
        method,
    };
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return composite(METHOD_TRIVIAL);
        }
        return PrimalityResult {
            verdict: if is_prime_u64(small) {
                Verdict::PrimeDeterministic
            } else {
                Verdict::Composite
            },
            method: METHOD_MR_DETERMINISTIC,
        };
    }
    if n.is_even() {
        return composite(METHOD_TRIVIAL);
    }
    if n < deterministic_limit() {
        let prime = MR_BASES_BIG
            .iter()
            .all(|&b| strong_probable_prime(n, &BigUint::from(b)));
        return PrimalityResult {
            verdict: if prime {
                Verdict::PrimeDeterministic
            } else {
                Verdict::Composite
            },
            method: METHOD_MR_DETERMINISTIC,
        };
    }
    PrimalityResult {
        verdict: if baillie_psw(n) {
            Verdict::ProbablePrime
        } else {
            Verdict::Composite
        },
        method: METHOD_BPSW,
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES_U64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Strong Fermat test of odd `n > 2` to base `a`.
fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let half: BigInt = x >> 1;
    half.mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                let g = d.magnitude().gcd(n);
                if g != *n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.sign() == BigSign::Minus {
            -d + BigInt::from(2)
        } else {
            -(d + BigInt::from(2))
        };
    }
    let nn = BigInt::from(n.clone());
    let q = ((BigInt::one() - &d) / BigInt::from(4)).mod_floor(&nn);
    let dd = d.mod_floor(&nn);
    let n_plus = n + 1u32;
    let s = n_plus.trailing_zeros().unwrap_or(0);
    let odd = &n_plus >> s;

    // U_1 = 1, V_1 = P = 1, Q^1
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.clone();
    let bits = odd.bits();
    for i in (0..bits - 1).rev() {
        // double
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - &qk - &qk).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if odd.bit(i) {
            let nu = half_mod(&u + &v, &nn);
            let nv = half_mod(&dd * &u + &v, &nn);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk - &qk).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&nn);
    }
    false
}

/// Baillie-PSW: strong base-2 test followed by a strong Lucas test.
pub(crate) fn baillie_psw(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return *n == BigUint::from(p);
        }
    }
    strong_probable_prime(n, &BigUint::from(2u32)) && strong_lucas(n)
}

/// Effort limits and the seed for the randomized part of factoring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub trial_bound: u32,
    pub rho_iteration_cap: u64,
    pub rng_seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            rho_iteration_cap: 10_000_000,
            rng_seed: 0,
        }
    }
}

/// `sign * prod(p^e) * cofactor`; the cofactor is 1 when factoring finished.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub sign: Sign,
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
}

impl FactoredInteger {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn value(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e));
        self.sign.apply(BigInt::from(magnitude))
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

const CACHED_SIEVE_LIMIT: u32 = 1_000_000;

fn small_primes(bound: u32) -> std::borrow::Cow<'static, [u32]> {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    if bound <= CACHED_SIEVE_LIMIT {
        let all = PRIMES.get_or_init(|| sieve(CACHED_SIEVE_LIMIT));
        let end = all.partition_point(|&p| p <= bound);
        std::borrow::Cow::Borrowed(&all[..end])
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

struct Factorizer<'a> {
    cfg: &'a FactorConfig,
    rng: ChaCha8Rng,
    primes: BTreeMap<BigUint, u32>,
    cofactor: BigUint,
}

pub fn factor(n: &BigInt, cfg: &FactorConfig) -> Result<FactoredInteger, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    let mut f = Factorizer {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
        primes: BTreeMap::new(),
        cofactor: BigUint::one(),
    };
    let primes = small_primes(cfg.trial_bound);
    let rest = trial_divide(n.magnitude().clone(), &primes, |p, e| {
        f.record(BigUint::from(p), e)
    });
    if !rest.is_one() {
        f.split(rest, 1);
    }
    Ok(FactoredInteger {
        sign: Sign::of(n),
        factors: f.primes.into_iter().collect(),
        cofactor: f.cofactor,
    })
}

const PRIME_CHECK_INTERVAL: usize = 256;

/// Strips every prime in `primes` from `rest`, reporting `(p, exponent)`.
/// Stops early once `p^2` exceeds what is left or what is left is prime.
fn trial_divide(mut rest: BigUint, primes: &[u32], mut found: impl FnMut(u32, u32)) -> BigUint {
    let mut idx = 0;
    while rest.bits() > 128 && idx < primes.len() {
        if idx % PRIME_CHECK_INTERVAL == PRIME_CHECK_INTERVAL - 1 && is_prime(&rest).is_prime() {
            return rest;
        }
        let p = primes[idx];
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            found(p, e);
        }
        idx += 1;
    }
    let Some(mut r) = rest.to_u128() else {
        return rest;
    };
    for (i, &p) in primes[idx..].iter().enumerate() {
        let p = p as u128;
        if p * p > r {
            break;
        }
        if i % PRIME_CHECK_INTERVAL == PRIME_CHECK_INTERVAL - 1
            && is_prime(&BigUint::from(r)).is_prime()
        {
            break;
        }
        let divides = |r: u128| match u64::try_from(r) {
            Ok(small) => small % p as u64 == 0,
            Err(_) => r.is_multiple_of(p),
        };
        let mut e = 0;
        while divides(r) {
            r /= p;
            e += 1;
        }
        if e > 0 {
            found(p as u32, e);
        }
    }
    BigUint::from(r)
}

impl Factorizer<'_> {
    fn record(&mut self, p: BigUint, e: u32) {
        *self.primes.entry(p).or_insert(0) += e;
    }

    /// Fully factors `m` (free of primes below the trial bound), with every
    /// resulting exponent multiplied by `mult`.
    fn split(&mut self, m: BigUint, mult: u32) {
        if m.is_one() {
            return;
        }
        if is_prime(&m).is_prime() {
            self.record(m, mult);
            return;
        }
        if let Some((root, e)) = perfect_power(&m) {
            self.split(root, mult * e);
            return;
        }
        match self.rho(&m) {
            Some(g) => {
                let other = &m / &g;
                self.split(g, mult);
                self.split(other, mult);
            }
            None => self.cofactor *= m.pow(mult),
        }
    }

    fn rho(&mut self, m: &BigUint) -> Option<BigUint> {
        if let Some(small) = m.to_u64() {
            return rho_u64(small, self.cfg.rho_iteration_cap, &mut self.rng).map(BigUint::from);
        }
        rho_big(m, self.cfg.rho_iteration_cap, &mut self.rng)
    }
}

/// Largest `e >= 2` with `m = r^e`, if any.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits() as u32;
    (2..=bits).rev().find_map(|e| {
        let r = m.nth_root(e);
        (r > BigUint::one() && r.pow(e) == *m).then_some((r, e))
    })
}

const RHO_BATCH: u64 = 128;

/// Brent's cycle-finding variant of Pollard rho on machine words.
fn rho_u64(n: u64, cap: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let gcd = |a: u64, b: u64| a.gcd(&b);
    let mut budget = cap;
    while budget > 0 {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let step = |v: u64| ((mul_mod(v, v, n) as u128 + c as u128) % n as u128) as u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 && budget > 0 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            budget = budget.saturating_sub(r);
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = RHO_BATCH.min(r - k);
                for _ in 0..lim {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                budget = budget.saturating_sub(lim);
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, cap: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut budget = cap;
    let random_below = |rng: &mut ChaCha8Rng| {
        let bytes: Vec<u8> = (0..n.bits() / 8 + 8).map(|_| rng.gen()).collect();
        BigUint::from_bytes_le(&bytes) % n
    };
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while budget > 0 {
        let c = random_below(rng).max(one.clone());
        let mut y = random_below(rng);
        let step = |v: &BigUint| (v * v + &c) % n;
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        while g.is_one() && budget > 0 {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            budget = budget.saturating_sub(r);
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = RHO_BATCH.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    q = (q * diff(&x, &y)) % n;
                }
                budget = budget.saturating_sub(lim);
                g = q.gcd(n);
                k += lim;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = step(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Largest `k` with `p^k | n`.
pub fn valuation(n: &BigInt, p: &BigUint) -> Result<u32, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    if !is_prime(p).is_prime() {
        return Err(NtError::NotPrime(p.clone()));
    }
    Ok(valuation_unchecked(n.magnitude(), p))
}

pub(crate) fn valuation_unchecked(n: &BigUint, p: &BigUint) -> u32 {
    let mut rest = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() || rest.is_zero() {
            return k;
        }
        rest = q;
        k += 1;
    }
}

/// `|N| = p^k * d` with `p` prime, `k >= 1`, and `p` not dividing `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerSplit {
    p: BigUint,
    k: u32,
    d: BigUint,
}

impl PrimePowerSplit {
    /// Validates every field, including the primality of `p`.
    pub fn new(p: BigUint, k: u32, d: BigUint) -> Result<Self, NtError> {
        if k == 0 {
            return Err(NtError::InvalidSplit("k must be >= 1"));
        }
        if d.is_zero() {
            return Err(NtError::InvalidSplit("d must be >= 1"));
        }
        if !is_prime(&p).is_prime() {
            return Err(NtError::NotPrime(p));
        }
        if (&d % &p).is_zero() {
            return Err(NtError::InvalidSplit("p divides d"));
        }
        Ok(PrimePowerSplit { p, k, d })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn prime_power(&self) -> BigUint {
        self.p.pow(self.k)
    }

    /// `p^k * d`.
    pub fn magnitude(&self) -> BigUint {
        self.prime_power() * &self.d
    }
}

impl fmt::Display for PrimePowerSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} * {}", self.p, self.k, self.d)
    }
}

/// One split per distinct prime, ordered by ascending `d` then ascending `p`.
pub fn prime_power_splits(f: &FactoredInteger) -> Result<Vec<PrimePowerSplit>, NtError> {
    if !f.is_complete() {
        return Err(NtError::IncompleteFactorization(f.cofactor.clone()));
    }
    let magnitude = f.value().magnitude().clone();
    let mut splits: Vec<PrimePowerSplit> = f
        .factors
        .iter()
        .map(|(p, k)| PrimePowerSplit {
            p: p.clone(),
            k: *k,
            d: &magnitude / p.pow(*k),
        })
        .collect();
    splits.sort_by(|a, b| a.d.cmp(&b.d).then_with(|| a.p.cmp(&b.p)));
    Ok(splits)
}
