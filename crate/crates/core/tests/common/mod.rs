//! Seeded corpora shared by the integration tests and the acceptance gate.
#![allow(dead_code)]

use irrcert::criterion::{SearchConfig, VariantSet};
use irrcert::nt::FactorConfig;
use irrcert::Polynomial;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const U: [i64; 11] = [7, 5, -16, 6, 2, 7, 1, 6, 2, 8, 4];
pub const V: [i64; 5] = [49147, 49153, 0, 36864, 12288];

pub fn u() -> Polynomial {
    Polynomial::from_i64s(&U)
}

pub fn v() -> Polynomial {
    Polynomial::from_i64s(&V)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial of exact degree `deg` with coefficients in `[-bound, bound]`.
pub fn random_poly(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> Polynomial {
    let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    while coeffs[deg] == 0 {
        coeffs[deg] = rng.gen_range(-bound..=bound);
    }
    Polynomial::from_i64s(&coeffs)
}

/// Primitive polynomials of degree 2..=6 with coefficients in [-20, 20],
/// content divided out. Constant-term-zero inputs are kept: `x·g` is a
/// legitimate reducible member of the corpus.
pub fn soundness_corpus(seed: u64, count: usize) -> Vec<Polynomial> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(2..=6);
            random_poly(&mut rng, deg, 20).primitive_part().unwrap()
        })
        .collect()
}

/// Products `f1·f2` of primitive nonconstant factors with total degree at
/// most 8 and every product coefficient bounded by 50 in absolute value.
pub fn product_corpus(seed: u64, count: usize) -> Vec<(Polynomial, Polynomial, Polynomial)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d1 = rng.gen_range(1..=4);
        let d2 = rng.gen_range(1..=(8 - d1).min(4));
        let f1 = random_poly(&mut rng, d1, 5).primitive_part().unwrap();
        let f2 = random_poly(&mut rng, d2, 5).primitive_part().unwrap();
        let f = &f1 * &f2;
        if f.coeffs().iter().all(|c| c.abs() <= BigInt::from(50)) {
            out.push((f, f1, f2));
        }
    }
    out
}

/// Search settings for the randomized suites. The point range is reduced
/// from the interactive default so the corpus fits the time budget, and
/// trial division is kept short with rho doing the rest.
pub fn corpus_search_config(n_max: u64) -> SearchConfig {
    SearchConfig {
        n_max,
        factoring: FactorConfig {
            trial_bound: 10_000,
            ..FactorConfig::default()
        },
        ..SearchConfig::with_variants(VariantSet::all())
    }
}

pub struct LemmaInstance {
    pub f: Polynomial,
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub p: u32,
    pub k: u32,
    pub j: usize,
}

fn valuation(a: &BigInt, p: u32) -> u32 {
    irrcert::valuation(a, &p.into()).unwrap_or(u32::MAX)
}

/// Factor of the form `p^e·A(x) + x^r·B(x)` with `deg A < r` and `p ∤ A(0)`,
/// so that its low coefficients are divisible by `p^e`.
fn lemma_factor(rng: &mut ChaCha8Rng, p: u32) -> Polynomial {
    let e = rng.gen_range(1..=3u32);
    let r = rng.gen_range(1..=3usize);
    let scale = BigInt::from(p).pow(e);
    let mut coeffs: Vec<BigInt> = (0..r)
        .map(|_| BigInt::from(rng.gen_range(-6..=6i64)) * &scale)
        .collect();
    let mut a0 = rng.gen_range(-6..=6i64);
    while a0 == 0 || a0 % p as i64 == 0 {
        a0 = rng.gen_range(-6..=6i64);
    }
    coeffs[0] = BigInt::from(a0) * &scale;
    let tail = rng.gen_range(0..=2usize);
    for i in 0..=tail {
        let mut c = rng.gen_range(-6..=6i64);
        while i == tail && c == 0 {
            c = rng.gen_range(-6..=6i64);
        }
        coeffs.push(BigInt::from(c));
    }
    Polynomial::new(coeffs)
}

/// Products `f1·f2` with `p | f1(0)`, `p | f2(0)`, kept only when some
/// `k >= 2` and `j <= m` with `gcd(k, j) = 1` satisfy
/// `p^k | a_0..a_{j-1}` and `p^{k+1} ∤ a_0`. Mixed in are products with a
/// random integer shift `x -> x + t`, which keep `p | f_i(0)` only by chance
/// and are filtered the same way.
pub fn lemma_instances(seed: u64, count: usize) -> (Vec<LemmaInstance>, usize) {
    const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut discarded = 0;
    while out.len() < count {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let mut f1 = lemma_factor(&mut rng, p);
        let mut f2 = lemma_factor(&mut rng, p);
        if rng.gen_bool(0.25) {
            let t = BigInt::from(rng.gen_range(-3..=3i64) * p as i64);
            f1 = f1.shifted(&t);
            f2 = f2.shifted(&t);
        }
        let f = &f1 * &f2;
        let a = f.coeffs();
        let m = f.degree().unwrap();
        let divisible = |g: &Polynomial| valuation(&g.coeffs()[0], p) >= 1;
        let k = valuation(&a[0], p);
        if !divisible(&f1) || !divisible(&f2) || k < 2 || k == u32::MAX {
            discarded += 1;
            continue;
        }
        let reach = a.iter().take_while(|c| valuation(c, p) >= k).count();
        let candidates: Vec<usize> = (1..=reach.min(m))
            .filter(|&j| num_integer::Integer::gcd(&(k as usize), &j) == 1)
            .collect();
        if candidates.is_empty() {
            discarded += 1;
            continue;
        }
        let j = candidates[rng.gen_range(0..candidates.len())];
        out.push(LemmaInstance { f, f1, f2, p, k, j });
    }
    (out, discarded)
}

pub fn lemma_holds(inst: &LemmaInstance) -> bool {
    valuation(&inst.f.coeffs()[inst.j], inst.p) >= 1
}

/// Applies one random single-field change to `c`. Every change alters the
/// certificate (no zero deltas).
pub fn mutate(
    c: &irrcert::Certificate,
    rng: &mut ChaCha8Rng,
) -> (irrcert::Certificate, &'static str) {
    use irrcert::criterion::Variant;
    use num_bigint::BigUint;

    let mut m = c.clone();
    let delta = rng.gen_range(1..=1000u32);
    let bump = |x: &BigUint, up: bool| -> BigUint {
        if up || *x <= BigUint::from(delta) {
            x + delta
        } else {
            x - delta
        }
    };
    let up = rng.gen_bool(0.5);
    let field = match rng.gen_range(0..10) {
        0 => {
            m.n = bump(&c.n, up);
            "n"
        }
        1 => {
            m.p = bump(&c.p, up);
            "p"
        }
        2 => {
            let step = rng.gen_range(1..=3);
            m.k = if up || c.k <= step {
                c.k + step
            } else {
                c.k - step
            };
            "k"
        }
        3 => {
            m.d = bump(&c.d, up);
            "d"
        }
        4 => {
            m.j = if up || c.j == 0 { c.j + 1 } else { c.j - 1 };
            "j"
        }
        5 => {
            let mut coeffs = c.polynomial.coeffs().to_vec();
            let i = rng.gen_range(0..coeffs.len());
            coeffs[i] += if up {
                BigInt::from(delta)
            } else {
                -BigInt::from(delta)
            };
            m.polynomial = Polynomial::new(coeffs);
            "coefficient"
        }
        6 => {
            let i = rng.gen_range(0..c.taylor_evidence.len());
            m.taylor_evidence[i] += if up {
                BigInt::from(delta)
            } else {
                -BigInt::from(delta)
            };
            "taylor_evidence"
        }
        7 => {
            m.sign = c.sign.flip();
            "sign"
        }
        8 => {
            let others: Vec<Variant> = Variant::ALL
                .into_iter()
                .filter(|&v| v != c.variant)
                .collect();
            m.variant = others[rng.gen_range(0..others.len())];
            "variant"
        }
        _ => {
            if up {
                m.primality.deterministic = !c.primality.deterministic;
            } else {
                m.primality.method = if c.primality.method == "baillie-psw" {
                    "miller-rabin-deterministic".into()
                } else {
                    "baillie-psw".into()
                };
            }
            "primality"
        }
    };
    (m, field)
}

/// True when `m` survives serialization and is reported valid.
pub fn accepted(m: &irrcert::Certificate) -> bool {
    let Ok(bytes) = m.serialize() else {
        return false;
    };
    match irrcert::Certificate::deserialize(&bytes) {
        Ok(back) => irrcert::verify(&back).valid,
        Err(_) => false,
    }
}
