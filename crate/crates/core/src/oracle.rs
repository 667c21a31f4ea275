//! Ground truth for small polynomials, independent of the criteria.
//!
//! [`kronecker_factor`] decides irreducibility by exhaustive interpolation
//! through divisors of values; [`float_roots`] approximates complex zeros.
//! Neither is used by certification.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::nt::{self, FactorConfig};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has degree {0}; degree >= {1} is required")]
    DegreeTooSmall(usize, usize),
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(BigInt),
    #[error("root iteration did not converge after {0} iterations")]
    NoConvergence(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleStatus {
    Irreducible,
    Reducible(Polynomial, Polynomial),
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BudgetUsage {
    /// Complete value tuples interpolated, summed over all degrees.
    pub tuples: u64,
    /// Trial divisions `f / g` attempted.
    pub divisions: u64,
    /// Degrees whose enumeration hit the cap.
    pub exhausted_degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub status: OracleStatus,
    pub budget_used: BudgetUsage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KroneckerBudget {
    /// Cap on interpolated tuples per candidate degree.
    pub max_tuples_per_degree: u64,
}

impl Default for KroneckerBudget {
    fn default() -> Self {
        KroneckerBudget {
            max_tuples_per_degree: 1_000_000,
        }
    }
}

fn positive_divisors(n: &BigUint) -> Vec<BigInt> {
    let factored =
        nt::factor(&BigInt::from(n.clone()), &FactorConfig::default()).expect("nonzero value");
    debug_assert!(factored.is_complete());
    let mut divisors = vec![BigInt::one()];
    for (p, e) in &factored.factors {
        let p = BigInt::from(p.clone());
        let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
        for d in &divisors {
            let mut power = d.clone();
            for _ in 0..=*e {
                next.push(power.clone());
                power *= &p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    divisors
}

/// Candidate evaluation points `0, 1, -1, 2, -2, …`.
fn point_sequence() -> impl Iterator<Item = i64> {
    (0i64..).flat_map(|i| if i == 0 { vec![0] } else { vec![i, -i] })
}

struct Sample {
    x: BigInt,
    /// Signed divisors of `f(x)`.
    divisors: Vec<BigInt>,
}

/// Picks `count` nonzero points among the first few candidates, preferring
/// values with few divisors; returns them sorted by `x`.
fn choose_points(f: &Polynomial, count: usize, cache: &mut HashMap<i64, usize>) -> Vec<Sample> {
    let window = 2 * count + 4;
    let mut candidates: Vec<(usize, i64, BigInt)> = Vec::new();
    for x in point_sequence() {
        if candidates.len() >= window {
            break;
        }
        let value = f.evaluate(&BigInt::from(x));
        if value.is_zero() {
            continue;
        }
        let tau = *cache
            .entry(x)
            .or_insert_with(|| positive_divisors(value.magnitude()).len());
        candidates.push((tau, x, value));
    }
    candidates.sort_by_key(|&(tau, x, _)| (tau, x.unsigned_abs(), x));
    candidates.truncate(count);
    candidates.sort_by_key(|&(_, x, _)| x);
    candidates
        .into_iter()
        .map(|(_, x, value)| {
            let pos = positive_divisors(value.magnitude());
            let divisors = pos.iter().flat_map(|d| [d.clone(), -d]).collect();
            Sample {
                x: BigInt::from(x),
                divisors,
            }
        })
        .collect()
}

struct Search<'a> {
    f: &'a Polynomial,
    samples: &'a [Sample],
    lead: BigInt,
    constant: BigInt,
    cap: u64,
    tuples: u64,
    divisions: u64,
    /// Divided-difference table, one row per level.
    table: Vec<Vec<BigInt>>,
}

impl Search<'_> {
    /// Depth-first over value choices; prunes when a Newton divided
    /// difference is not an integer, which an integer polynomial forbids.
    fn descend(&mut self, level: usize) -> Result<Option<Polynomial>, ()> {
        let t = self.samples.len() - 1;
        let choices = if level == 0 {
            // g and -g are the same factor up to a unit
            self.samples[0]
                .divisors
                .iter()
                .step_by(2)
                .cloned()
                .collect::<Vec<_>>()
        } else {
            self.samples[level].divisors.clone()
        };
        for value in choices {
            let mut row = Vec::with_capacity(level + 1);
            row.push(value);
            let mut integral = true;
            for i in 1..=level {
                let num: BigInt = &row[i - 1] - &self.table[level - 1][i - 1];
                let den = &self.samples[level].x - &self.samples[level - i].x;
                let (q, r) = num.div_rem(&den);
                if !r.is_zero() {
                    integral = false;
                    break;
                }
                row.push(q);
            }
            if !integral {
                continue;
            }
            if level == t {
                self.tuples += 1;
                if self.tuples > self.cap {
                    return Err(());
                }
                let top = &row[level];
                if top.is_zero() || !self.lead.is_multiple_of(top) {
                    continue;
                }
                let mut diag: Vec<BigInt> = self.table[..level]
                    .iter()
                    .map(|r| r[r.len() - 1].clone())
                    .collect();
                diag.push(top.clone());
                let g = newton_to_monomial(&diag, self.samples);
                if !self.constant.is_zero() && !self.constant.is_multiple_of(&g.coeffs()[0]) {
                    continue;
                }
                self.divisions += 1;
                if self.f.div_exact(&g).is_some() {
                    return Ok(Some(g));
                }
                continue;
            }
            if self.table.len() > level {
                self.table[level] = row;
            } else {
                self.table.push(row);
            }
            if let Some(g) = self.descend(level + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// Newton form `c_0 + c_1 (x - x_0) + c_2 (x - x_0)(x - x_1) + …` to ascending coefficients.
fn newton_to_monomial(diag: &[BigInt], samples: &[Sample]) -> Polynomial {
    let mut acc = Polynomial::constant(diag[diag.len() - 1].clone());
    for i in (0..diag.len() - 1).rev() {
        let factor = Polynomial::new(vec![-samples[i].x.clone(), BigInt::one()]);
        acc = &acc * &factor;
        let mut c = acc.into_coeffs();
        if c.is_empty() {
            c.push(BigInt::zero());
        }
        c[0] += &diag[i];
        acc = Polynomial::new(c);
    }
    acc
}

fn normalize_factor(g: Polynomial) -> Polynomial {
    if g.leading_coefficient().is_some_and(Signed::is_negative) {
        -&g
    } else {
        g
    }
}

/// Exhaustive search for a factor of degree `1..=m/2`.
pub fn kronecker_factor(
    f: &Polynomial,
    budget: KroneckerBudget,
) -> Result<OracleVerdict, OracleError> {
    let m = f.degree().ok_or(OracleError::ZeroPolynomial)?;
    let content = f.content().map_err(|_| OracleError::ZeroPolynomial)?;
    if !content.is_one() {
        return Err(OracleError::NotPrimitive(content));
    }
    let mut usage = BudgetUsage::default();
    if m < 2 {
        if m == 1 {
            return Ok(OracleVerdict {
                status: OracleStatus::Irreducible,
                budget_used: usage,
            });
        }
        return Err(OracleError::DegreeTooSmall(m, 1));
    }
    let lead = f.leading_coefficient().expect("nonzero").clone();
    let constant = f.coeffs()[0].clone();
    let mut cache = HashMap::new();
    for t in 1..=m / 2 {
        let samples = choose_points(f, t + 1, &mut cache);
        let mut search = Search {
            f,
            samples: &samples,
            lead: lead.clone(),
            constant: constant.clone(),
            cap: budget.max_tuples_per_degree,
            tuples: 0,
            divisions: 0,
            table: Vec::new(),
        };
        let found = search.descend(0);
        usage.tuples += search.tuples.min(budget.max_tuples_per_degree);
        usage.divisions += search.divisions;
        match found {
            Ok(Some(g)) => {
                let g = normalize_factor(g);
                let h = f.div_exact(&g).expect("division verified");
                return Ok(OracleVerdict {
                    status: OracleStatus::Reducible(g, h),
                    budget_used: usage,
                });
            }
            Ok(None) => {}
            Err(()) => usage.exhausted_degrees.push(t),
        }
    }
    let status = if usage.exhausted_degrees.is_empty() {
        OracleStatus::Irreducible
    } else {
        OracleStatus::Inconclusive
    };
    Ok(OracleVerdict {
        status,
        budget_used: usage,
    })
}

const DK_TOLERANCE: f64 = 1e-10;
const DK_MAX_ITERATIONS: usize = 1000;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// `|f(z)| / Σ|a_i||z|^i`, the backward error of `z` as a root.
fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let scale = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * z.norm() + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner(coeffs, z).norm() / scale
    }
}

fn durand_kerner(coeffs: &[Complex64], rotation: f64) -> Option<Vec<Complex64>> {
    let m = coeffs.len() - 1;
    let lead = coeffs[m];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(1.0, 0.4 + rotation);
    let mut roots: Vec<Complex64> = (0..m)
        .map(|i| seed.powu(i as u32 + 1) * (0.5 * radius).max(0.9))
        .collect();
    for _ in 0..DK_MAX_ITERATIONS {
        let mut moved = 0.0f64;
        for i in 0..m {
            let zi = roots[i];
            let denom = (0..m)
                .filter(|&k| k != i)
                .fold(Complex64::one(), |acc, k| acc * (zi - roots[k]));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let delta = horner(&monic, zi) / denom;
            roots[i] = zi - delta;
            moved = moved.max(delta.norm());
        }
        if roots
            .iter()
            .all(|&z| relative_residual(coeffs, z) < DK_TOLERANCE)
            || moved == 0.0
        {
            return roots.iter().all(|z| z.is_finite()).then_some(roots);
        }
    }
    None
}

/// Durand–Kerner approximations of all complex roots, with multiplicity.
pub fn float_roots(f: &Polynomial) -> Result<Vec<Complex64>, OracleError> {
    let m = f.degree().ok_or(OracleError::ZeroPolynomial)?;
    if m < 1 {
        return Err(OracleError::DegreeTooSmall(m, 1));
    }
    let coeffs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    durand_kerner(&coeffs, 0.0)
        .or_else(|| durand_kerner(&coeffs, 0.173))
        .ok_or(OracleError::NoConvergence(DK_MAX_ITERATIONS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    fn verdict(f: &Polynomial) -> OracleStatus {
        kronecker_factor(f, KroneckerBudget::default())
            .unwrap()
            .status
    }

    #[test]
    fn difference_of_squares() {
        let OracleStatus::Reducible(g, h) = verdict(&p(&[-1, 0, 1])) else {
            panic!()
        };
        assert_eq!(&g * &h, p(&[-1, 0, 1]));
        let mut pair = [g, h];
        pair.sort_by_key(|q| q.coeffs()[0].clone());
        assert_eq!(pair, [p(&[-1, 1]), p(&[1, 1])]);
    }

    #[test]
    fn sum_of_squares_is_irreducible() {
        assert_eq!(verdict(&p(&[1, 0, 1])), OracleStatus::Irreducible);
    }

    #[test]
    fn fixture_v_is_irreducible() {
        assert_eq!(
            verdict(&p(&[49147, 49153, 0, 36864, 12288])),
            OracleStatus::Irreducible
        );
    }

    #[test]
    fn quartic_as_two_quadratics() {
        // (x^2 + x + 1)(x^2 - x + 2)
        let f = &p(&[1, 1, 1]) * &p(&[2, -1, 1]);
        let OracleStatus::Reducible(g, h) = verdict(&f) else {
            panic!()
        };
        assert_eq!(g.degree(), Some(2));
        assert_eq!(&g * &h, f);
    }

    #[test]
    fn zero_at_origin_is_skipped() {
        // x (x^2 + 1): f(0) = 0, factor x is still found
        let f = p(&[0, 1, 0, 1]);
        let OracleStatus::Reducible(g, h) = verdict(&f) else {
            panic!()
        };
        assert_eq!(&g * &h, f);
    }

    #[test]
    fn non_primitive_rejected() {
        assert_eq!(
            kronecker_factor(&p(&[2, 2]), KroneckerBudget::default()),
            Err(OracleError::NotPrimitive(BigInt::from(2)))
        );
        assert!(matches!(
            kronecker_factor(&p(&[]), KroneckerBudget::default()),
            Err(OracleError::ZeroPolynomial)
        ));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let f = p(&[7, 5, -16, 6, 2, 7, 1, 6, 2, 8, 4]);
        let out = kronecker_factor(
            &f,
            KroneckerBudget {
                max_tuples_per_degree: 3,
            },
        )
        .unwrap();
        assert_eq!(out.status, OracleStatus::Inconclusive);
        assert!(!out.budget_used.exhausted_degrees.is_empty());
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-8
    }

    #[test]
    fn roots_of_x2_plus_1() {
        let r = float_roots(&p(&[1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        let i = Complex64::new(0.0, 1.0);
        assert!(r.iter().any(|&z| close(z, i)));
        assert!(r.iter().any(|&z| close(z, -i)));
    }

    #[test]
    fn roots_of_x2_minus_2() {
        let r = float_roots(&p(&[-2, 0, 1])).unwrap();
        let s = Complex64::new(2f64.sqrt(), 0.0);
        assert!(r.iter().any(|&z| close(z, s)));
        assert!(r.iter().any(|&z| close(z, -s)));
    }

    #[test]
    fn roots_of_u_within_bound() {
        let r = float_roots(&p(&[7, 5, -16, 6, 2, 7, 1, 6, 2, 8, 4])).unwrap();
        assert_eq!(r.len(), 10);
        assert!(r.iter().all(|z| z.norm() < 5.0));
    }
}
