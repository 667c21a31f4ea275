//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` is the coefficient
//! of `x^i`) and are kept normalized: there are never trailing zeros, and the
//! zero polynomial is the empty vector.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation requires degree >= {required}, got degree {found}")]
    DegreeTooSmall { required: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

impl ParsePolyError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParsePolyError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, stripping trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    fn require_degree(&self, required: usize) -> Result<usize, PolyError> {
        match self.degree() {
            None => Err(PolyError::ZeroPolynomial),
            Some(found) if found < required => Err(PolyError::DegreeTooSmall { required, found }),
            Some(found) => Ok(found),
        }
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients of `f(x + n)`, i.e. `s_i = f^(i)(n) / i!`.
    ///
    /// Iterated synthetic division; `m(m+1)/2` multiply-adds.
    pub fn taylor_shift(&self, n: &BigInt) -> Result<TaylorCoefficients, PolyError> {
        let m = self.require_degree(0)?;
        let mut s = self.coeffs.clone();
        for i in 0..m {
            for t in (i..m).rev() {
                let carry = &s[t + 1] * n;
                s[t] += carry;
            }
        }
        Ok(TaylorCoefficients {
            shift_point: n.clone(),
            coeffs: s,
        })
    }

    /// `f(x + n)` as a polynomial; the zero polynomial shifts to itself.
    pub fn shifted(&self, n: &BigInt) -> Polynomial {
        match self.taylor_shift(n) {
            Ok(t) => t.into_polynomial(),
            Err(_) => Polynomial::zero(),
        }
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt, PolyError> {
        self.require_degree(0)?;
        Ok(self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    pub fn is_primitive(&self) -> Result<bool, PolyError> {
        Ok(self.content()?.is_one())
    }

    /// `f / content(f)`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Result<Polynomial, PolyError> {
        let c = self.content()?;
        Ok(Polynomial {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        })
    }

    pub fn root_bound(&self) -> Result<RootBound, PolyError> {
        let m = self.require_degree(1)?;
        let num = self.coeffs[..m]
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_default();
        let den = self.coeffs[m].abs();
        Ok(RootBound { num, den })
    }

    /// Whether `n >= H + d + 1`, decided exactly.
    pub fn admissible(&self, n: &BigInt, d: &BigInt) -> Result<bool, PolyError> {
        Ok(self.root_bound()?.admits(n, d))
    }

    /// Exact quotient `self / divisor` if the division leaves no remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let dm = divisor.degree()?;
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let m = self.degree()?;
        if m < dm {
            return None;
        }
        let lead = &divisor.coeffs[dm];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); m - dm + 1];
        for i in (0..=m - dm).rev() {
            let top = &rem[i + dm];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (t, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + t] -= &q * dc;
            }
            quot[i] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Polynomial::new(quot))
        } else {
            None
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// The ratio `H = max_{i<m} |a_i| / |a_m|`, kept as an unreduced integer pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBound {
    num: BigInt,
    den: BigInt,
}

impl RootBound {
    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// `n >= H + d + 1`, i.e. `(n - d - 1) * den >= num`.
    pub fn admits(&self, n: &BigInt, d: &BigInt) -> bool {
        let slack: BigInt = n - d - 1;
        if slack.is_negative() {
            return false;
        }
        slack * &self.den >= self.num
    }

    /// Smallest integer strictly greater than or equal to `H`.
    pub fn ceil(&self) -> BigInt {
        Integer::div_ceil(&self.num, &self.den)
    }

    /// Compares `H` with an integer-over-integer fraction without rounding.
    pub fn cmp_fraction(&self, num: &BigInt, den: &BigInt) -> Ordering {
        (&self.num * den).cmp(&(num * &self.den))
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.num.to_f64().unwrap_or(f64::INFINITY) / self.den.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for RootBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Coefficients `s_0..s_m` of `f(x + n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorCoefficients {
    shift_point: BigInt,
    coeffs: Vec<BigInt>,
}

impl TaylorCoefficients {
    pub fn shift_point(&self) -> &BigInt {
        &self.shift_point
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    pub fn into_polynomial(self) -> Polynomial {
        Polynomial::new(self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: comma-separated ascending coefficients; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Polynomial {
    /// Conventional rendering, highest degree first: `4*x^10+8*x^9-...+7`.
    pub fn to_expression(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = c.abs();
            match i {
                0 => out.push_str(&a.to_string()),
                _ => {
                    if !a.is_one() {
                        out.push_str(&a.to_string());
                        out.push('*');
                    }
                    out.push('x');
                    if i > 1 {
                        out.push('^');
                        out.push_str(&i.to_string());
                    }
                }
            }
        }
        out
    }
}

impl FromStr for Polynomial {
    type Err = ParsePolyError;

    /// Accepts either an ascending coefficient list (`7,5,-16`) or an
    /// expression in `x` (`4*x^2-16*x+7`). Repeated exponents are summed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(ParsePolyError::new(0, "empty polynomial"));
        }
        if s.contains(['x', 'X']) {
            parse_expression(s)
        } else {
            parse_coefficient_list(s)
        }
    }
}

fn parse_coefficient_list(s: &str) -> Result<Polynomial, ParsePolyError> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for (idx, field) in s.split(',').enumerate() {
        let lead = field.len() - field.trim_start().len();
        let token = field.trim();
        if token.is_empty() {
            return Err(ParsePolyError::new(
                offset + lead,
                format!("missing coefficient {idx}"),
            ));
        }
        let value = token.parse::<BigInt>().map_err(|_| {
            ParsePolyError::new(offset + lead, format!("invalid integer `{token}`"))
        })?;
        coeffs.push(value);
        offset += field.len() + 1;
    }
    Ok(Polynomial::new(coeffs))
}

struct ExprParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Self {
        ExprParser {
            chars: src
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .map(|&(_, c)| c)
                .collect()
        })
    }

    fn error(&self, message: impl Into<String>) -> ParsePolyError {
        ParsePolyError::new(self.offset(), message)
    }

    fn term(&mut self) -> Result<(BigInt, usize), ParsePolyError> {
        let coeff = self.digits();
        let has_x = if coeff.is_some() {
            if self.eat('*') {
                if !self.eat_x() {
                    return Err(self.error("expected `x` after `*`"));
                }
                true
            } else {
                self.eat_x()
            }
        } else if self.eat_x() {
            true
        } else {
            return Err(self.error("expected a coefficient or `x`"));
        };
        let coeff = match coeff {
            Some(d) => d.parse::<BigInt>().expect("digit run parses"),
            None => BigInt::one(),
        };
        if !has_x {
            return Ok((coeff, 0));
        }
        let exp = if self.eat('^') {
            let at = self.offset();
            let d = self
                .digits()
                .ok_or_else(|| self.error("expected exponent after `^`"))?;
            d.parse::<usize>()
                .map_err(|_| ParsePolyError::new(at, format!("exponent `{d}` too large")))?
        } else {
            1
        };
        Ok((coeff, exp))
    }

    fn eat_x(&mut self) -> bool {
        self.eat('x') || self.eat('X')
    }
}

fn parse_expression(s: &str) -> Result<Polynomial, ParsePolyError> {
    const MAX_DEGREE: usize = 1 << 16;
    let mut p = ExprParser::new(s);
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut first = true;
    while p.peek().is_some() {
        let negative = if p.eat('-') {
            true
        } else if p.eat('+') || first {
            false
        } else {
            return Err(p.error("expected `+` or `-` between terms"));
        };
        first = false;
        let at = p.offset();
        let (c, e) = p.term()?;
        if e > MAX_DEGREE {
            return Err(ParsePolyError::new(
                at,
                format!("exponent {e} exceeds {MAX_DEGREE}"),
            ));
        }
        if coeffs.len() <= e {
            coeffs.resize(e + 1, BigInt::zero());
        }
        if negative {
            coeffs[e] -= c;
        } else {
            coeffs[e] += c;
        }
    }
    if first {
        return Err(ParsePolyError::new(0, "empty polynomial"));
    }
    Ok(Polynomial::new(coeffs))
}
