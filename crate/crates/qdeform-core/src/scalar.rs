//! Exact coefficient arithmetic: Gaussian rationals extended by commuting
//! formal parameters with integer (Laurent) exponents, plus truncated power
//! series in a distinguished deformation parameter.
//!
//! The parameter `sqrt2` is special: it squares to 2, so stored exponents of
//! `sqrt2` are always 0 or 1 and the even part is folded into the rational
//! coefficient. Likewise `s` is used by convention for the square root of
//! minus the cosmological constant, but carries no rewrite rule of its own.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Name of the formal square root of two.
pub const SQRT2: &str = "sqrt2";

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("divergent limit: negative power of `{0}` survives")]
    DivergentLimit(String),
    #[error("cannot substitute a non-invertible value into a negative power of `{0}`")]
    NonInvertibleSubstitution(String),
    #[error("parse error in scalar text: {0}")]
    Parse(String),
}

/// An element of Q(i): a rational real and imaginary part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero Gaussian rational");
        Self { re: &self.re / &norm, im: -(&self.im / &norm) }
    }

    /// 2^(k) for possibly negative k, as an exact rational.
    fn pow2(k: i64) -> BigRational {
        let two = BigInt::from(2);
        if k >= 0 {
            BigRational::from_integer(two.pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), two.pow((-k) as u32))
        }
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", render_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}*i", render_rational(&self.im))
        } else {
            write!(f, "({} + {}*i)", render_rational(&self.re), render_rational(&self.im))
        }
    }
}

/// A product of parameter powers, e.g. k^-1 * chi^2. Exponents are never zero.
pub type Monomial = BTreeMap<String, i64>;

/// Sparse Laurent polynomial over Q(i) in named commuting parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_coeff(GaussianRational::one())
    }

    pub fn i() -> Self {
        Self::from_coeff(GaussianRational::i())
    }

    pub fn int(n: i64) -> Self {
        Self::from_coeff(GaussianRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_coeff(GaussianRational::from_ratio(num, den))
    }

    pub fn from_coeff(c: GaussianRational) -> Self {
        let mut s = Self::zero();
        s.add_term(Monomial::new(), c);
        s
    }

    pub fn param(name: &str) -> Self {
        Self::param_pow(name, 1)
    }

    pub fn param_pow(name: &str, exp: i64) -> Self {
        let mut s = Self::zero();
        let mut m = Monomial::new();
        if exp != 0 {
            m.insert(name.to_string(), exp);
        }
        s.add_term(m, GaussianRational::one());
        s
    }

    /// sqrt2 as a scalar; (sqrt2)^2 folds to 2 automatically.
    pub fn sqrt2() -> Self {
        Self::param(SQRT2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::new())
                .map(|c| c.re.is_one() && c.im.is_zero())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// Inserts coeff * monomial, folding sqrt2 exponents down to {0, 1}.
    pub fn add_term(&mut self, mut mono: Monomial, mut coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        if let Some(&e) = mono.get(SQRT2) {
            let r = e.rem_euclid(2);
            if r != e {
                let half = GaussianRational::pow2((e - r) / 2);
                coeff = coeff.mul(&GaussianRational { re: half, im: BigRational::zero() });
                if r == 0 {
                    mono.remove(SQRT2);
                } else {
                    mono.insert(SQRT2.to_string(), r);
                }
            }
        }
        mono.retain(|_, v| *v != 0);
        let entry = self.terms.entry(mono).or_insert_with(GaussianRational::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            // re-borrow to remove; find the key we just updated
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (k, v) in m2 {
                    *m.entry(k.clone()).or_insert(0) += v;
                }
                out.add_term(m, c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul(&Scalar::int(n))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse, defined only for single-term scalars.
    pub fn inv_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mut inv_m = Monomial::new();
        for (k, v) in m {
            inv_m.insert(k.clone(), -v);
        }
        let mut out = Self::zero();
        // sqrt2^-1 folds to sqrt2/2 through add_term.
        out.add_term(inv_m, c.inv());
        Some(out)
    }

    /// Complex conjugation: i -> -i. Parameters are treated as real.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.conj());
        }
        out
    }

    /// Antilinear conjugation treating parameters as complex unknowns:
    /// conjugates numeric coefficients and toggles `suffix` on every
    /// parameter name except sqrt2 (which is real).
    pub fn conj_params(&self, suffix: &str) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut m2 = Monomial::new();
            for (name, e) in m {
                let new_name = if name == SQRT2 {
                    name.clone()
                } else if let Some(base) = name.strip_suffix(suffix) {
                    base.to_string()
                } else {
                    format!("{name}{suffix}")
                };
                m2.insert(new_name, *e);
            }
            out.add_term(m2, c.conj());
        }
        out
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for m in self.terms.keys() {
            for k in m.keys() {
                set.insert(k.clone());
            }
        }
        set
    }

    /// Degree in `param` of a single monomial.
    fn mono_degree(m: &Monomial, param: &str) -> i64 {
        m.get(param).copied().unwrap_or(0)
    }

    /// Total degree of a monomial over a set of parameters.
    pub fn mono_total_degree(m: &Monomial, params: &BTreeSet<String>) -> i64 {
        m.iter().filter(|(k, _)| params.contains(*k)).map(|(_, v)| *v).sum()
    }

    /// Splits into coefficients of powers of `param`: power -> Scalar without `param`.
    pub fn by_powers_of(&self, param: &str) -> BTreeMap<i64, Scalar> {
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = Self::mono_degree(m, param);
            let mut rest = m.clone();
            rest.remove(param);
            out.entry(d).or_insert_with(Scalar::zero).add_term(rest, c.clone());
        }
        out.retain(|_, s| !s.is_zero());
        out
    }

    /// Value at param -> 0: drops positive powers, errors on surviving poles.
    pub fn limit_at_zero(&self, param: &str) -> Result<Scalar, ScalarError> {
        let by = self.by_powers_of(param);
        for (&d, s) in &by {
            if d < 0 && !s.is_zero() {
                return Err(ScalarError::DivergentLimit(param.to_string()));
            }
        }
        Ok(by.get(&0).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Substitutes `value` for `param`. Negative powers require the value to
    /// be a single-term (invertible) scalar.
    pub fn substitute(&self, param: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let by = self.by_powers_of(param);
        let mut out = Scalar::zero();
        for (d, s) in by {
            let factor = if d >= 0 {
                value.pow(d as u32)
            } else {
                let inv = value
                    .inv_monomial()
                    .ok_or_else(|| ScalarError::NonInvertibleSubstitution(param.to_string()))?;
                inv.pow((-d) as u32)
            };
            out = out.add(&s.mul(&factor));
        }
        Ok(out)
    }

    /// Drops every term whose total degree in `params` exceeds `order`.
    pub fn truncate_total_degree(&self, params: &BTreeSet<String>, order: i64) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            if Self::mono_total_degree(m, params) <= order {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn total_degree_in(&self, params: &BTreeSet<String>) -> Option<i64> {
        self.terms.keys().map(|m| Self::mono_total_degree(m, params)).max()
    }

    /// Canonical text rendering, e.g. "(3/2 + 1/2*i)*k^-1*chi^2".
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            let coeff = c.to_string();
            factors.push(coeff);
            for (name, exp) in m {
                if *exp == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{}^{}", name, exp));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// Parses the output of `render` back.
    pub fn parse(text: &str) -> Result<Scalar, ScalarError> {
        let text = text.trim();
        if text == "0" {
            return Ok(Scalar::zero());
        }
        let mut out = Scalar::zero();
        for term in split_top_level(text)? {
            let (mono, coeff) = parse_term(&term)?;
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

/// Splits on " + " at paren depth zero.
fn split_top_level(text: &str) -> Result<Vec<String>, ScalarError> {
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => {
                parts.push(text[start..i - 1].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(ScalarError::Parse("unbalanced parentheses".into()));
    }
    parts.push(text[start..].trim().to_string());
    Ok(parts)
}

fn parse_rational(text: &str) -> Result<BigRational, ScalarError> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt, ScalarError> {
        s.trim().parse::<BigInt>().map_err(|_| ScalarError::Parse(format!("bad integer `{s}`")))
    };
    if let Some((n, d)) = text.split_once('/') {
        Ok(BigRational::new(parse_int(n)?, parse_int(d)?))
    } else {
        Ok(BigRational::from_integer(parse_int(text)?))
    }
}

fn parse_coeff(text: &str) -> Result<GaussianRational, ScalarError> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        // "(re + im*i)" with im possibly negative
        let pieces: Vec<&str> = inner.splitn(2, " + ").collect();
        if pieces.len() != 2 {
            return Err(ScalarError::Parse(format!("bad complex coefficient `{text}`")));
        }
        let re = parse_rational(pieces[0])?;
        let im_txt = pieces[1]
            .strip_suffix("*i")
            .ok_or_else(|| ScalarError::Parse(format!("bad imaginary part `{}`", pieces[1])))?;
        Ok(GaussianRational::new(re, parse_rational(im_txt)?))
    } else if let Some(im_txt) = text.strip_suffix("*i") {
        Ok(GaussianRational::new(BigRational::zero(), parse_rational(im_txt)?))
    } else if text == "i" {
        Ok(GaussianRational::i())
    } else if text == "-i" {
        Ok(GaussianRational::i().neg())
    } else {
        Ok(GaussianRational::new(parse_rational(text)?, BigRational::zero()))
    }
}

fn parse_term(term: &str) -> Result<(Monomial, GaussianRational), ScalarError> {
    // split on '*' at depth 0, but keep "*i" attached to a numeric prefix
    let mut factors = Vec::new();
    let bytes = term.as_bytes();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                factors.push(term[start..i].to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    factors.push(term[start..].to_string());
    // re-join a trailing bare "i" onto a numeric predecessor: "1/2*i" renders as one coefficient
    let mut coeff = GaussianRational::one();
    let mut mono = Monomial::new();
    let mut idx = 0usize;
    while idx < factors.len() {
        let f = factors[idx].trim().to_string();
        let is_coeff_like = f.starts_with('(')
            || f.chars().next().map(|c| c.is_ascii_digit() || c == '-').unwrap_or(false);
        if is_coeff_like {
            // may be "num" or "num" followed by separate "i"
            let mut text = f.clone();
            if idx + 1 < factors.len() && factors[idx + 1].trim() == "i" && !text.starts_with('(') {
                text = format!("{}*i", text);
                idx += 1;
            }
            coeff = coeff.mul(&parse_coeff(&text)?);
        } else if f == "i" {
            coeff = coeff.mul(&GaussianRational::i());
        } else {
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => (
                    n.to_string(),
                    e.parse::<i64>().map_err(|_| ScalarError::Parse(format!("bad exponent `{e}`")))?,
                ),
                None => (f.clone(), 1),
            };
            *mono.entry(name).or_insert(0) += exp;
        }
        idx += 1;
    }
    Ok((mono, coeff))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Power series in one distinguished parameter, truncated at a fixed order.
/// Coefficient scalars never contain the distinguished parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub param: String,
    pub order: usize,
    pub coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(param: &str, order: usize) -> Self {
        Self { param: param.to_string(), order, coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn from_scalar(s: &Scalar, param: &str, order: usize) -> Result<Self, ScalarError> {
        let mut out = Self::zero(param, order);
        for (d, c) in s.by_powers_of(param) {
            if d < 0 {
                return Err(ScalarError::DivergentLimit(param.to_string()));
            }
            if (d as usize) <= order {
                out.coeffs[d as usize] = c;
            }
        }
        Ok(out)
    }

    pub fn to_scalar(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out = out.add(&c.mul(&Scalar::param_pow(&self.param, k as i64)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.param, other.param);
        assert_eq!(self.order, other.order);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Self { param: self.param.clone(), order: self.order, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.param, other.param);
        assert_eq!(self.order, other.order);
        let mut out = Self::zero(&self.param, self.order);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if a + b > self.order {
                    break;
                }
                out.coeffs[a + b] = out.coeffs[a + b].add(&ca.mul(cb));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let r = Scalar::sqrt2().mul(&Scalar::sqrt2());
        assert_eq!(r, Scalar::int(2));
        let inv = Scalar::sqrt2().inv_monomial().unwrap();
        assert_eq!(inv.mul(&Scalar::sqrt2()), Scalar::one());
        // sqrt2^-1 = sqrt2 / 2
        assert_eq!(inv, Scalar::sqrt2().mul(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn i_squares_to_minus_one() {
        assert_eq!(Scalar::i().mul(&Scalar::i()), Scalar::int(-1));
    }

    #[test]
    fn render_roundtrip_example() {
        let s = Scalar::ratio(3, 2)
            .add(&Scalar::i().mul(&Scalar::ratio(1, 2)))
            .mul(&Scalar::param_pow("k", -1))
            .mul(&Scalar::param_pow("chi", 2));
        assert_eq!(s.render(), "(3/2 + 1/2*i)*chi^2*k^-1");
        assert_eq!(Scalar::parse(&s.render()).unwrap(), s);
    }
}
