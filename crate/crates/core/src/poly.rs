//! Integer polynomials used by the relation pipeline: ternary forms
//! P(x0, x1, x2), bivariate polynomials Q(λ, T), and a small parser so that
//! displayed polynomials can be written down as text.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("form is not homogeneous: term {term:?} has degree {found}, expected {expected}")]
    NotHomogeneous {
        term: [u32; 3],
        found: u32,
        expected: u32,
    },
    #[error("zero polynomial")]
    Zero,
}

/// Sparse multivariate integer polynomial; exponent vectors index the
/// variables positionally.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Parses `text` over the given variable names (`λ` is accepted as an
    /// alias of `l`, and `−` of `-`). Juxtaposition multiplies.
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, PolyError> {
        let mut p = Parser {
            src: text,
            pos: 0,
            vars,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '\\') {
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        self.skip_ws();
        let mut acc = match self.peek() {
            Some('-') | Some('−') => {
                self.bump();
                self.term()?.neg()
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some('-') | Some('−') => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') | Some('·') => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let braced = self.peek() == Some('{');
            if braced {
                self.bump();
            }
            let n = self.number()?;
            if braced {
                self.skip_ws();
                if self.peek() != Some('}') {
                    return Err(self.error("expected `}`"));
                }
                self.bump();
            }
            let k: u32 = n
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        self.skip_ws();
        let n = self.vars.len();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(MPoly::constant(n, self.number()?)),
            Some(c) if c.is_alphabetic() => {
                // Longest variable name that matches here.
                let rest = &self.src[self.pos..];
                let rest_norm = rest.replacen('λ', "l", 1);
                let best = self
                    .vars
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| rest_norm.starts_with(*v))
                    .max_by_key(|(_, v)| v.len());
                match best {
                    Some((i, v)) => {
                        let consumed = if rest.starts_with('λ') && v.starts_with('l') {
                            'λ'.len_utf8() + v.len() - 1
                        } else {
                            v.len()
                        };
                        self.pos += consumed;
                        Ok(MPoly::var(n, i))
                    }
                    None => {
                        let word: String =
                            rest.chars().take_while(|c| c.is_alphanumeric()).collect();
                        Err(PolyError::UnknownVariable(word))
                    }
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

fn sign_normalize(coeffs: &mut BTreeMap<[u32; 3], BigInt>) {
    let g = coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    let flip = coeffs
        .iter()
        .next_back()
        .is_some_and(|(_, c)| c.is_negative());
    if g.is_zero() {
        return;
    }
    for c in coeffs.values_mut() {
        *c = &*c / &g;
        if flip {
            *c = -&*c;
        }
    }
}

/// Homogeneous integer form in (x0, x1, x2), with x0 ↔ f, x1 ↔ g, x2 ↔ h.
///
/// Terms are kept in a map ordered by exponent triple; the lexicographically
/// greatest triple is the "leading" term used for sign normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    degree: u32,
    coeffs: BTreeMap<[u32; 3], BigInt>,
}

impl TernaryForm {
    pub fn new<I>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = ([u32; 3], BigInt)>,
    {
        let mut coeffs: BTreeMap<[u32; 3], BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_insert_with(BigInt::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let degree = match coeffs.keys().next() {
            Some(e) => e.iter().sum(),
            None => return Err(PolyError::Zero),
        };
        for e in coeffs.keys() {
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(PolyError::NotHomogeneous {
                    term: *e,
                    found: d,
                    expected: degree,
                });
            }
        }
        Ok(TernaryForm { degree, coeffs })
    }

    /// Parses a form in the variables `x0, x1, x2` (or `f, g, h`).
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let vars = if text.contains('x') {
            ["x0", "x1", "x2"]
        } else {
            ["f", "g", "h"]
        };
        let p = MPoly::parse(text, &vars)?;
        Self::new(p.terms.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c)))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<[u32; 3], BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, e: [u32; 3]) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Primitive, with a positive coefficient on the lexicographically
    /// greatest exponent triple.
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        sign_normalize(&mut coeffs);
        TernaryForm {
            degree: self.degree,
            coeffs,
        }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    pub fn neg(&self) -> Self {
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// Equality up to multiplication by ±1.
    pub fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == other.neg()
    }
}

/// Q(λ, T) = Σ a_{i,k} λ^i T^k with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn new<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigInt)>,
    {
        let mut coeffs: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_insert_with(BigInt::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        BiPoly { coeffs }
    }

    /// Parses a polynomial in `l` (or `λ`) and `T`.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let p = MPoly::parse(text, &["l", "T"])?;
        Ok(Self::new(
            p.terms.into_iter().map(|(e, c)| ((e[0], e[1]), c)),
        ))
    }

    /// Builds Σ a_k(λ) T^k from its λ-coefficient lists, `a[k][i]` being the
    /// coefficient of λ^i T^k.
    pub fn from_t_coeffs(a: &[Vec<BigInt>]) -> Self {
        Self::new(a.iter().enumerate().flat_map(|(k, ak)| {
            ak.iter()
                .enumerate()
                .map(move |(i, c)| ((i as u32, k as u32), c.clone()))
        }))
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_t(&self) -> u32 {
        self.coeffs.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn deg_lambda(&self) -> u32 {
        self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(i, k)| i + k).max().unwrap_or(0)
    }

    /// a_k(λ) as a dense coefficient list (constant term first).
    pub fn t_coeff(&self, k: u32) -> Vec<BigInt> {
        let mut out = Vec::new();
        for (&(i, kk), c) in &self.coeffs {
            if kk == k {
                let i = i as usize;
                if out.len() <= i {
                    out.resize(i + 1, BigInt::zero());
                }
                out[i] = c.clone();
            }
        }
        out
    }

    pub fn is_monic_in_t(&self) -> bool {
        let lead = self.t_coeff(self.deg_t());
        lead.len() == 1 && lead[0].is_one()
    }

    /// True when only even powers of T occur.
    pub fn is_even_in_t(&self) -> bool {
        self.coeffs.keys().all(|&(_, k)| k % 2 == 0)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn eval(&self, lambda: &BigInt, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&(i, k), c)| c * lambda.pow(i) * t.pow(k))
            .sum()
    }
}

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    factors: &[(&str, u32)],
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let vars: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(v, e)| {
            if e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if vars.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{}", vars.join("*"))
    } else {
        write!(f, "{abs}*{}", vars.join("*"))
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (e, c)) in self.coeffs.iter().rev().enumerate() {
            write_monomial(f, n == 0, c, &[("x0", e[0]), ("x1", e[1]), ("x2", e[2])])?;
        }
        Ok(())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        // Descending in T, then in λ.
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| (b.0 .1, b.0 .0).cmp(&(a.0 .1, a.0 .0)));
        for (n, (&(i, k), c)) in terms.into_iter().enumerate() {
            write_monomial(f, n == 0, c, &[("l", i), ("T", k)])?;
        }
        Ok(())
    }
}
