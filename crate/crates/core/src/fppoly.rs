//! Dense univariate polynomials over F_p and degree-only factorization.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::is_prime;
use crate::poly::BiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic in T")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial has degree zero")]
    Constant,
}

/// Polynomial over F_p; `coeffs[i]` is the coefficient of T^i, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

impl FpPoly {
    /// Reduces signed integer coefficients mod `p` (low degree first).
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self, FpError> {
        if !is_prime(p) {
            return Err(FpError::NotPrime(p));
        }
        let reduced = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        Ok(Self::from_residues(p, reduced))
    }

    fn from_residues(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    /// The polynomial T.
    pub fn x(p: u64) -> Self {
        Self::from_residues(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p);
                self.scale(inv)
            }
        }
    }

    fn scale(&self, c: u64) -> Self {
        Self::from_residues(
            self.p,
            self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::from_residues(self.p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.p - 1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        Self::from_residues(self.p, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = inv_mod(d.coeffs[dd], self.p);
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(self.p), self.clone());
        };
        let mut q = vec![0u64; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = mulmod(r[k + dd], inv, self.p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                let t = mulmod(c, b, self.p);
                r[k + j] = (r[k + j] + self.p - t) % self.p;
            }
        }
        (
            Self::from_residues(self.p, q),
            Self::from_residues(self.p, r),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % self.p, self.p))
            .collect();
        Self::from_residues(self.p, c)
    }

    /// `self^e mod m` by repeated squaring.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut result = Self::from_residues(self.p, vec![1]).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(a: &FpPoly, b: &FpPoly) -> FpPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// True iff gcd(f, f') is constant.
pub fn is_squarefree(f: &FpPoly) -> bool {
    let d = f.derivative();
    if d.is_zero() {
        return f.degree() == Some(0);
    }
    gcd(f, &d).degree() == Some(0)
}

/// Q̃(r, T) mod p for a Q̃ monic in T.
pub fn specialize_mod(qt: &BiPoly, r: i64, p: u64) -> Result<FpPoly, FpError> {
    if !is_prime(p) {
        return Err(FpError::NotPrime(p));
    }
    if !qt.is_monic_in_t() {
        return Err(FpError::NotMonic);
    }
    let pb = BigInt::from(p);
    let r = BigInt::from(r.rem_euclid(p as i64));
    let coeffs = (0..=qt.deg_t())
        .map(|k| {
            let v = qt
                .t_coeff(k)
                .iter()
                .rev()
                .fold(BigInt::from(0), |acc, c| (acc * &r + c) % &pb);
            let v = ((v % &pb) + &pb) % &pb;
            v.to_u64().expect("reduced residue")
        })
        .collect();
    Ok(FpPoly::from_residues(p, coeffs))
}

/// Distinct-degree factorization of a monic squarefree `f`: pairs
/// `(d, count)` meaning `count` irreducible factors of degree `d`, in
/// increasing `d`.
pub fn distinct_degree_factorization(f: &FpPoly) -> Result<Vec<(usize, usize)>, FpError> {
    if !f.is_monic() {
        return Err(FpError::NotMonic);
    }
    if f.degree() == Some(0) {
        return Err(FpError::Constant);
    }
    if !is_squarefree(f) {
        return Err(FpError::NotSquarefree);
    }
    let p = f.p;
    let x = FpPoly::x(p);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap() >= 2 * d {
        h = h.powmod(p, &rest);
        let g = gcd(&rest, &h.sub(&x));
        let gd = g.degree().unwrap();
        if gd > 0 {
            out.push((d, gd / d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
        d += 1;
    }
    let r = rest.degree().unwrap();
    if r > 0 {
        out.push((r, 1));
    }
    Ok(out)
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.p);
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{c}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}
