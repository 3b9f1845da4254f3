//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QExpansion`] is a Laurent series in `q` known through the exponent
//! `prec`. Coefficients are stored sparsely; every exponent absent from the
//! map and not above `prec` is a known zero. Arithmetic tracks precision
//! pessimistically, so a result never claims a coefficient that its inputs do
//! not determine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QExpError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("exponent {exponent} exceeds the declared precision {prec}")]
    ExponentBeyondPrecision { exponent: i64, prec: i64 },
    #[error("series is zero to its precision {0}; its order is undefined")]
    ZeroSeries(i64),
    #[error("division by a series that is zero to its precision {0}")]
    ZeroDivisor(i64),
    #[error("precision underflow: the valid coefficient window is empty")]
    PrecisionUnderflow,
    #[error("level must be positive")]
    ZeroLevel,
}

/// Truncated q-expansion of a modular form (or a quotient of such) on Γ₀(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    level: u64,
    weight: i64,
    prec: i64,
    coeffs: BTreeMap<i64, BigRational>,
}

impl QExpansion {
    /// Builds a series from `(exponent, coefficient)` pairs. Zero coefficients
    /// are dropped; repeated exponents are summed.
    pub fn new<I>(level: u64, weight: i64, prec: i64, terms: I) -> Result<Self, QExpError>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        if level == 0 {
            return Err(QExpError::ZeroLevel);
        }
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e > prec {
                return Err(QExpError::ExponentBeyondPrecision { exponent: e, prec });
            }
            *coeffs.entry(e).or_insert_with(BigRational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(QExpansion {
            level,
            weight,
            prec,
            coeffs,
        })
    }

    /// Convenience constructor for integral series.
    pub fn from_integers(
        level: u64,
        weight: i64,
        prec: i64,
        terms: &[(i64, i64)],
    ) -> Result<Self, QExpError> {
        Self::new(
            level,
            weight,
            prec,
            terms
                .iter()
                .map(|&(e, c)| (e, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn zero(level: u64, weight: i64, prec: i64) -> Self {
        QExpansion {
            level,
            weight,
            prec,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series 1 (weight 0), known through `prec`.
    pub fn one(level: u64, prec: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if prec >= 0 {
            coeffs.insert(0, BigRational::one());
        }
        QExpansion {
            level,
            weight: 0,
            prec,
            coeffs,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Largest exponent whose coefficient is known.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `q^n`, or `None` when `n` lies beyond the precision.
    pub fn coeff(&self, n: i64) -> Option<BigRational> {
        if n > self.prec {
            return None;
        }
        Some(
            self.coeffs
                .get(&n)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Smallest exponent with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Valuation used in precision bookkeeping: a series that is zero to its
    /// precision is treated as vanishing to order `prec + 1`.
    fn effective_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.prec + 1)
    }

    /// Drops every coefficient above `prec` (no-op if already shorter).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        QExpansion {
            level: self.level,
            weight: self.weight,
            prec,
            coeffs: self
                .coeffs
                .range(..=prec)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Regards a level-`N` form as a form on Γ₀(M) for a multiple `M` of `N`.
    pub fn with_level(&self, level: u64) -> Result<Self, QExpError> {
        if level == 0 || !level.is_multiple_of(self.level) {
            return Err(QExpError::LevelMismatch(self.level, level));
        }
        Ok(QExpansion {
            level,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(&e, a)| (e, a * c)).collect()
        };
        QExpansion {
            coeffs,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|(&e, a)| (e, -a)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QExpError> {
        qexp_add(self, &other.neg())
    }
}

fn check_level(a: &QExpansion, b: &QExpansion) -> Result<(), QExpError> {
    if a.level != b.level {
        return Err(QExpError::LevelMismatch(a.level, b.level));
    }
    Ok(())
}

/// Coefficientwise sum; the result is known through `min(a.prec, b.prec)`.
pub fn qexp_add(a: &QExpansion, b: &QExpansion) -> Result<QExpansion, QExpError> {
    check_level(a, b)?;
    if a.weight != b.weight {
        return Err(QExpError::WeightMismatch(a.weight, b.weight));
    }
    let prec = a.prec.min(b.prec);
    let mut coeffs = a.truncate(prec).coeffs;
    for (&e, c) in b.coeffs.range(..=prec) {
        *coeffs.entry(e).or_insert_with(BigRational::zero) += c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(QExpansion {
        level: a.level,
        weight: a.weight,
        prec,
        coeffs,
    })
}

/// Cauchy product. With valuations `v_a`, `v_b` the product is determined
/// through `min(a.prec + v_b, b.prec + v_a)`.
pub fn qexp_mul(a: &QExpansion, b: &QExpansion) -> Result<QExpansion, QExpError> {
    check_level(a, b)?;
    let prec = (a.prec + b.effective_valuation()).min(b.prec + a.effective_valuation());
    let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (&i, x) in &a.coeffs {
        for (&j, y) in &b.coeffs {
            if i + j > prec {
                break;
            }
            *coeffs.entry(i + j).or_insert_with(BigRational::zero) += x * y;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(QExpansion {
        level: a.level,
        weight: a.weight + b.weight,
        prec,
        coeffs,
    })
}

/// `a^k` by repeated squaring; `a^0` is the constant series 1 of weight 0.
pub fn qexp_pow(a: &QExpansion, k: u32) -> Result<QExpansion, QExpError> {
    let mut result = QExpansion::one(a.level, a.prec.max(0));
    let mut base = a.clone();
    let mut e = k;
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            result = if first {
                base.clone()
            } else {
                qexp_mul(&result, &base)?
            };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            base = qexp_mul(&base, &base)?;
        }
    }
    Ok(result)
}

/// Evaluates the monomial `f^a g^b h^c`.
pub fn monomial_eval(
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
    (a, b, c): (u32, u32, u32),
) -> Result<QExpansion, QExpError> {
    check_level(f, g)?;
    check_level(f, h)?;
    if a + b + c == 0 {
        return Err(QExpError::PrecisionUnderflow);
    }
    let mut acc: Option<QExpansion> = None;
    for (s, k) in [(f, a), (g, b), (h, c)] {
        if k == 0 {
            continue;
        }
        if s.is_zero() {
            return Err(QExpError::PrecisionUnderflow);
        }
        let p = qexp_pow(s, k)?;
        acc = Some(match acc {
            None => p,
            Some(x) => qexp_mul(&x, &p)?,
        });
    }
    let out = acc.expect("at least one positive exponent");
    if out.prec < out.effective_valuation() {
        return Err(QExpError::PrecisionUnderflow);
    }
    Ok(out)
}

/// Laurent quotient `num / den`. The result starts at
/// `q^(val(num) - val(den))` and is determined to the smaller of the two
/// relative precisions.
pub fn qexp_div(num: &QExpansion, den: &QExpansion) -> Result<QExpansion, QExpError> {
    check_level(num, den)?;
    let vd = den.valuation().ok_or(QExpError::ZeroDivisor(den.prec))?;
    let vn = num.effective_valuation();
    let rel = (num.prec - vn).min(den.prec - vd);
    let start = vn - vd;
    let prec = start + rel;
    if rel < 0 {
        return Err(QExpError::PrecisionUnderflow);
    }
    let lead = den.coeffs[&vd].clone();
    // den = q^vd * sum_j d_j q^j; solve coefficientwise for the quotient.
    let dtail: Vec<(i64, &BigRational)> = den
        .coeffs
        .range(vd + 1..)
        .map(|(&e, c)| (e - vd, c))
        .collect();
    let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
    for k in 0..=rel {
        let mut acc = num
            .coeffs
            .get(&(vn + k))
            .cloned()
            .unwrap_or_else(BigRational::zero);
        for &(j, d) in &dtail {
            if j > k {
                break;
            }
            if let Some(c) = out.get(&(start + k - j)) {
                acc -= d * c;
            }
        }
        if !acc.is_zero() {
            out.insert(start + k, acc / &lead);
        }
    }
    Ok(QExpansion {
        level: num.level,
        weight: num.weight - den.weight,
        prec,
        coeffs: out,
    })
}

/// Order of vanishing at the cusp ∞ (may be negative for Laurent series).
pub fn vanishing_order(a: &QExpansion) -> Result<i64, QExpError> {
    a.valuation().ok_or(QExpError::ZeroSeries(a.prec))
}

fn sigma(n: u64, k: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            if d * d != n {
                s += BigInt::from(n / d).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n` on SL₂(ℤ), known through `q^prec`.
pub fn eisenstein_e4(prec: i64) -> QExpansion {
    let terms = std::iter::once((0, BigRational::one())).chain((1..=prec).map(|n| {
        (
            n,
            BigRational::from_integer(BigInt::from(240) * sigma(n as u64, 3)),
        )
    }));
    QExpansion::new(1, 4, prec, terms).expect("exponents within precision")
}

/// `Δ = q Π (1 - q^n)^24`, known through `q^prec`.
pub fn delta(prec: i64) -> QExpansion {
    let len = prec.max(0) as usize; // coefficients of q^0..q^(prec-1) of the product
    let mut prod = vec![BigInt::zero(); len];
    if len > 0 {
        prod[0] = BigInt::one();
    }
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let t = prod[i - n].clone();
                prod[i] -= t;
            }
        }
    }
    let terms = prod
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as i64 + 1, BigRational::from_integer(c)));
    QExpansion::new(1, 12, prec, terms).expect("exponents within precision")
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            if !unit || e == 0 {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "{}q", if unit { "" } else { "*" })?,
                _ => write!(f, "{}q^{e}", if unit { "" } else { "*" })?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec + 1)
    }
}
