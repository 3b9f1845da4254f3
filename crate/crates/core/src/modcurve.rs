//! Closed-form invariants of the modular curve X₀(N).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisors, euler_phi, factorize, gcd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("weight {0} is not an even integer >= 2")]
    BadWeight(i64),
}

/// Ogg's list of levels with hyperelliptic X₀(N).
pub const HYPERELLIPTIC_LEVELS: [u64; 19] = [
    22, 23, 26, 28, 29, 30, 31, 33, 35, 37, 39, 40, 41, 46, 47, 48, 50, 59, 71,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveType {
    Hyperelliptic,
    NonHyperelliptic,
    /// Genus at most one.
    LowGenus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub level: u64,
    /// Index of Γ₀(N) in SL₂(ℤ).
    pub mu: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub cusps: u64,
    pub genus: u64,
    pub curve_type: CurveType,
}

fn is_non_hyperelliptic_level(n: u64) -> bool {
    matches!(n, 34 | 38 | 42 | 43 | 44 | 45 | 51..=58 | 60..=70) || n >= 72
}

pub fn curve_invariants(level: u64) -> Result<CurveInvariants, CurveError> {
    if level == 0 {
        return Err(CurveError::ZeroLevel);
    }
    let primes = factorize(level);
    let mu = primes.iter().fold(level, |acc, &(p, _)| acc / p * (p + 1));
    let nu2 = if level.is_multiple_of(4) {
        0
    } else {
        primes.iter().fold(1, |acc, &(p, _)| {
            acc * match p {
                2 => 1,
                _ if p % 4 == 1 => 2,
                _ => 0,
            }
        })
    };
    let nu3 = if level.is_multiple_of(9) {
        0
    } else {
        primes.iter().fold(1, |acc, &(p, _)| {
            acc * match p {
                3 => 1,
                _ if p % 3 == 1 => 2,
                _ => 0,
            }
        })
    };
    let cusps = divisors(level)
        .into_iter()
        .map(|d| euler_phi(gcd(d, level / d)))
        .sum::<u64>();
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    let genus = (twelve_g / 12) as u64;
    let curve_type = if HYPERELLIPTIC_LEVELS.contains(&level) {
        CurveType::Hyperelliptic
    } else if is_non_hyperelliptic_level(level) {
        CurveType::NonHyperelliptic
    } else {
        CurveType::LowGenus
    };
    Ok(CurveInvariants {
        level,
        mu,
        nu2,
        nu3,
        cusps,
        genus,
        curve_type,
    })
}

fn check_weight(m: i64) -> Result<(), CurveError> {
    if m < 2 || m % 2 != 0 {
        return Err(CurveError::BadWeight(m));
    }
    Ok(())
}

/// dim S_m(Γ₀(N)) for even m >= 2.
pub fn dim_cusp_forms(level: u64, m: i64) -> Result<u64, CurveError> {
    check_weight(m)?;
    let inv = curve_invariants(level)?;
    if m == 2 {
        return Ok(inv.genus);
    }
    let dim = (m - 1) * (inv.genus as i64 - 1)
        + (m / 2 - 1) * inv.cusps as i64
        + (m / 4) * inv.nu2 as i64
        + (m / 3) * inv.nu3 as i64;
    Ok(dim as u64)
}

/// `dim S_m + g - 1 - ε_m` with ε_2 = 1 and ε_m = 0 otherwise: the degree of
/// the divisor of zeroes attached to a cusp form of weight m, bounding
/// [ℚ(X₀(N)) : ℚ(g/f)] for any two independent forms f, g.
pub fn l_bound(level: u64, m: i64) -> Result<i64, CurveError> {
    let dim = dim_cusp_forms(level, m)? as i64;
    let genus = curve_invariants(level)?.genus as i64;
    let eps = if m == 2 { 1 } else { 0 };
    Ok(dim + genus - 1 - eps)
}

/// Number of leading coefficients (q⁰ … q^⌊wμ/12⌋) whose vanishing forces a
/// weight-w form on Γ₀(N) to be zero.
pub fn sturm_precision(level: u64, weight: i64) -> Result<u64, CurveError> {
    if weight < 0 {
        return Err(CurveError::BadWeight(weight));
    }
    let mu = curve_invariants(level)?.mu;
    Ok(weight as u64 * mu / 12 + 1)
}
