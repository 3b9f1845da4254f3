//! Relation polynomials P(f, g, h) = 0 between three modular forms, their
//! dehomogenizations Q(λ, T) = P(1, λ, T) and the monic transforms Q̃.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::modcurve::{l_bound, sturm_precision, CurveError, CurveInvariants, CurveType};
use crate::poly::{BiPoly, PolyError, TernaryForm};
use crate::qexp::{monomial_eval, qexp_mul, qexp_pow, vanishing_order, QExpError, QExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error(transparent)]
    Series(#[from] QExpError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the three forms are linearly dependent")]
    LinearDependence,
    #[error("no relation of degree <= {0}")]
    NoRelationWithinBound(u32),
    #[error("kernel of dimension {dimension} at degree {degree}; longer expansions needed")]
    AmbiguousKernel { degree: u32, dimension: usize },
    #[error("degree {degree} needs coefficients through q^{needed}, only q^{available} known")]
    InsufficientPrecision {
        degree: u32,
        needed: i64,
        available: i64,
    },
    #[error("dehomogenized relation does not involve T")]
    ResultConstantInT,
    #[error("vanishing orders {found:?}, expected {expected:?}")]
    WrongVanishingOrders { expected: Vec<i64>, found: Vec<i64> },
    #[error("need at least three forms, got {0}")]
    TooFewForms(usize),
}

/// Exponent triples of degree `d`, lexicographically descending.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Lazily built powers of one series.
struct Powers {
    base: QExpansion,
    cache: Vec<QExpansion>,
}

impl Powers {
    fn new(base: QExpansion) -> Self {
        let one = qexp_pow(&base, 0).expect("zeroth power");
        Powers {
            base,
            cache: vec![one],
        }
    }

    fn get(&mut self, k: u32) -> Result<&QExpansion, QExpError> {
        while self.cache.len() <= k as usize {
            let next = qexp_mul(self.cache.last().unwrap(), &self.base)?;
            self.cache.push(next);
        }
        Ok(&self.cache[k as usize])
    }
}

fn check_compatible(f: &QExpansion, g: &QExpansion, h: &QExpansion) -> Result<(), QExpError> {
    for s in [g, h] {
        if s.level() != f.level() {
            return Err(QExpError::LevelMismatch(f.level(), s.level()));
        }
        if s.weight() != f.weight() {
            return Err(QExpError::WeightMismatch(f.weight(), s.weight()));
        }
    }
    Ok(())
}

/// Coefficients of q^0 … q^(rows-1).
fn coefficient_column(series: &QExpansion, rows: usize) -> Vec<BigRational> {
    (0..rows as i64)
        .map(|n| series.coeff(n).unwrap_or_else(BigRational::zero))
        .collect()
}

fn clear_denominators(rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigInt>> {
    rows.into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Drops coefficients beyond `top`; products of holomorphic series stay
/// determined through `top`, so nothing the caller needs is lost.
fn truncate_triple(
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
    top: i64,
) -> (QExpansion, QExpansion, QExpansion) {
    if [f, g, h]
        .iter()
        .all(|s| s.valuation().is_none_or(|v| v >= 0))
    {
        (f.truncate(top), g.truncate(top), h.truncate(top))
    } else {
        (f.clone(), g.clone(), h.clone())
    }
}

fn search(
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
    maxdeg: u32,
    reorder: &dyn Fn(&mut Vec<Vec<BigInt>>),
) -> Result<TernaryForm, RelationError> {
    check_compatible(f, g, h)?;
    let level = f.level();
    let weight = f.weight();
    let top = sturm_precision(level, maxdeg as i64 * weight)? as i64;
    let (f, g, h) = truncate_triple(f, g, h, top);
    let mut pf = Powers::new(f);
    let mut pg = Powers::new(g);
    let mut ph = Powers::new(h);
    for d in 1..=maxdeg {
        let rows = sturm_precision(level, d as i64 * weight)? as usize;
        let needed = rows as i64 - 1;
        let monos = monomials(d);
        let mut columns = Vec::with_capacity(monos.len());
        for &[a, b, c] in &monos {
            let fg = qexp_mul(pf.get(a)?, pg.get(b)?)?;
            let m = qexp_mul(&fg, ph.get(c)?)?;
            if m.prec() < needed {
                return Err(RelationError::InsufficientPrecision {
                    degree: d,
                    needed,
                    available: m.prec(),
                });
            }
            columns.push(coefficient_column(&m, rows));
        }
        let rational_rows: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| columns.iter().map(|col| col[i].clone()).collect())
            .collect();
        let mut int_rows = clear_denominators(rational_rows);
        reorder(&mut int_rows);
        let kernel = IntMatrix::new(int_rows, monos.len()).nullspace();
        match kernel.len() {
            0 => continue,
            _ if d == 1 => return Err(RelationError::LinearDependence),
            1 => {
                let v = &kernel[0];
                let form = TernaryForm::new(monos.iter().copied().zip(v.iter().cloned()))?;
                return Ok(form.normalized());
            }
            dimension => {
                return Err(RelationError::AmbiguousKernel {
                    degree: d,
                    dimension,
                })
            }
        }
    }
    Err(RelationError::NoRelationWithinBound(maxdeg))
}

/// Minimal-degree homogeneous integer relation between `f`, `g`, `h`,
/// certified to the Sturm bound of each candidate degree.
pub fn find_relation(
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
    maxdeg: u32,
) -> Result<TernaryForm, RelationError> {
    search(f, g, h, maxdeg, &|_| {})
}

/// Evaluates P(f, g, h) as a q-series.
pub fn compose(
    p: &TernaryForm,
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
) -> Result<QExpansion, RelationError> {
    check_compatible(f, g, h)?;
    let mut acc: Option<QExpansion> = None;
    for (&[a, b, c], coeff) in p.coeffs() {
        let term =
            monomial_eval(f, g, h, (a, b, c))?.scale(&BigRational::from_integer(coeff.clone()));
        acc = Some(match acc {
            None => term,
            Some(x) => crate::qexp::qexp_add(&x, &term)?,
        });
    }
    Ok(acc.expect("forms are nonzero"))
}

/// True iff P(f, g, h) vanishes through the Sturm precision for weight
/// deg(P)·weight, which proves it vanishes identically.
pub fn verify_relation(
    p: &TernaryForm,
    f: &QExpansion,
    g: &QExpansion,
    h: &QExpansion,
) -> Result<bool, RelationError> {
    let rows = sturm_precision(f.level(), p.degree() as i64 * f.weight())? as i64;
    let (f, g, h) = truncate_triple(f, g, h, rows - 1);
    let composed = compose(p, &f, &g, &h)?;
    if composed.prec() < rows - 1 {
        return Err(RelationError::InsufficientPrecision {
            degree: p.degree(),
            needed: rows - 1,
            available: composed.prec(),
        });
    }
    Ok((0..rows).all(|n| composed.coeff(n).is_some_and(|c| c.is_zero())))
}

/// Q(λ, T) = P(1, λ, T).
pub fn dehomogenize(p: &TernaryForm) -> Result<BiPoly, RelationError> {
    let q = BiPoly::new(p.coeffs().iter().map(|(&[_, b, c], v)| ((b, c), v.clone())));
    if q.deg_t() == 0 {
        return Err(RelationError::ResultConstantInT);
    }
    Ok(q)
}

/// Minimal homogenization: P(x0, x1, x2) = x0^D Q(x1/x0, x2/x0) with D the
/// total degree of Q.
pub fn homogenize(q: &BiPoly) -> Result<TernaryForm, RelationError> {
    let d = q.total_degree();
    Ok(TernaryForm::new(
        q.coeffs()
            .iter()
            .map(|(&(i, k), v)| ([d - i - k, i, k], v.clone())),
    )?)
}

fn upoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Q̃(λ, T) = a_n(λ)^{n-1} Q(λ, T / a_n(λ)): the coefficient of T^i is
/// a_n^{n-1-i} a_i, so Q̃ is monic in T with integer coefficients.
pub fn monicize(q: &BiPoly) -> BiPoly {
    let n = q.deg_t();
    let lead = q.t_coeff(n);
    let mut a = vec![Vec::new(); n as usize + 1];
    a[n as usize] = vec![BigInt::one()];
    let mut lead_pow = vec![BigInt::one()];
    for i in (0..n).rev() {
        a[i as usize] = upoly_mul(&lead_pow, &q.t_coeff(i));
        lead_pow = upoly_mul(&lead_pow, &lead);
    }
    BiPoly::from_t_coeffs(&a)
}

/// Degree bookkeeping for a relation Q between g/f and h/f.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub deg_t: u32,
    /// Total degree of the homogenized relation.
    pub relation_degree: u32,
    pub l_bound: i64,
    /// relation_degree > l_bound / 2.
    pub birational: bool,
    /// Genus of X₀(N), which bounds [ℚ(X₀(N)) : ℚ(g/f)] when m = 2, the
    /// curve is not hyperelliptic and f, g vanish deepest at ∞.
    pub genus_bound: Option<u64>,
    /// [ℚ(X₀(N)) : ℚ(g/f)] when the data above pins it down.
    pub extension_degree: Option<u64>,
    /// Whether deg_T Q equals that extension degree.
    pub full_degree: Option<bool>,
}

/// Reports deg_T Q, the bounds on [ℚ(X₀(N)) : ℚ(g/f)] and the birationality
/// test for the map (f : g : h). `deepest_pair` states that f and g are the
/// two forms of largest vanishing order at ∞ in the weight-m space.
pub fn degree_report(
    q: &BiPoly,
    m: i64,
    inv: &CurveInvariants,
    deepest_pair: bool,
) -> Result<DegreeReport, RelationError> {
    let deg_t = q.deg_t();
    let relation_degree = q.total_degree();
    let lb = l_bound(inv.level, m)?;
    let birational = 2 * relation_degree as i64 > lb;
    let genus_bound = (m == 2 && inv.curve_type == CurveType::NonHyperelliptic && deepest_pair)
        .then_some(inv.genus);
    let extension_degree = if birational || genus_bound == Some(deg_t as u64) {
        Some(deg_t as u64)
    } else {
        None
    };
    Ok(DegreeReport {
        deg_t,
        relation_degree,
        l_bound: lb,
        birational,
        genus_bound,
        extension_degree,
        full_degree: extension_degree.map(|e| e == deg_t as u64),
    })
}

impl DegreeReport {
    /// Records an externally known [ℚ(X₀(N)) : ℚ(g/f)].
    pub fn with_extension_degree(mut self, e: u64) -> Self {
        self.extension_degree = Some(e);
        self.full_degree = Some(e == self.deg_t as u64);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicVerdict {
    /// The canonical image is a conic covered with degree two.
    DegreeTwo,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicReport {
    pub form: TernaryForm,
    pub genus: u64,
    /// Upper bound on 2·(map degree): 2(g-1) - (g-3) = g+1.
    pub degree_bound: u64,
    /// Even map degrees compatible with the bound.
    pub candidate_degrees: Vec<u64>,
    pub verdict: ConicVerdict,
}

/// For a weight-2 basis f_0, …, f_{g-1} with f_i vanishing to order i+1,
/// finds the relation between the three deepest forms and, for a conic,
/// bounds the degree of the map onto it.
pub fn hyperelliptic_conic(basis: &[QExpansion]) -> Result<ConicReport, RelationError> {
    let g = basis.len();
    if g < 3 {
        return Err(RelationError::TooFewForms(g));
    }
    let triple = &basis[g - 3..];
    let maxdeg = (g as u32).div_ceil(2).max(2);
    let form = find_relation(&triple[0], &triple[1], &triple[2], maxdeg)?;
    let found = basis
        .iter()
        .map(vanishing_order)
        .collect::<Result<Vec<_>, _>>()?;
    let expected: Vec<i64> = (1..=g as i64).collect();
    if found != expected {
        return Err(RelationError::WrongVanishingOrders { expected, found });
    }
    let genus = g as u64;
    let min_order = g as u64 - 2;
    let degree_bound = 2 * (genus - 1) - (min_order - 1);
    let candidate_degrees: Vec<u64> = if form.degree() == 2 {
        (1..)
            .map(|k| 2 * k)
            .take_while(|d| d * 2 <= degree_bound)
            .collect()
    } else {
        Vec::new()
    };
    let verdict = if candidate_degrees == [2] {
        ConicVerdict::DegreeTwo
    } else {
        ConicVerdict::Undetermined
    };
    Ok(ConicReport {
        form,
        genus,
        degree_bound,
        candidate_degrees,
        verdict,
    })
}

/// Coefficient map keyed by exponent tuples, for serialization.
pub fn form_terms(p: &TernaryForm) -> BTreeMap<String, String> {
    p.coeffs()
        .iter()
        .map(|(e, c)| (format!("{},{},{}", e[0], e[1], e[2]), c.to_string()))
        .collect()
}

/// Evaluates Q at integer points; helper for root-correspondence checks.
pub fn leading_t_coeff_at(q: &BiPoly, lambda: &BigInt) -> BigInt {
    q.t_coeff(q.deg_t())
        .iter()
        .enumerate()
        .map(|(i, c)| c * lambda.pow(i as u32))
        .sum()
}
