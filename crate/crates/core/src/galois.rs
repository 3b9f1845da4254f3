//! Galois groups of Q̃(λ, T) over ℚ(λ) from Frobenius cycle patterns of its
//! specializations Q̃(r, T) mod p.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::primes_up_to;
use crate::fppoly::{distinct_degree_factorization, is_squarefree, specialize_mod, FpError};
use crate::poly::BiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("no catalog for degree {0} (supported: 2..=5)")]
    UnsupportedDegree(usize),
    #[error("parts must be positive and nonempty")]
    BadPattern,
    #[error("pattern {pattern} does not have degree {degree}")]
    DegreeMismatch {
        pattern: CyclePattern,
        degree: usize,
    },
    #[error("observed patterns fit no transitive group of degree {0}")]
    EmptyCandidates(usize),
    #[error(transparent)]
    Specialization(#[from] FpError),
}

/// Cycle type of a permutation, parts sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CyclePattern(Vec<usize>);

impl CyclePattern {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, GaloisError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(GaloisError::BadPattern);
        }
        parts.sort_unstable();
        Ok(CyclePattern(parts))
    }

    pub fn identity(n: usize) -> Self {
        CyclePattern(vec![1; n])
    }

    /// Expands a distinct-degree factorization into factor degrees.
    pub fn from_ddf(ddf: &[(usize, usize)]) -> Self {
        let parts = ddf
            .iter()
            .flat_map(|&(d, c)| std::iter::repeat_n(d, c))
            .collect();
        CyclePattern::new(parts).expect("ddf of a nonconstant polynomial")
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_transposition(&self) -> bool {
        self.0.iter().filter(|&&x| x == 2).count() == 1 && self.0.iter().all(|&x| x <= 2)
    }

    pub fn is_full_cycle(&self) -> bool {
        self.0.len() == 1
    }

    /// Cycle type of σ^k for σ of this type: an ℓ-cycle splits into
    /// gcd(ℓ, k) cycles of length ℓ / gcd(ℓ, k).
    pub fn power(&self, k: usize) -> Self {
        let parts = self
            .0
            .iter()
            .flat_map(|&l| {
                let g = l.gcd(&k);
                std::iter::repeat_n(l / g, g)
            })
            .collect();
        CyclePattern::new(parts).expect("powers keep the degree")
    }

    /// Order of a permutation of this type.
    pub fn order(&self) -> usize {
        self.0.iter().fold(1, |acc, &l| acc.lcm(&l))
    }
}

impl TryFrom<Vec<usize>> for CyclePattern {
    type Error = GaloisError;
    fn try_from(v: Vec<usize>) -> Result<Self, GaloisError> {
        CyclePattern::new(v)
    }
}

impl From<CyclePattern> for Vec<usize> {
    fn from(c: CyclePattern) -> Vec<usize> {
        c.0
    }
}

impl fmt::Display for CyclePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// All partitions of `n` as cycle patterns.
pub fn partitions(n: usize) -> Vec<CyclePattern> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<CyclePattern>) {
        if n == 0 {
            out.push(CyclePattern::new(prefix.clone()).unwrap());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Permutation of {0, …, n-1} as its image list.
pub type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Cycle type of a permutation.
pub fn cycle_type(a: &Perm) -> CyclePattern {
    let mut seen = vec![false; a.len()];
    let mut parts = Vec::new();
    for i in 0..a.len() {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = a[j];
            len += 1;
        }
        if len > 0 {
            parts.push(len);
        }
    }
    CyclePattern::new(parts).expect("nonempty permutation")
}

/// Elements of the group generated by `gens`.
pub fn generate(n: usize, gens: &[Perm]) -> BTreeSet<Perm> {
    let id: Perm = (0..n).collect();
    let mut group = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    group
}

/// One conjugacy class of transitive subgroups of S(n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub name: String,
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<Perm>,
    pub patterns: BTreeSet<CyclePattern>,
}

fn entry(
    name: &str,
    degree: usize,
    order: usize,
    gens: &[&[usize]],
    patterns: &[&[usize]],
) -> GroupEntry {
    GroupEntry {
        name: name.to_string(),
        degree,
        order,
        generators: gens.iter().map(|g| g.to_vec()).collect(),
        patterns: patterns
            .iter()
            .map(|p| CyclePattern::new(p.to_vec()).unwrap())
            .collect(),
    }
}

/// Transitive subgroups of S(n) up to conjugacy, for 2 ≤ n ≤ 5.
pub fn transitive_catalog(n: usize) -> Result<Vec<GroupEntry>, GaloisError> {
    let cat = match n {
        2 => vec![entry("S(2)", 2, 2, &[&[1, 0]], &[&[1, 1], &[2]])],
        3 => vec![
            entry("C(3)", 3, 3, &[&[1, 2, 0]], &[&[1, 1, 1], &[3]]),
            entry(
                "S(3)",
                3,
                6,
                &[&[1, 2, 0], &[1, 0, 2]],
                &[&[1, 1, 1], &[1, 2], &[3]],
            ),
        ],
        4 => vec![
            entry(
                "C(4)",
                4,
                4,
                &[&[1, 2, 3, 0]],
                &[&[1, 1, 1, 1], &[2, 2], &[4]],
            ),
            entry(
                "E(4)",
                4,
                4,
                &[&[1, 0, 3, 2], &[2, 3, 0, 1]],
                &[&[1, 1, 1, 1], &[2, 2]],
            ),
            entry(
                "D(4)",
                4,
                8,
                &[&[1, 2, 3, 0], &[2, 1, 0, 3]],
                &[&[1, 1, 1, 1], &[1, 1, 2], &[2, 2], &[4]],
            ),
            entry(
                "A(4)",
                4,
                12,
                &[&[1, 2, 0, 3], &[1, 0, 3, 2]],
                &[&[1, 1, 1, 1], &[2, 2], &[1, 3]],
            ),
            entry(
                "S(4)",
                4,
                24,
                &[&[1, 2, 3, 0], &[1, 0, 2, 3]],
                &[&[1, 1, 1, 1], &[1, 1, 2], &[2, 2], &[1, 3], &[4]],
            ),
        ],
        5 => vec![
            entry("C(5)", 5, 5, &[&[1, 2, 3, 4, 0]], &[&[1, 1, 1, 1, 1], &[5]]),
            entry(
                "D(5)",
                5,
                10,
                &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]],
                &[&[1, 1, 1, 1, 1], &[1, 2, 2], &[5]],
            ),
            entry(
                "F(20)",
                5,
                20,
                &[&[1, 2, 3, 4, 0], &[0, 2, 4, 1, 3]],
                &[&[1, 1, 1, 1, 1], &[1, 2, 2], &[1, 4], &[5]],
            ),
            entry(
                "A(5)",
                5,
                60,
                &[&[1, 2, 0, 3, 4], &[1, 2, 3, 4, 0]],
                &[&[1, 1, 1, 1, 1], &[1, 1, 3], &[1, 2, 2], &[5]],
            ),
            entry(
                "S(5)",
                5,
                120,
                &[&[1, 2, 3, 4, 0], &[1, 0, 2, 3, 4]],
                &[
                    &[1, 1, 1, 1, 1],
                    &[1, 1, 1, 2],
                    &[1, 1, 3],
                    &[1, 2, 2],
                    &[1, 4],
                    &[2, 3],
                    &[5],
                ],
            ),
        ],
        _ => return Err(GaloisError::UnsupportedDegree(n)),
    };
    Ok(cat)
}

/// Closure of `observed` under σ ↦ σ^k.
pub fn pattern_power_closure(observed: &BTreeSet<CyclePattern>) -> BTreeSet<CyclePattern> {
    observed
        .iter()
        .flat_map(|c| (1..=c.order()).map(move |k| c.power(k)))
        .collect()
}

/// Patterns ruled out structurally for a given Q̃.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionRule {
    pub excluded: BTreeSet<CyclePattern>,
    pub reason: Option<String>,
}

impl ExclusionRule {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.excluded.is_empty()
    }
}

pub const EVEN_POLYNOMIAL_REASON: &str = "Q~ is even in T with nonzero constant term, so T -> -T \
     pairs the roots without fixed points and every odd cycle length occurs an even number of times";

/// When Q̃ is even in T and Q̃(λ, 0) ≠ 0, α ↦ −α is a fixed-point-free
/// involution on the roots commuting with the Galois action. Each cycle is
/// then either mapped to another cycle of the same length or to itself, the
/// latter only for even lengths, so odd parts come in pairs.
pub fn negation_exclusions(qt: &BiPoly) -> ExclusionRule {
    let constant_nonzero = qt.coeffs().keys().any(|&(_, k)| k == 0);
    if !qt.is_even_in_t() || !constant_nonzero {
        return ExclusionRule::none();
    }
    let n = qt.deg_t() as usize;
    let excluded: BTreeSet<CyclePattern> = partitions(n)
        .into_iter()
        .filter(|c| {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &x in c.parts() {
                *counts.entry(x).or_default() += 1;
            }
            counts.iter().any(|(&len, &m)| len % 2 == 1 && m % 2 == 1)
        })
        .collect();
    if excluded.is_empty() {
        return ExclusionRule::none();
    }
    ExclusionRule {
        excluded,
        reason: Some(EVEN_POLYNOMIAL_REASON.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub p: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_prime: u64,
    /// Every residue is tried for p up to this bound.
    pub exhaustive_up_to: u64,
    /// Residues drawn for larger p.
    pub residues_per_prime: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_prime: 200,
            exhaustive_up_to: 50,
            residues_per_prime: 64,
            seed: 0,
        }
    }
}

impl Budget {
    /// Residues tried for the prime `p`, ascending. For sampled primes the
    /// choice is a prefix of a seeded shuffle, so raising
    /// `residues_per_prime` only adds residues.
    pub fn residues(&self, p: u64) -> Vec<u64> {
        let mut all: Vec<u64> = (0..p).collect();
        if p <= self.exhaustive_up_to || self.residues_per_prime as u64 >= p {
            return all;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        all.shuffle(&mut rng);
        let mut chosen = all[..self.residues_per_prime].to_vec();
        chosen.sort_unstable();
        chosen
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleResult {
    /// Each observed pattern with its first witness.
    pub patterns: BTreeMap<CyclePattern, Witness>,
    /// First (p, r) with Q̃(r, T) mod p irreducible of full degree.
    pub irreducibility_witness: Option<Witness>,
    pub tried: usize,
    pub squarefree: usize,
}

/// Sweeps primes p ≤ budget.max_prime and residues r, recording the
/// factor-degree pattern of each squarefree Q̃(r, T) mod p.
pub fn sample_patterns(qt: &BiPoly, budget: &Budget) -> Result<SampleResult, GaloisError> {
    let n = qt.deg_t() as usize;
    let mut out = SampleResult::default();
    for p in primes_up_to(budget.max_prime) {
        for r in budget.residues(p) {
            out.tried += 1;
            let f = specialize_mod(qt, r as i64, p)?;
            if !is_squarefree(&f) {
                continue;
            }
            out.squarefree += 1;
            let pattern = CyclePattern::from_ddf(&distinct_degree_factorization(&f)?);
            let w = Witness { p, r };
            if pattern.parts() == [n] && out.irreducibility_witness.is_none() {
                out.irreducibility_witness = Some(w);
            }
            out.patterns.entry(pattern).or_insert(w);
        }
    }
    Ok(out)
}

/// Recomputes the pattern of Q̃(r, T) mod p, or `None` if not squarefree.
pub fn pattern_at(qt: &BiPoly, w: Witness) -> Result<Option<CyclePattern>, GaloisError> {
    let f = specialize_mod(qt, w.r as i64, w.p)?;
    if !is_squarefree(&f) {
        return Ok(None);
    }
    Ok(Some(CyclePattern::from_ddf(
        &distinct_degree_factorization(&f)?,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Prime degree n with an n-cycle and a transposition forces S(n).
    PrimeCycleTransposition,
    /// Candidates removed by the even-polynomial pattern exclusion.
    EvenPolynomialExclusion,
    /// Exactly one catalog group contains every observed pattern.
    UniqueContainment,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::PrimeCycleTransposition => "prime-cycle-transposition",
            Certificate::EvenPolynomialExclusion => "even-polynomial-exclusion",
            Certificate::UniqueContainment => "unique-containment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub group: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVerdict {
    pub degree: usize,
    /// Observed patterns closed under powers.
    pub observed: BTreeSet<CyclePattern>,
    pub excluded: BTreeSet<CyclePattern>,
    /// Catalog groups containing every observed pattern and no excluded one.
    pub candidates: Vec<String>,
    pub eliminated: Vec<Elimination>,
    pub identified: Option<String>,
    pub certificates: Vec<Certificate>,
}

/// Narrows the transitive groups of degree `n` to those whose cycle types
/// include every observed pattern and avoid every excluded one.
pub fn identify_group(
    n: usize,
    observed: &BTreeSet<CyclePattern>,
    exclusions: &ExclusionRule,
    catalog: &[GroupEntry],
) -> Result<GroupVerdict, GaloisError> {
    for c in observed.iter().chain(&exclusions.excluded) {
        if c.degree() != n {
            return Err(GaloisError::DegreeMismatch {
                pattern: c.clone(),
                degree: n,
            });
        }
    }
    let observed = pattern_power_closure(observed);
    let mut eliminated = Vec::new();
    let mut containing = Vec::new();
    for g in catalog.iter().filter(|g| g.degree == n) {
        match observed.iter().find(|c| !g.patterns.contains(c)) {
            Some(c) => eliminated.push(Elimination {
                group: g.name.clone(),
                reason: format!("no element of type {c}"),
            }),
            None => containing.push(g),
        }
    }
    if containing.is_empty() {
        return Err(GaloisError::EmptyCandidates(n));
    }
    let mut certificates = Vec::new();
    let mut candidates = Vec::new();
    for g in containing {
        match g.patterns.iter().find(|c| exclusions.excluded.contains(c)) {
            Some(c) => {
                eliminated.push(Elimination {
                    group: g.name.clone(),
                    reason: format!(
                        "contains type {c}, excluded: {}",
                        exclusions.reason.as_deref().unwrap_or("structural rule")
                    ),
                });
                if exclusions.reason.as_deref() == Some(EVEN_POLYNOMIAL_REASON)
                    && !certificates.contains(&Certificate::EvenPolynomialExclusion)
                {
                    certificates.push(Certificate::EvenPolynomialExclusion);
                }
            }
            None => candidates.push(g),
        }
    }
    if candidates.is_empty() {
        return Err(GaloisError::EmptyCandidates(n));
    }
    let n_cycle = CyclePattern::new(vec![n]).unwrap();
    if crate::arith::is_prime(n as u64)
        && observed.contains(&n_cycle)
        && observed.iter().any(CyclePattern::is_transposition)
    {
        certificates.push(Certificate::PrimeCycleTransposition);
    } else if candidates.len() == 1 && certificates.is_empty() {
        certificates.push(Certificate::UniqueContainment);
    }
    let identified = (candidates.len() == 1).then(|| candidates[0].name.clone());
    Ok(GroupVerdict {
        degree: n,
        observed,
        excluded: exclusions.excluded.clone(),
        candidates: candidates.iter().map(|g| g.name.clone()).collect(),
        eliminated,
        identified,
        certificates,
    })
}

/// Normal subgroups of the group generated by `gens`, as element sets.
pub fn normal_subgroups(n: usize, gens: &[Perm]) -> Vec<BTreeSet<Perm>> {
    let group = generate(n, gens);
    let elems: Vec<&Perm> = group.iter().collect();
    // Conjugacy classes.
    let mut classes: Vec<BTreeSet<Perm>> = Vec::new();
    let mut assigned = BTreeSet::new();
    for x in &elems {
        if assigned.contains(*x) {
            continue;
        }
        let class: BTreeSet<Perm> = elems
            .iter()
            .map(|g| compose(&compose(g, x), &invert(g)))
            .collect();
        assigned.extend(class.iter().cloned());
        classes.push(class);
    }
    let id: Perm = (0..n).collect();
    let (id_class, others): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| c.contains(&id));
    let mut out = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let mut set = id_class[0].clone();
        for (i, c) in others.iter().enumerate() {
            if mask & (1 << i) != 0 {
                set.extend(c.iter().cloned());
            }
        }
        if !group.len().is_multiple_of(set.len()) {
            continue;
        }
        let closed = set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(&compose(a, b))));
        if closed {
            out.push(set);
        }
    }
    out
}

/// Multiset of element orders of G/N.
fn quotient_order_profile(group: &BTreeSet<Perm>, normal: &BTreeSet<Perm>) -> Vec<usize> {
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let mut orders = Vec::new();
    for g in group {
        if seen.contains(g) {
            continue;
        }
        for h in normal {
            seen.insert(compose(g, h));
        }
        let mut k = 1;
        let mut x = g.clone();
        while !normal.contains(&x) {
            x = compose(&x, g);
            k += 1;
        }
        orders.push(k);
    }
    orders.sort_unstable();
    orders
}

fn order_profile(group: &BTreeSet<Perm>) -> Vec<usize> {
    quotient_order_profile(
        group,
        &BTreeSet::from([(0..group.iter().next().unwrap().len()).collect()]),
    )
}

/// Whether `big` has a normal subgroup with quotient isomorphic to `small`
/// (isomorphism tested by order statistics, which separate all groups of
/// order at most 5).
fn has_quotient(big: &GroupEntry, small: &GroupEntry) -> bool {
    if !big.order.is_multiple_of(small.order) {
        return false;
    }
    let g = generate(big.degree, &big.generators);
    let target = order_profile(&generate(small.degree, &small.generators));
    normal_subgroups(big.degree, &big.generators)
        .iter()
        .filter(|nsub| nsub.len() * small.order == big.order)
        .any(|nsub| quotient_order_profile(&g, nsub) == target)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub consistent: bool,
    /// Regular groups of the same degree that cannot be the Galois group of
    /// a degree-n stem field inside either splitting field.
    pub ruled_out: Vec<String>,
    pub notes: Vec<String>,
}

fn lookup(name: &str, degree: usize) -> Option<GroupEntry> {
    transitive_catalog(degree)
        .ok()?
        .into_iter()
        .find(|g| g.name == name)
}

/// Cross-checks two identified groups for the same (f, g). A group whose
/// order equals its degree acts regularly, so its stem field is Galois; if
/// that stem field lies inside the other splitting field, the other group
/// must map onto it.
pub fn quotient_consistency_check(a: &GroupVerdict, b: &GroupVerdict) -> QuotientReport {
    let mut notes = Vec::new();
    let (Some(an), Some(bn)) = (&a.identified, &b.identified) else {
        notes.push("both verdicts must be identified".to_string());
        return QuotientReport {
            consistent: false,
            ruled_out: vec![],
            notes,
        };
    };
    if a.degree != b.degree {
        notes.push("degrees differ; no constraint".to_string());
        return QuotientReport {
            consistent: true,
            ruled_out: vec![],
            notes,
        };
    }
    let n = a.degree;
    let ga = lookup(an, n).expect("identified groups come from the catalog");
    let gb = lookup(bn, n).expect("identified groups come from the catalog");
    let mut consistent = true;
    for (x, y) in [(&ga, &gb), (&gb, &ga)] {
        if x.order == n && !has_quotient(y, x) {
            consistent = false;
            notes.push(format!(
                "{} acts regularly but {} has no normal subgroup of order {} with quotient {}",
                x.name,
                y.name,
                y.order / n,
                x.name
            ));
        }
    }
    let mut ruled_out = Vec::new();
    for h in transitive_catalog(n).unwrap_or_default() {
        if h.order != n {
            continue;
        }
        let blockers: Vec<&str> = [&ga, &gb]
            .iter()
            .filter(|g| !has_quotient(g, &h))
            .map(|g| g.name.as_str())
            .collect();
        if !blockers.is_empty() {
            notes.push(format!(
                "{} is not a quotient of {}",
                h.name,
                blockers.join(", ")
            ));
            ruled_out.push(h.name);
        }
    }
    QuotientReport {
        consistent,
        ruled_out,
        notes,
    }
}

/// Two Q̃ for the same (f, g) whose roots both generate the full function
/// field have the same splitting field, hence the same Galois group. Returns
/// true when two such verdicts disagree.
pub fn closure_conflict(a: &GroupVerdict, b: &GroupVerdict) -> bool {
    matches!((&a.identified, &b.identified), (Some(x), Some(y)) if x != y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(p: &[usize]) -> CyclePattern {
        CyclePattern::new(p.to_vec()).unwrap()
    }

    fn set(ps: &[&[usize]]) -> BTreeSet<CyclePattern> {
        ps.iter().map(|p| pat(p)).collect()
    }

    #[test]
    fn powers_and_closure() {
        assert_eq!(pat(&[2, 3]).power(3), pat(&[1, 1, 1, 2]));
        assert_eq!(pat(&[2, 3]).power(2), pat(&[1, 1, 3]));
        assert_eq!(
            pattern_power_closure(&set(&[&[4]])),
            set(&[&[4], &[2, 2], &[1, 1, 1, 1]])
        );
        assert_eq!(
            pattern_power_closure(&set(&[&[1, 1, 1]])),
            set(&[&[1, 1, 1]])
        );
        let c = pattern_power_closure(&set(&[&[2, 3]]));
        assert!(c.contains(&pat(&[1, 1, 1, 2])) && c.contains(&pat(&[1, 1, 1, 1, 1])));
        assert_eq!(pattern_power_closure(&c), c);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn catalog_orders_match_generated_groups() {
        for n in 2..=5 {
            for g in transitive_catalog(n).unwrap() {
                assert_eq!(generate(n, &g.generators).len(), g.order, "{}", g.name);
            }
        }
        assert_eq!(
            transitive_catalog(6),
            Err(GaloisError::UnsupportedDegree(6))
        );
    }

    #[test]
    fn even_polynomial_rule() {
        let q = BiPoly::parse("T^4 - l^3(1 + 8 l^3) T^2 + l^9(1 + 7 l^3 - 8 l^6)").unwrap();
        let rule = negation_exclusions(&q);
        assert_eq!(rule.excluded, set(&[&[1, 3]]));
        let q63 = BiPoly::parse("T^5 - 2 T^4 + l^3 T^3 - l^6").unwrap();
        assert!(negation_exclusions(&q63).is_empty());
        // Zero constant term: T = 0 is a root fixed by negation.
        assert!(negation_exclusions(&BiPoly::parse("T^4 + l T^2").unwrap()).is_empty());
    }

    #[test]
    fn identification_examples() {
        let cat4 = transitive_catalog(4).unwrap();
        let none = ExclusionRule::none();
        let v = identify_group(4, &set(&[&[4], &[2, 2]]), &none, &cat4).unwrap();
        assert_eq!(v.candidates, vec!["C(4)", "D(4)", "S(4)"]);
        assert_eq!(v.identified, None);
        let even = ExclusionRule {
            excluded: set(&[&[1, 3]]),
            reason: Some(EVEN_POLYNOMIAL_REASON.to_string()),
        };
        let v = identify_group(4, &set(&[&[4], &[2, 2], &[1, 1, 2]]), &even, &cat4).unwrap();
        assert_eq!(v.identified.as_deref(), Some("D(4)"));
        assert!(v
            .certificates
            .contains(&Certificate::EvenPolynomialExclusion));
        let v = identify_group(4, &set(&[&[4], &[1, 3]]), &none, &cat4).unwrap();
        assert_eq!(v.identified.as_deref(), Some("S(4)"));
        let cat5 = transitive_catalog(5).unwrap();
        let v = identify_group(5, &set(&[&[5], &[2, 3]]), &none, &cat5).unwrap();
        assert_eq!(v.identified.as_deref(), Some("S(5)"));
        assert_eq!(v.certificates, vec![Certificate::PrimeCycleTransposition]);
        let cat2 = transitive_catalog(2).unwrap();
        let v = identify_group(2, &set(&[&[1, 1], &[2]]), &none, &cat2).unwrap();
        assert_eq!(v.identified.as_deref(), Some("S(2)"));
        let cat3 = transitive_catalog(3).unwrap();
        let v = identify_group(3, &set(&[&[3], &[1, 2]]), &none, &cat3).unwrap();
        assert_eq!(v.identified.as_deref(), Some("S(3)"));
        assert_eq!(
            identify_group(4, &set(&[&[1, 3]]), &even, &cat4),
            Err(GaloisError::EmptyCandidates(4))
        );
        assert!(matches!(
            identify_group(4, &set(&[&[5]]), &none, &cat4),
            Err(GaloisError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let s4 = lookup("S(4)", 4).unwrap();
        let mut orders: Vec<usize> = normal_subgroups(4, &s4.generators)
            .iter()
            .map(|s| s.len())
            .collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }

    fn verdict(name: &str) -> GroupVerdict {
        GroupVerdict {
            degree: 4,
            observed: BTreeSet::new(),
            excluded: BTreeSet::new(),
            candidates: vec![name.to_string()],
            eliminated: vec![],
            identified: Some(name.to_string()),
            certificates: vec![],
        }
    }

    #[test]
    fn quotient_checks() {
        let r = quotient_consistency_check(&verdict("D(4)"), &verdict("S(4)"));
        assert!(r.consistent);
        assert!(r.ruled_out.contains(&"C(4)".to_string()));
        assert!(r.ruled_out.contains(&"E(4)".to_string()));
        assert!(quotient_consistency_check(&verdict("D(4)"), &verdict("D(4)")).consistent);
        assert!(quotient_consistency_check(&verdict("C(4)"), &verdict("C(4)")).consistent);
        assert!(!quotient_consistency_check(&verdict("C(4)"), &verdict("S(4)")).consistent);
        assert!(closure_conflict(&verdict("D(4)"), &verdict("S(4)")));
        assert!(!closure_conflict(&verdict("D(4)"), &verdict("D(4)")));
    }

    #[test]
    fn budget_residues_are_monotone() {
        let small = Budget {
            residues_per_prime: 10,
            ..Budget::default()
        };
        let big = Budget {
            residues_per_prime: 40,
            ..Budget::default()
        };
        for p in [53, 101, 199] {
            let a = small.residues(p);
            let b = big.residues(p);
            assert_eq!(a.len(), 10);
            assert!(a.iter().all(|r| b.contains(r)));
        }
        assert_eq!(Budget::default().residues(47), (0..47).collect::<Vec<_>>());
    }
}
