//! Independent oracles used by the integration tests. Nothing here calls
//! into the library's own arithmetic.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Dense polynomial over F_p, low to high, no trailing zeros.
pub type Dense = Vec<u64>;

fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Quotient of `a` by the monic `m`, or None when `m` does not divide `a`.
pub fn exact_div(a: &Dense, m: &Dense, p: u64) -> Option<Dense> {
    let a = trim(a.clone());
    let dm = m.len() - 1;
    if a.len() < m.len() {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![0; a.len() - dm];
    for i in (0..q.len()).rev() {
        let c = r[i + dm];
        q[i] = c;
        for (j, &mj) in m.iter().enumerate() {
            r[i + j] = (r[i + j] + p * p - c * mj % p) % p;
        }
    }
    if r.iter().all(|&c| c == 0) {
        Some(trim(q))
    } else {
        None
    }
}

/// Every monic polynomial of degree `d` over F_p.
pub fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Dense> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(k % p);
            k /= p;
        }
        v.push(1);
        v
    })
}

/// Degrees of the irreducible factors of a monic `f`, with multiplicity,
/// found by trial division by every monic polynomial of each degree.
pub fn factor_degrees(f: &Dense, p: u64) -> Vec<usize> {
    let mut rest = trim(f.clone());
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            out.push(rest.len() - 1);
            break;
        }
        let mut found = false;
        for m in monic_of_degree(d, p) {
            if let Some(q) = exact_div(&rest, &m, p) {
                rest = q;
                out.push(d);
                found = true;
                break;
            }
        }
        if !found {
            d += 1;
        }
    }
    out.sort_unstable();
    out
}

/// True when no irreducible factor repeats.
pub fn is_squarefree(f: &Dense, p: u64) -> bool {
    let mut rest = trim(f.clone());
    let mut d = 1;
    while rest.len() > 1 && 2 * d < rest.len() {
        let mut found = false;
        for m in monic_of_degree(d, p) {
            if let Some(q) = exact_div(&rest, &m, p) {
                if exact_div(&q, &m, p).is_some() {
                    return false;
                }
                rest = q;
                found = true;
                break;
            }
        }
        if !found {
            d += 1;
        }
    }
    true
}

/// Value of f at x.
pub fn eval(f: &Dense, x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Roots of f in F_p by exhaustion.
pub fn roots(f: &Dense, p: u64) -> usize {
    (0..p).filter(|&x| eval(f, x, p) == 0).count()
}

pub fn inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Permutations on 0..n as image vectors.
pub type Perm = Vec<usize>;

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

/// Cycle lengths of a permutation, sorted.
pub fn cycle_lengths(a: &Perm) -> Vec<usize> {
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for s in 0..a.len() {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = a[i];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

/// Subgroup generated by `gens`, by closing under multiplication.
pub fn closure(n: usize, gens: &[Perm]) -> BTreeSet<Perm> {
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

pub fn is_transitive(n: usize, group: &BTreeSet<Perm>) -> bool {
    let orbit: BTreeSet<usize> = group.iter().map(|g| g[0]).collect();
    orbit.len() == n
}

/// (order, set of cycle types) for each transitive subgroup of S_n up to
/// conjugacy. Every subgroup of S_n for n ≤ 5 is generated by two
/// elements, and the first may be taken from a set of class
/// representatives.
pub fn transitive_signatures(n: usize) -> BTreeSet<(usize, BTreeSet<Vec<usize>>)> {
    let perms = all_perms(n);
    let mut reps: Vec<Perm> = Vec::new();
    let mut types = BTreeSet::new();
    for p in &perms {
        if types.insert(cycle_lengths(p)) {
            reps.push(p.clone());
        }
    }
    let mut out = BTreeSet::new();
    for a in &reps {
        for b in &perms {
            let g = closure(n, &[a.clone(), b.clone()]);
            if is_transitive(n, &g) {
                let pats = g.iter().map(cycle_lengths).collect();
                out.insert((g.len(), pats));
            }
        }
    }
    out
}

/// Partitions of n as sorted part lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    all_perms(n)
        .iter()
        .map(cycle_lengths)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
