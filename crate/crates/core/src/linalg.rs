//! Exact nullspaces of integer matrices by fraction-free Gauss–Jordan
//! elimination.
//!
//! Every intermediate entry is a minor of the input, so all divisions by the
//! previous pivot are exact and no rationals are needed. After the sweep all
//! pivot entries equal the last pivot `d`, and the kernel vector attached to a
//! free column `j` is read off as `x_j = d`, `x_{pivot(i)} = -M[i][j]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(data: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    /// Basis of the rational kernel `{x : Mx = 0}`, one primitive integer
    /// vector per free column, in increasing free-column order.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let mut m = self.data.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Largest-magnitude pivot in this column.
            let Some(p) = (r..self.rows)
                .filter(|&i| !m[i][c].is_zero())
                .max_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()).then(j.cmp(&i)))
            else {
                continue;
            };
            m.swap(r, p);
            let piv = m[r][c].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m[i][c].clone();
                for k in 0..self.cols {
                    let v = &piv * &m[i][k] - &factor * &m[r][k];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "inexact fraction-free step");
                    m[i][k] = q;
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        let d = prev;
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        for j in 0..self.cols {
            if pivot_iter.peek() == Some(&&j) {
                pivot_iter.next();
                continue;
            }
            let mut x = vec![BigInt::zero(); self.cols];
            x[j] = d.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[i][j].clone();
            }
            basis.push(primitive(x));
        }
        basis
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.data
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Divides out the content; the sign is left alone.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x = &*x / &g;
        }
    }
    v
}
