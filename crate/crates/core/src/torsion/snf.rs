//! Smith normal form over `Z` by elimination with minimal-magnitude pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Invariant factors `d_1 | d_2 | ...` (length `min(rows, cols)`), and the
/// free rank of the cokernel `Z^cols / rowspace`, i.e. the zero diagonal
/// entries plus `cols - min(rows, cols)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    #[serde(serialize_with = "crate::bigser::big_vec")]
    pub diagonal: Vec<BigInt>,
    pub rank_free: usize,
}

impl SnfResult {
    /// Product of the nonzero invariant factors, i.e. the order of the torsion
    /// subgroup of the cokernel.
    pub fn torsion(&self) -> BigInt {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero())
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// `left * input * right = diag(snf.diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub snf: SnfResult,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SnfResult {
    Reducer::new(m, false).run().snf
}

pub fn smith_normal_form_with_transforms(m: &[Vec<BigInt>]) -> SnfDecomposition {
    Reducer::new(m, true).run()
}

/// Convenience for small integer input.
pub fn smith_normal_form_i64(m: &[Vec<i64>]) -> SnfResult {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    smith_normal_form(&big)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Reducer {
    fn new(m: &[Vec<BigInt>], transforms: bool) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
        Self {
            a: m.to_vec(),
            rows,
            cols,
            u: transforms.then(|| identity(rows)),
            v: transforms.then(|| identity(cols)),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in &mut self.a {
                r.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for r in v {
                    r.swap(i, j);
                }
            }
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for k in 0..self.cols {
            let delta = &self.a[j][k] * q;
            self.a[i][k] += delta;
        }
        if let Some(u) = &mut self.u {
            for k in 0..u[0].len() {
                let delta = &u[j][k] * q;
                u[i][k] += delta;
            }
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in &mut self.a {
            let delta = &r[j] * q;
            r[i] += delta;
        }
        if let Some(v) = &mut self.v {
            for r in v {
                let delta = &r[j] * q;
                r[i] += delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if self.a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(mut self) -> SnfDecomposition {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[i][t] / &self.a[t][t]);
                    self.add_row(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[t][j] / &self.a[t][t]);
                    self.add_col(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder now sits in row or column t
                    let mut best = (t, t);
                    for i in t..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility fix-up
                let piv = self.a[t][t].clone();
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&piv)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
        let diagonal: Vec<BigInt> = (0..n).map(|i| self.a[i][i].clone()).collect();
        let zeros = diagonal.iter().filter(|d| d.is_zero()).count();
        SnfDecomposition {
            snf: SnfResult {
                rank_free: zeros + (self.cols - n),
                diagonal,
            },
            left: self.u.unwrap_or_default(),
            right: self.v.unwrap_or_default(),
        }
    }
}
