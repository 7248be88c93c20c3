//! Dense exact linear algebra over ℚ.
//!
//! Row reduction runs fraction-free on integer rows (each row is first
//! cleared of denominators), keeping every intermediate entry a minor of
//! the input. Only the final normalization divides by the pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ring::Rational;

/// Row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix with an explicit column count, so that zero-row matrices keep their width.
    pub fn with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        RationalMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| integer_row(m.row(r))).collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        let (head, rest) = a.split_at_mut(r);
        let (prow, tail) = rest.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[c].clone();
            for j in 0..cols {
                if row[j].is_zero() && (f.is_zero() || prow[j].is_zero()) {
                    continue;
                }
                let mut v = &piv * &row[j];
                if !f.is_zero() {
                    v -= &f * &prow[j];
                }
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free step left a remainder");
                row[j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let mut out = RationalMatrix::zeros(rows, cols);
    for (i, &pc) in pivots.iter().enumerate() {
        let piv = a[i][pc].clone();
        for (j, v) in a[i].iter().enumerate() {
            if !v.is_zero() {
                out.set(i, j, Rational::new(v.clone(), piv.clone()));
            }
        }
    }
    (out, pivots)
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| if x.is_zero() { BigInt::zero() } else { x.numer() * (&l / x.denom()) }).collect()
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Kernel basis from the free columns of the reduced row echelon form:
/// one vector per free column `f`, with a 1 at `f` and zeros at the other free columns.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                let e = red.get(i, f);
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            v
        })
        .collect()
}

/// Incrementally built basis of a subspace of ℚⁿ, used for independence tests.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false (and leaves the basis unchanged) if `v` is already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push((p, w));
        true
    }
}
