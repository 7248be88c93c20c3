//! Slow, direct reference implementations used only by tests.
//!
//! Nothing here shares code with `lnd-core`: polynomials are plain exponent
//! maps, ranks come from textbook Gaussian elimination over ℚ, and linear
//! feasibility is decided by enumerating vertices.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Nonzero rows of the reduced row echelon form, by Gauss–Jordan with rational pivots.
pub fn rref(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for j in 0..cols {
            a[r][j] = &a[r][j] / &pivot;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).len()
}

pub fn nullity(rows: &[Vec<Q>], cols: usize) -> usize {
    cols - rank(rows)
}

/// Solves a square system; `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in 0..=n {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// `Σ coeffs·u + constant`.
#[derive(Debug, Clone)]
pub struct Affine {
    pub coeffs: Vec<Q>,
    pub constant: Q,
}

impl Affine {
    pub fn eval(&self, u: &[Q]) -> Q {
        self.coeffs.iter().zip(u).fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }
}

/// Feasibility of `{eq = 0, ineq ≥ 0, |u_j| ≤ bound}` by trying every vertex
/// of the boxed polyhedron.
pub fn vertex_feasible(num_vars: usize, eqs: &[Affine], ineqs: &[Affine], bound: i64) -> Option<Vec<Q>> {
    let mut all: Vec<Affine> = Vec::new();
    for e in eqs {
        all.push(e.clone());
        all.push(Affine { coeffs: e.coeffs.iter().map(|c| -c).collect(), constant: -e.constant.clone() });
    }
    all.extend(ineqs.iter().cloned());
    for j in 0..num_vars {
        let mut c = vec![q(0); num_vars];
        c[j] = q(1);
        all.push(Affine { coeffs: c.clone(), constant: q(bound) });
        c[j] = q(-1);
        all.push(Affine { coeffs: c, constant: q(bound) });
    }
    let ok = |u: &[Q]| eqs.iter().all(|e| e.eval(u).is_zero()) && ineqs.iter().all(|c| !c.eval(u).is_negative());
    if num_vars == 0 {
        return ok(&[]).then(Vec::new);
    }
    let mut idx: Vec<usize> = (0..num_vars).collect();
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| all[i].coeffs.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| -all[i].constant.clone()).collect();
        if let Some(u) = solve(&a, &b) {
            if ok(&u) && u.iter().all(|x| x.abs() <= q(bound)) {
                return Some(u);
            }
        }
        // next combination
        let mut i = num_vars;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < all.len() - num_vars + i {
                idx[i] += 1;
                for k in i + 1..num_vars {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
        if idx[num_vars - 1] >= all.len() {
            return None;
        }
    }
}

/// Polynomial as a map from exponent vectors to coefficients.
pub type NPoly = BTreeMap<Vec<u32>, Q>;

pub fn add_into(acc: &mut NPoly, p: &NPoly, scale: &Q) {
    for (m, c) in p {
        let e = acc.entry(m.clone()).or_insert_with(Q::zero);
        *e += c * scale;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

pub fn mul(a: &NPoly, b: &NPoly) -> NPoly {
    let mut out = NPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let mut t = NPoly::new();
            t.insert(m, ca * cb);
            add_into(&mut out, &t, &Q::one());
        }
    }
    out
}

pub fn monomial(exps: &[u32]) -> NPoly {
    let mut p = NPoly::new();
    p.insert(exps.to_vec(), Q::one());
    p
}

/// `δ(x^a) = Σ_i a_i x^{a - e_i} δ(x_i)`.
pub fn derive(images: &[NPoly], p: &NPoly) -> NPoly {
    let mut out = NPoly::new();
    for (m, c) in p {
        for (i, &e) in m.iter().enumerate() {
            if e == 0 || images[i].is_empty() {
                continue;
            }
            let mut lower = m.clone();
            lower[i] -= 1;
            let t = mul(&monomial(&lower), &images[i]);
            add_into(&mut out, &t, &(c * q(e as i64)));
        }
    }
    out
}

/// Every exponent vector with total degree ≤ `max_degree`.
pub fn all_monomials(arity: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=max_degree - used {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn weight(rows: &[Vec<i64>], m: &[u32]) -> Vec<i64> {
    rows.iter().map(|r| r.iter().zip(m).map(|(w, &e)| w * e as i64).sum()).collect()
}

/// Dimension of the kernel of δ on the span of monomials of weight `target`,
/// searching exponent vectors up to total degree `max_degree`.
pub fn ring_kernel_dim(images: &[NPoly], rows: &[Vec<i64>], target: &[i64], max_degree: u32) -> (usize, usize) {
    let piece: Vec<Vec<u32>> =
        all_monomials(images.len(), max_degree).into_iter().filter(|m| weight(rows, m) == target).collect();
    let imgs: Vec<NPoly> = piece.iter().map(|m| derive(images, &monomial(m))).collect();
    (piece.len(), nullity(&transpose_columns(&imgs), piece.len()))
}

/// Builds the matrix whose columns are the coefficient vectors of `cols`.
fn transpose_columns(cols: &[NPoly]) -> Vec<Vec<Q>> {
    let keys: Vec<&Vec<u32>> = {
        let mut k: Vec<&Vec<u32>> = cols.iter().flat_map(|p| p.keys()).collect();
        k.sort();
        k.dedup();
        k
    };
    keys.iter().map(|m| cols.iter().map(|p| p.get(*m).cloned().unwrap_or_else(Q::zero)).collect()).collect()
}

/// Module element: one polynomial per basis vector.
pub type NVec = Vec<NPoly>;

/// Quotient-module data for the kernel oracle.
pub struct ModuleData {
    pub images: Vec<NPoly>,
    /// `connection[i][j]`: coefficient of `e_i` in `δ(e_j)`.
    pub connection: Vec<Vec<NPoly>>,
    pub relations: Vec<NVec>,
    pub var_weights: Vec<Vec<i64>>,
    pub basis_weights: Vec<Vec<i64>>,
    pub shift: Vec<i64>,
}

impl ModuleData {
    fn apply(&self, z: &NVec) -> NVec {
        let p = z.len();
        (0..p)
            .map(|i| {
                let mut out = derive(&self.images, &z[i]);
                for j in 0..p {
                    add_into(&mut out, &mul(&self.connection[i][j], &z[j]), &Q::one());
                }
                out
            })
            .collect()
    }

    /// Free-module monomial basis `x^a·e_k` of weight `w`, up to total degree `max_degree`.
    fn free_piece(&self, w: &[i64], max_degree: u32) -> Vec<(Vec<u32>, usize)> {
        let monos = all_monomials(self.images.len(), max_degree);
        let mut out = Vec::new();
        for k in 0..self.basis_weights.len() {
            for m in &monos {
                let mw: Vec<i64> =
                    weight(&self.var_weights, m).iter().zip(&self.basis_weights[k]).map(|(a, b)| a + b).collect();
                if mw == w {
                    out.push((m.clone(), k));
                }
            }
        }
        out
    }

    /// Span of `x^a·r` of weight `w` for the relations `r`.
    fn relation_piece(&self, w: &[i64], max_degree: u32) -> Vec<NVec> {
        let monos = all_monomials(self.images.len(), max_degree);
        let mut out = Vec::new();
        for r in &self.relations {
            let Some(rw) = self.vec_weight(r) else { continue };
            for m in &monos {
                let mw: Vec<i64> = weight(&self.var_weights, m).iter().zip(&rw).map(|(a, b)| a + b).collect();
                if mw == w {
                    out.push(r.iter().map(|c| mul(&monomial(m), c)).collect());
                }
            }
        }
        out
    }

    fn vec_weight(&self, v: &NVec) -> Option<Vec<i64>> {
        v.iter().enumerate().find_map(|(k, p)| {
            p.keys()
                .next()
                .map(|m| weight(&self.var_weights, m).iter().zip(&self.basis_weights[k]).map(|(a, b)| a + b).collect())
        })
    }

    /// `dim (M_0)_w` for `M = F/R`, computed as
    /// `dim F_w − rank[δF_w | R_{w+s}] + rank R_{w+s} − rank R_w`.
    pub fn kernel_dim(&self, w: &[i64], max_degree: u32) -> usize {
        let ws: Vec<i64> = w.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
        let free = self.free_piece(w, max_degree);
        let p = self.basis_weights.len();
        let images: Vec<NVec> = free
            .iter()
            .map(|(m, k)| {
                let mut z: NVec = vec![NPoly::new(); p];
                z[*k] = monomial(m);
                self.apply(&z)
            })
            .collect();
        let rel_w = self.relation_piece(w, max_degree);
        let rel_ws = self.relation_piece(&ws, max_degree);
        let mut stacked = images.clone();
        stacked.extend(rel_ws.iter().cloned());
        free.len() + vec_rank(&rel_ws) - vec_rank(&stacked) - vec_rank(&rel_w)
    }
}

fn vec_rank(vs: &[NVec]) -> usize {
    let flat: Vec<NPoly> = vs
        .iter()
        .map(|v| {
            let mut out = NPoly::new();
            for (k, p) in v.iter().enumerate() {
                for (m, c) in p {
                    let mut key = m.clone();
                    key.push(k as u32);
                    out.insert(key, c.clone());
                }
            }
            out
        })
        .collect();
    rank(&transpose_columns(&flat))
}
