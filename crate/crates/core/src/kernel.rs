//! Graded truncations of the kernel `A = Ker δ`.
//!
//! A [`WeightSystem`] makes δ homogeneous, so the kernel splits into
//! finite-dimensional graded pieces; each piece is the nullspace of δ
//! restricted to the monomials of one weight. [`kernel_generators`] walks the
//! pieces by increasing positive degree and reports which kernel elements are
//! not reached by products of generators found earlier.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::kuroda::{fourier_motzkin, Constraint, LinearSystem};
use crate::linalg::{nullspace, rref, EchelonBasis, RationalMatrix};
use crate::par;
use crate::ring::{rational, Monomial, Polynomial, Rational, Ring};

/// Default cap on the number of monomials in a piece before it is skipped.
pub const DEFAULT_PIECE_LIMIT: usize = 20_000;

const MAX_POSITIVE_ENTRY: i64 = 1_000_000;

/// Integer multigrading `rows` (one row per ℤ-factor) under which the
/// derivation maps weight `w` to weight `w + shift`, together with a positive
/// combination of the rows used to bound enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSystem {
    rows: Vec<Vec<i64>>,
    shift: Vec<i64>,
    positive_combination: Vec<i64>,
    positive_weights: Vec<i64>,
}

impl WeightSystem {
    /// Builds a weight system and searches for a positive combination of its rows.
    pub fn new(rows: Vec<Vec<i64>>, shift: Vec<i64>) -> Result<Self> {
        check_shape(&rows, &shift)?;
        let combo = find_positive_combination(&rows, &shift).ok_or(Error::NoPositiveRow)?;
        Self::with_positive(rows, shift, combo)
    }

    pub fn with_positive(rows: Vec<Vec<i64>>, shift: Vec<i64>, combination: Vec<i64>) -> Result<Self> {
        check_shape(&rows, &shift)?;
        if combination.len() != rows.len() {
            return Err(Error::InvalidWeights("positive combination has wrong length".into()));
        }
        let n = rows.first().map_or(0, Vec::len);
        let positive_weights: Vec<i64> =
            (0..n).map(|j| rows.iter().zip(&combination).map(|(r, c)| r[j] * c).sum()).collect();
        if positive_weights.iter().any(|w| !(1..=MAX_POSITIVE_ENTRY).contains(w)) {
            return Err(Error::NoPositiveRow);
        }
        Ok(WeightSystem { rows, shift, positive_combination: combination, positive_weights })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// Number of grading rows.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn arity(&self) -> usize {
        self.positive_weights.len()
    }

    pub fn positive_combination(&self) -> &[i64] {
        &self.positive_combination
    }

    /// Per-variable weights of the positive combination; all entries are ≥ 1.
    pub fn positive_weights(&self) -> &[i64] {
        &self.positive_weights
    }

    pub fn weight(&self, m: &Monomial) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(m.exponents()).map(|(w, &e)| w * e as i64).sum()).collect()
    }

    pub fn degree(&self, m: &Monomial) -> i64 {
        self.positive_weights.iter().zip(m.exponents()).map(|(w, &e)| w * e as i64).sum()
    }

    /// Positive degree of a weight vector.
    pub fn degree_of_weight(&self, w: &[i64]) -> i64 {
        self.positive_combination.iter().zip(w).map(|(c, x)| c * x).sum()
    }

    /// Weight of `p` if all of its terms share one weight.
    pub fn homogeneous_weight(&self, p: &Polynomial) -> Option<Vec<i64>> {
        let mut w = None;
        for m in p.monomials() {
            let wm = self.weight(m);
            match &w {
                None => w = Some(wm),
                Some(prev) if *prev != wm => return None,
                _ => {}
            }
        }
        w
    }

    /// Checks that every nonzero image `δ(x_i)` is homogeneous of weight `wt(x_i) + shift`.
    pub fn validate(&self, d: &Derivation) -> Result<()> {
        if self.arity() != d.ring().arity() {
            return Err(Error::InvalidWeights(format!(
                "weights cover {} variables, ring has {}",
                self.arity(),
                d.ring().arity()
            )));
        }
        for (i, img) in d.images().iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let want: Vec<i64> =
                self.weight(&Monomial::var(self.arity(), i)).iter().zip(&self.shift).map(|(a, b)| a + b).collect();
            match self.homogeneous_weight(img) {
                Some(w) if w == want => {}
                _ => {
                    return Err(Error::InvalidWeights(format!(
                        "image of `{}` is not homogeneous of weight {:?}",
                        d.ring().name(i),
                        want
                    )))
                }
            }
        }
        Ok(())
    }
}

fn check_shape(rows: &[Vec<i64>], shift: &[i64]) -> Result<()> {
    if rows.len() != shift.len() {
        return Err(Error::InvalidWeights("one shift entry per row required".into()));
    }
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(Error::InvalidWeights("rows of different lengths".into()));
        }
    }
    Ok(())
}

fn find_positive_combination(rows: &[Vec<i64>], shift: &[i64]) -> Option<Vec<i64>> {
    let g = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let ok = |combo: &[i64]| {
        (0..n).all(|j| {
            let w: i64 = rows.iter().zip(combo).map(|(r, c)| r[j] * c).sum();
            (1..=MAX_POSITIVE_ENTRY).contains(&w)
        })
    };
    let zero_shift: Vec<i64> = shift.iter().map(|&s| (s == 0) as i64).collect();
    let all = vec![1i64; g];
    for combo in [&zero_shift, &all] {
        if ok(combo) {
            return Some(combo.clone());
        }
    }
    // Exact search for c with Σ c_i row_i ≥ 1 in every column.
    let constraints = (0..n)
        .map(|j| Constraint { coeffs: rows.iter().map(|r| rational(r[j], 1)).collect(), constant: rational(-1, 1) })
        .collect();
    let sys = LinearSystem { num_vars: g, equalities: Vec::new(), inequalities: constraints };
    let witness = fourier_motzkin(&sys).witness?;
    let l = witness.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let combo: Option<Vec<i64>> =
        witness.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i64()).collect();
    combo.filter(|c| ok(c))
}

/// Infers a weight system for `d`: a basis of all integer gradings making every
/// image homogeneous. Rows with zero shift come first (reduced echelon form,
/// scaled to primitive integers); at most one further row carries a nonzero shift.
pub fn infer_weights(d: &Derivation) -> Result<WeightSystem> {
    let n = d.ring().arity();
    // unknowns: w_0 … w_{n-1}, s
    let mut conditions: Vec<Vec<Rational>> = Vec::new();
    for (i, img) in d.images().iter().enumerate() {
        for m in img.monomials() {
            let mut row: Vec<Rational> = m.exponents().iter().map(|&e| rational(e as i64, 1)).collect();
            row[i] -= Rational::one();
            row.push(rational(-1, 1));
            if !conditions.contains(&row) {
                conditions.push(row);
            }
        }
    }
    let full = RationalMatrix::with_cols(n + 1, conditions.clone());
    let weights_only = RationalMatrix::with_cols(n, conditions.iter().map(|r| r[..n].to_vec()).collect());
    let zero_shift_space = nullspace(&weights_only);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut shift: Vec<i64> = Vec::new();
    if !zero_shift_space.is_empty() {
        let (red, pivots) = rref(&RationalMatrix::from_rows(zero_shift_space.clone()));
        for i in 0..pivots.len() {
            rows.push(primitive_integer(red.row(i)));
            shift.push(0);
        }
    }
    let full_space = nullspace(&full);
    if full_space.len() > zero_shift_space.len() {
        // Reorder to (s, w) so that the echelon form isolates one row with s = 1.
        let reordered: Vec<Vec<Rational>> =
            full_space.iter().map(|v| std::iter::once(v[n].clone()).chain(v[..n].iter().cloned()).collect()).collect();
        let (red, pivots) = rref(&RationalMatrix::from_rows(reordered));
        if pivots.first() == Some(&0) {
            // s = 1 in the echelon row; flip so that δ lowers this grading.
            let prim: Vec<i64> = primitive_integer(red.row(0)).iter().map(|x| -x).collect();
            if prim[1..].iter().any(|&x| x != 0) {
                rows.push(prim[1..].to_vec());
                shift.push(prim[0]);
            }
        }
    }
    for j in 0..n {
        if rows.iter().all(|r| r[j] == 0) {
            return Err(Error::Inhomogeneous(format!("every grading gives `{}` weight 0", d.ring().name(j))));
        }
    }
    WeightSystem::new(rows, shift)
}

fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let first_sign = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.iter()
        .map(|x| {
            let y = x / &g;
            let y = if first_sign { -y } else { y };
            y.to_i64().expect("weight entry fits in i64")
        })
        .collect()
}

/// All monomials of the given positive degree, in descending monomial order.
/// Returns `None` once more than `limit` monomials have been produced.
pub fn monomials_of_degree(positive: &[i64], degree: i64, limit: usize) -> Option<Vec<Monomial>> {
    fn rec(
        positive: &[i64],
        var: usize,
        remaining: i64,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
        limit: usize,
    ) -> bool {
        if var == positive.len() {
            if remaining == 0 {
                if out.len() >= limit {
                    return false;
                }
                out.push(Monomial::new(current.clone()));
            }
            return true;
        }
        let w = positive[var];
        let mut e = 0u32;
        while (e as i64) * w <= remaining {
            current[var] = e;
            if !rec(positive, var + 1, remaining - (e as i64) * w, current, out, limit) {
                return false;
            }
            e += 1;
        }
        current[var] = 0;
        true
    }
    if degree < 0 {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; positive.len()];
    if !rec(positive, 0, degree, &mut cur, &mut out, limit) {
        return None;
    }
    out.sort_by(|a, b| b.cmp(a));
    Some(out)
}

/// The monomials of weight `target`, in descending monomial order.
pub fn graded_piece(ring: &Ring, ws: &WeightSystem, target: &[i64]) -> Vec<Monomial> {
    assert_eq!(ring.arity(), ws.arity(), "weight system does not match ring");
    assert_eq!(target.len(), ws.rank(), "target has wrong length");
    let degree = ws.degree_of_weight(target);
    if degree < 0 {
        return Vec::new();
    }
    // rows without negative entries bound every partial weight from above
    let caps: Vec<(&[i64], i64)> = ws
        .rows()
        .iter()
        .zip(target)
        .filter(|(r, _)| r.iter().all(|&a| a >= 0))
        .map(|(r, &t)| (r.as_slice(), t))
        .collect();
    if caps.iter().any(|&(_, t)| t < 0) {
        return Vec::new();
    }
    struct Search<'a> {
        positive: &'a [i64],
        caps: &'a [(&'a [i64], i64)],
        ws: &'a WeightSystem,
        target: &'a [i64],
        out: Vec<Monomial>,
    }
    fn rec(s: &mut Search<'_>, var: usize, remaining: i64, used: &mut [i64], current: &mut Vec<u32>) {
        if var == s.positive.len() {
            if remaining == 0 {
                let m = Monomial::new(current.clone());
                if s.ws.weight(&m) == s.target {
                    s.out.push(m);
                }
            }
            return;
        }
        let w = s.positive[var];
        let mut e = 0u32;
        while (e as i64) * w <= remaining {
            current[var] = e;
            rec(s, var + 1, remaining - (e as i64) * w, used, current);
            let fits = s.caps.iter().zip(used.iter_mut()).fold(true, |ok, (&(row, t), u)| {
                *u += row[var];
                ok && *u <= t
            });
            e += 1;
            if !fits {
                break;
            }
        }
        for ((row, _), u) in s.caps.iter().zip(used.iter_mut()) {
            *u -= row[var] * e as i64;
        }
        current[var] = 0;
    }
    let mut s = Search { positive: ws.positive_weights(), caps: &caps, ws, target, out: Vec::new() };
    let mut used = vec![0i64; caps.len()];
    let mut cur = vec![0u32; ws.arity()];
    rec(&mut s, 0, degree, &mut used, &mut cur);
    s.out.sort_by(|a, b| b.cmp(a));
    s.out
}

/// Canonical basis of `{f ∈ piece : δ(f) = 0}`; one element per free column of
/// the reduced matrix of δ, columns ordered like `piece`.
pub(crate) fn piece_kernel(d: &Derivation, piece: &[Monomial]) -> Vec<Polynomial> {
    let ring = d.ring();
    let images: Vec<Polynomial> =
        piece.iter().map(|m| d.apply(&Polynomial::term(ring, m.clone(), Rational::one()))).collect();
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for img in &images {
        for m in img.monomials() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let mut mat = RationalMatrix::zeros(index.len(), piece.len());
    for (j, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            mat.set(index[m], j, c.clone());
        }
    }
    nullspace(&mat)
        .into_iter()
        .map(|v| Polynomial::from_terms(ring, piece.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())))
        .collect()
}

/// Basis of the kernel piece of weight `target`.
pub fn kernel_basis(d: &Derivation, ws: &WeightSystem, target: &[i64]) -> Vec<Polynomial> {
    let piece = graded_piece(d.ring(), ws, target);
    piece_kernel(d, &piece)
}

#[derive(Debug, Clone)]
pub struct KernelOptions {
    pub piece_limit: usize,
    pub parallel: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { piece_limit: DEFAULT_PIECE_LIMIT, parallel: true }
    }
}

/// What happened at one weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PieceOutcome<T = Polynomial> {
    Computed {
        kernel_dim: usize,
        basis: Vec<T>,
        span_dim: usize,
        new_generators: Vec<T>,
        /// Some lower piece needed for the span was skipped, so `span_dim` may be low.
        span_incomplete: bool,
    },
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightEntry<T = Polynomial> {
    pub weight: Vec<i64>,
    pub degree: i64,
    pub piece_size: usize,
    #[serde(flatten)]
    pub outcome: PieceOutcome<T>,
}

impl<T> WeightEntry<T> {
    pub fn basis(&self) -> &[T] {
        match &self.outcome {
            PieceOutcome::Computed { basis, .. } => basis,
            PieceOutcome::Skipped => &[],
        }
    }

    pub fn new_generators(&self) -> &[T] {
        match &self.outcome {
            PieceOutcome::Computed { new_generators, .. } => new_generators,
            PieceOutcome::Skipped => &[],
        }
    }

    pub fn kernel_dim(&self) -> Option<usize> {
        match &self.outcome {
            PieceOutcome::Computed { kernel_dim, .. } => Some(*kernel_dim),
            PieceOutcome::Skipped => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelGenerator<T> {
    pub weight: Vec<i64>,
    pub degree: i64,
    pub element: T,
}

/// Truncated kernel computation up to a positive-degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedKernelReport<T = Polynomial> {
    pub bound: i64,
    pub weights: WeightSystem,
    pub piece_limit: usize,
    pub entries: Vec<WeightEntry<T>>,
    pub generators: Vec<KernelGenerator<T>>,
    /// Caveats about what the truncation cannot see.
    pub notes: Vec<String>,
}

impl<T: Clone + PartialEq> GradedKernelReport<T> {
    pub fn entry(&self, weight: &[i64]) -> Option<&WeightEntry<T>> {
        self.entries.iter().find(|e| e.weight == weight)
    }

    /// Distinct weights at which new generators appeared.
    pub fn generator_weights(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for g in &self.generators {
            if out.last() != Some(&g.weight) {
                out.push(g.weight.clone());
            }
        }
        out
    }

    pub fn skipped(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome == PieceOutcome::Skipped).count()
    }

    pub(crate) fn note_skipped(&mut self) {
        let n = self.skipped();
        if n > 0 {
            self.notes.push(format!(
                "{n} piece(s) above {} monomials skipped; spans that need them are marked incomplete",
                self.piece_limit
            ));
        }
    }

    /// Every computed basis element, in report order.
    pub fn all_basis_elements(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries.iter().flat_map(|e| e.basis().iter())
    }

    /// Kernel bases by weight, for reuse by module computations.
    pub(crate) fn basis_map(&self) -> HashMap<Vec<i64>, Option<Vec<T>>> {
        self.entries
            .iter()
            .map(|e| {
                let b = match &e.outcome {
                    PieceOutcome::Computed { basis, .. } => Some(basis.clone()),
                    PieceOutcome::Skipped => None,
                };
                (e.weight.clone(), b)
            })
            .collect()
    }
}

/// Pieces of one positive degree, grouped by weight in lexicographic order.
pub(crate) fn pieces_of_degree(ws: &WeightSystem, degree: i64) -> Vec<(Vec<i64>, Vec<Monomial>)> {
    let monos = monomials_of_degree(ws.positive_weights(), degree, usize::MAX).unwrap_or_default();
    let mut groups: BTreeMap<Vec<i64>, Vec<Monomial>> = BTreeMap::new();
    for m in monos {
        groups.entry(ws.weight(&m)).or_default().push(m);
    }
    groups.into_iter().collect()
}

pub fn kernel_generators(d: &Derivation, ws: &WeightSystem, bound: i64) -> Result<GradedKernelReport> {
    kernel_generators_with(d, ws, bound, &KernelOptions::default())
}

pub fn kernel_generators_with(
    d: &Derivation,
    ws: &WeightSystem,
    bound: i64,
    opts: &KernelOptions,
) -> Result<GradedKernelReport> {
    ws.validate(d)?;
    let ring = d.ring();
    let mut entries = Vec::new();
    let mut generators: Vec<KernelGenerator<Polynomial>> = Vec::new();
    let mut bases: HashMap<Vec<i64>, Option<Vec<Polynomial>>> = HashMap::new();
    for degree in 0..=bound.max(-1) {
        let pieces = pieces_of_degree(ws, degree);
        let results = par::map(&pieces, opts.parallel, |(weight, monos)| {
            if monos.len() > opts.piece_limit {
                return WeightEntry {
                    weight: weight.clone(),
                    degree,
                    piece_size: monos.len(),
                    outcome: PieceOutcome::Skipped,
                };
            }
            let basis = piece_kernel(d, monos);
            let outcome = if degree == 0 {
                PieceOutcome::Computed {
                    kernel_dim: basis.len(),
                    span_dim: basis.len(),
                    basis,
                    new_generators: Vec::new(),
                    span_incomplete: false,
                }
            } else {
                let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut span = EchelonBasis::new(monos.len());
                let mut incomplete = false;
                for g in &generators {
                    let rest: Vec<i64> = weight.iter().zip(&g.weight).map(|(a, b)| a - b).collect();
                    match bases.get(&rest) {
                        Some(Some(lower)) => {
                            for f in lower {
                                span.insert(&coordinates(&(&g.element * f), &index));
                            }
                        }
                        Some(None) => incomplete = true,
                        None => {}
                    }
                }
                let span_dim = span.rank();
                let new_generators: Vec<Polynomial> =
                    basis.iter().filter(|b| span.insert(&coordinates(b, &index))).cloned().collect();
                PieceOutcome::Computed {
                    kernel_dim: basis.len(),
                    basis,
                    span_dim,
                    new_generators,
                    span_incomplete: incomplete,
                }
            };
            WeightEntry { weight: weight.clone(), degree, piece_size: monos.len(), outcome }
        });
        for entry in results {
            let basis = match &entry.outcome {
                PieceOutcome::Computed { basis, new_generators, .. } => {
                    for g in new_generators {
                        generators.push(KernelGenerator { weight: entry.weight.clone(), degree, element: g.clone() });
                    }
                    Some(basis.clone())
                }
                PieceOutcome::Skipped => None,
            };
            bases.insert(entry.weight.clone(), basis);
            entries.push(entry);
        }
    }
    debug_assert!(entries.iter().all(|e| e.basis().iter().all(|b| b.ring() == ring)));
    let mut report = GradedKernelReport {
        bound,
        weights: ws.clone(),
        piece_limit: opts.piece_limit,
        entries,
        generators,
        notes: Vec::new(),
    };
    report.note_skipped();
    Ok(report)
}

fn coordinates(p: &Polynomial, index: &HashMap<&Monomial, usize>) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); index.len()];
    for (m, c) in p.terms() {
        v[*index.get(m).expect("product lies in the piece")] = c.clone();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, RingDescriptor};

    fn ex33() -> Derivation {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        Derivation::from_text(&r, &[("y", "x")]).unwrap()
    }

    #[test]
    fn weights_for_simple_lift() {
        let ws = infer_weights(&ex33()).unwrap();
        assert_eq!(ws.rows()[0], vec![1, 1]);
        assert_eq!(ws.shift()[0], 0);
        // second grading: degree in y, lowered by one
        assert_eq!(ws.rows()[1], vec![0, 1]);
        assert_eq!(ws.shift()[1], -1);
        assert_eq!(ws.positive_weights(), &[1, 1]);
    }

    #[test]
    fn weights_for_five_variable_example() {
        let r = RingDescriptor::new(&["x", "s", "t", "u", "v"]).unwrap();
        let d = Derivation::from_text(&r, &[("s", "x^3"), ("t", "s"), ("u", "t"), ("v", "x^2")]).unwrap();
        let ws = infer_weights(&d).unwrap();
        assert_eq!(ws.rows()[0], vec![1, 3, 3, 3, 2]);
        assert_eq!(ws.shift()[0], 0);
        assert_eq!(ws.positive_weights(), &[1, 3, 3, 3, 2]);
        ws.validate(&d).unwrap();
    }

    #[test]
    fn slice_needs_shifted_row() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "1")]).unwrap();
        let ws = infer_weights(&d).unwrap();
        assert_eq!(ws.rows(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(ws.shift(), &[0, -1]);
        assert_eq!(kernel_basis(&d, &ws, &[2, 0]), vec![parse_poly("x^2", &r).unwrap()]);
        assert!(kernel_basis(&d, &ws, &[0, 1]).is_empty());
    }

    #[test]
    fn inhomogeneous_image_rejected() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "x + 1")]).unwrap();
        assert!(matches!(infer_weights(&d), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn quadratic_piece() {
        let d = ex33();
        let ws = WeightSystem::new(vec![vec![1, 1]], vec![0]).unwrap();
        let piece = graded_piece(d.ring(), &ws, &[2]);
        let names: Vec<String> = piece.iter().map(|m| m.display(d.ring()).to_string()).collect();
        assert_eq!(names, ["x^2", "x*y", "y^2"]);
        assert!(graded_piece(d.ring(), &ws, &[-1]).is_empty());
        assert_eq!(kernel_basis(&d, &ws, &[2]), vec![parse_poly("x^2", d.ring()).unwrap()]);
        assert_eq!(kernel_basis(&d, &ws, &[0]), vec![Polynomial::one(d.ring())]);
    }

    #[test]
    fn generators_of_polynomial_kernel() {
        let d = ex33();
        let ws = WeightSystem::new(vec![vec![1, 1]], vec![0]).unwrap();
        let report = kernel_generators(&d, &ws, 6).unwrap();
        assert_eq!(report.generators.len(), 1);
        assert_eq!(report.generators[0].element, parse_poly("x", d.ring()).unwrap());
        for e in &report.entries {
            assert_eq!(e.kernel_dim(), Some(1));
            if e.degree > 1 {
                assert!(e.new_generators().is_empty());
            }
        }
    }

    #[test]
    fn skipped_pieces_are_reported() {
        let d = ex33();
        let ws = WeightSystem::new(vec![vec![1, 1]], vec![0]).unwrap();
        let opts = KernelOptions { piece_limit: 3, parallel: false };
        let report = kernel_generators_with(&d, &ws, 4, &opts).unwrap();
        assert_eq!(report.skipped(), 2);
        let last = report.entries.last().unwrap();
        assert_eq!(last.outcome, PieceOutcome::Skipped);
        assert_eq!(last.piece_size, 5);
    }

    #[test]
    fn invalid_weight_system_rejected() {
        let d = ex33();
        let ws = WeightSystem::new(vec![vec![1, 2]], vec![0]).unwrap();
        assert!(matches!(ws.validate(&d), Err(Error::InvalidWeights(_))));
        assert!(matches!(WeightSystem::new(vec![vec![1, -1]], vec![0]), Err(Error::NoPositiveRow) | Ok(_)));
        assert_eq!(WeightSystem::new(vec![vec![0, 0]], vec![0]), Err(Error::NoPositiveRow));
    }
}
