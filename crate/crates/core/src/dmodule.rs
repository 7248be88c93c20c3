//! Modules with a compatible derivation over `(B, δ)`.
//!
//! A module is presented as `Bᵖ / R` with basis names `e_1 … e_p` and a
//! connection matrix `C`: `δ_M(e_j) = Σ_i C[i][j]·e_i`, extended to all
//! elements by `δ_M(b·z) = δ(b)·z + b·δ_M(z)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::derivation::{Derivation, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, ModuleVector, MonomialOrder};
use crate::kernel::{
    kernel_generators_with, monomials_of_degree, GradedKernelReport, KernelGenerator, KernelOptions, PieceOutcome,
    WeightEntry, WeightSystem,
};
use crate::linalg::{nullspace, EchelonBasis, RationalMatrix};
use crate::par;
use crate::ring::{is_identifier, parse_poly, Monomial, Polynomial, Rational, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct DeltaModule {
    base: Derivation,
    basis: Arc<[String]>,
    connection: Vec<Vec<Polynomial>>,
    relations: Vec<ModuleVector>,
    groebner: GroebnerBasis,
}

impl fmt::Debug for DeltaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaModule({})", self.describe())
    }
}

/// Validates the data and builds the module.
///
/// Local nilpotency is accepted when some ordering of the basis makes the
/// connection strictly triangular; otherwise every `e_j` must be killed by a
/// power of `δ_M` (within [`DEFAULT_CAP`] steps) modulo the relations, which
/// suffices by the Leibniz rule.
pub fn make_module<S: AsRef<str>>(
    base: &Derivation,
    basis: &[S],
    connection: Vec<Vec<Polynomial>>,
    relations: Vec<ModuleVector>,
) -> Result<DeltaModule> {
    let ring = base.ring();
    let p = basis.len();
    let names: Vec<String> = basis.iter().map(|s| s.as_ref().to_string()).collect();
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) {
            return Err(Error::Input(format!("`{n}` is not a valid basis name")));
        }
        if names[..i].contains(n) {
            return Err(Error::DuplicateVariable(n.clone()));
        }
    }
    if connection.len() != p || connection.iter().any(|r| r.len() != p) {
        return Err(Error::DimensionMismatch(format!("connection must be {p} x {p}")));
    }
    if let Some(r) = relations.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch(format!("relation of length {} in rank {p}", r.len())));
    }
    if connection.iter().flatten().chain(relations.iter().flatten()).any(|q| q.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    let groebner = GroebnerBasis::compute(ring, p, &relations, MonomialOrder::Grevlex)?;
    let m = DeltaModule { base: base.clone(), basis: names.into(), connection, relations, groebner };
    if m.triangular_order().is_none() {
        for j in 0..p {
            let mut z = m.unit(j);
            let mut steps = 0;
            while !z.iter().all(Polynomial::is_zero) {
                if steps == DEFAULT_CAP {
                    return Err(Error::NotNilpotent(format!("{} not killed after {DEFAULT_CAP} steps", m.basis[j])));
                }
                z = m.apply_raw(&z);
                z = m.groebner.normal_form(&z);
                steps += 1;
            }
        }
    }
    for r in &m.relations {
        let img = m.groebner.normal_form(&m.apply_raw(r));
        if !img.iter().all(Polynomial::is_zero) {
            return Err(Error::NotWellDefined(format!("δ_M({}) reduces to {}, not 0", m.display(r), m.display(&img))));
        }
    }
    Ok(m)
}

impl DeltaModule {
    /// Free module with the given connection.
    pub fn free<S: AsRef<str>>(base: &Derivation, basis: &[S], connection: Vec<Vec<Polynomial>>) -> Result<Self> {
        make_module(base, basis, connection, Vec::new())
    }

    pub fn base(&self) -> &Derivation {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        self.base.ring()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn connection(&self) -> &[Vec<Polynomial>] {
        &self.connection
    }

    pub fn relations(&self) -> &[ModuleVector] {
        &self.relations
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.groebner
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn zero(&self) -> ModuleVector {
        vec![Polynomial::zero(self.ring()); self.rank()]
    }

    pub fn unit(&self, j: usize) -> ModuleVector {
        let mut v = self.zero();
        v[j] = Polynomial::one(self.ring());
        v
    }

    /// An order of the basis in which each `δ_M(e_j)` only involves earlier elements.
    pub fn triangular_order(&self) -> Option<Vec<usize>> {
        let p = self.rank();
        let mut placed = vec![false; p];
        let mut order = Vec::with_capacity(p);
        while order.len() < p {
            let next = (0..p).find(|&j| !placed[j] && (0..p).all(|i| self.connection[i][j].is_zero() || placed[i]))?;
            placed[next] = true;
            order.push(next);
        }
        Some(order)
    }

    fn apply_raw(&self, z: &[Polynomial]) -> ModuleVector {
        (0..self.rank())
            .map(|i| {
                let mut out = self.base.apply(&z[i]);
                for (j, zj) in z.iter().enumerate() {
                    if !zj.is_zero() && !self.connection[i][j].is_zero() {
                        out = &out + &(&self.connection[i][j] * zj);
                    }
                }
                out
            })
            .collect()
    }

    fn check(&self, z: &[Polynomial]) -> Result<()> {
        if z.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, module rank is {}",
                z.len(),
                self.rank()
            )));
        }
        if z.iter().any(|p| p.ring() != self.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// `δ_M(z)`, in normal form modulo the relations.
    pub fn apply(&self, z: &[Polynomial]) -> Result<ModuleVector> {
        self.check(z)?;
        Ok(self.groebner.normal_form(&self.apply_raw(z)))
    }

    pub fn normal_form(&self, z: &[Polynomial]) -> Result<ModuleVector> {
        self.check(z)?;
        Ok(self.groebner.normal_form(z))
    }

    /// Whether `z` is zero in the quotient.
    pub fn is_zero(&self, z: &[Polynomial]) -> Result<bool> {
        Ok(self.normal_form(z)?.iter().all(Polynomial::is_zero))
    }

    pub fn display<'a>(&'a self, z: &'a [Polynomial]) -> VectorDisplay<'a> {
        VectorDisplay { coeffs: z, names: &self.basis }
    }

    pub fn element(&self, z: ModuleVector) -> ModuleElement {
        ModuleElement { coeffs: z, names: self.basis.clone() }
    }

    /// Reads `x*e1 + y^2*e2`-style text: a polynomial in the base variables and
    /// the basis names that is linear in the latter.
    pub fn parse_element(&self, text: &str) -> Result<ModuleVector> {
        let ext = self.ring().extend(&self.basis)?;
        split_linear(&parse_poly(text, &ext)?, self.ring(), &self.basis)
    }

    /// One line per basis element: `d e2 -> x*e1`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = (0..self.rank())
            .map(|j| {
                let col: Vec<Polynomial> = (0..self.rank()).map(|i| self.connection[i][j].clone()).collect();
                format!("d {} -> {}", self.basis[j], self.display(&col))
            })
            .collect();
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.display(r).to_string()).collect();
            parts.push(format!("relations: {}", rels.join(", ")));
        }
        parts.join("; ")
    }
}

/// Reads `Σ p_k·e_k`, given as a polynomial over `base` extended by `names`, as a vector.
pub(crate) fn split_linear(p: &Polynomial, base: &Ring, names: &[String]) -> Result<ModuleVector> {
    let n = base.arity();
    let mut out = vec![Polynomial::zero(base); names.len()];
    for (m, c) in p.terms() {
        let e = m.exponents();
        let total: u32 = e[n..].iter().sum();
        if total != 1 {
            return Err(Error::Input(format!("`{p}` is not linear in the basis {}", names.join(", "))));
        }
        let k = e[n..].iter().position(|&x| x == 1).expect("one basis factor");
        let mono = Monomial::new(e[..n].to_vec());
        out[k] = &out[k] + &Polynomial::term(base, mono, c.clone());
    }
    Ok(out)
}

/// Text form of a module vector, e.g. `x*e1 - (y + 1)*e2`.
pub struct VectorDisplay<'a> {
    coeffs: &'a [Polynomial],
    names: &'a [String],
}

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, name) in self.coeffs.iter().zip(self.names) {
            if p.is_zero() {
                continue;
            }
            let (neg, body) = if p.len() == 1 {
                let s = p.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({p})"))
            };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if body == "1" {
                write!(f, "{sep}{name}")?;
            } else {
                write!(f, "{sep}{body}*{name}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Module vector bundled with its basis names, for reports.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleElement {
    pub coeffs: ModuleVector,
    names: Arc<[String]>,
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        VectorDisplay { coeffs: &self.coeffs, names: &self.names }.fmt(f)
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleElement({self})")
    }
}

impl Serialize for ModuleElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `Ω_{B/k}`: free on `dx_1 … dx_n` with `δ_M(db) = d(δb)`.
pub fn omega(d: &Derivation) -> DeltaModule {
    let ring = d.ring();
    let n = ring.arity();
    let names: Vec<String> = ring.names().iter().map(|x| format!("d{x}")).collect();
    let connection: Vec<Vec<Polynomial>> = (0..n).map(|i| (0..n).map(|j| d.image(j).partial(i)).collect()).collect();
    DeltaModule::free(d, &names, connection).expect("differentials of a triangular derivation are nilpotent")
}

/// `df = Σ ∂f/∂x_i · dx_i`.
pub fn differential(f: &Polynomial) -> ModuleVector {
    (0..f.ring().arity()).map(|i| f.partial(i)).collect()
}

fn require_free_pair(m: &DeltaModule, n: &DeltaModule) -> Result<()> {
    if !m.is_free() || !n.is_free() {
        return Err(Error::NonFree);
    }
    if m.base != n.base {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// `M ⊗ N` on the basis `a_b` (index `a·q + b`).
pub fn tensor(m: &DeltaModule, n: &DeltaModule) -> Result<DeltaModule> {
    require_free_pair(m, n)?;
    let (p, q) = (m.rank(), n.rank());
    let ring = m.ring();
    let mut t = vec![vec![Polynomial::zero(ring); p * q]; p * q];
    for a in 0..p {
        for b in 0..q {
            let col = a * q + b;
            for i in 0..p {
                let c = &m.connection[i][a];
                if !c.is_zero() {
                    t[i * q + b][col] = &t[i * q + b][col] + c;
                }
            }
            for k in 0..q {
                let c = &n.connection[k][b];
                if !c.is_zero() {
                    t[a * q + k][col] = &t[a * q + k][col] + c;
                }
            }
        }
    }
    let names: Vec<String> = m.basis.iter().flat_map(|a| n.basis.iter().map(move |b| format!("{a}_{b}"))).collect();
    DeltaModule::free(&m.base, &names, t)
}

/// `Hom(M, N)` on the basis `a_to_k` (the map sending `e_a` to `f_k` and the
/// other basis elements to 0; index `a·q + k`), with `δF = δ_N∘F − F∘δ_M`.
pub fn hom(m: &DeltaModule, n: &DeltaModule) -> Result<DeltaModule> {
    require_free_pair(m, n)?;
    let (p, q) = (m.rank(), n.rank());
    let ring = m.ring();
    let mut h = vec![vec![Polynomial::zero(ring); p * q]; p * q];
    for a in 0..p {
        for k in 0..q {
            let col = a * q + k;
            for l in 0..q {
                let d = &n.connection[l][k];
                if !d.is_zero() {
                    h[a * q + l][col] = &h[a * q + l][col] + d;
                }
            }
            for a2 in 0..p {
                let c = &m.connection[a][a2];
                if !c.is_zero() {
                    h[a2 * q + k][col] = &h[a2 * q + k][col] - c;
                }
            }
        }
    }
    let names: Vec<String> = m.basis.iter().flat_map(|a| n.basis.iter().map(move |k| format!("{a}_to_{k}"))).collect();
    DeltaModule::free(&m.base, &names, h)
}

/// The derivation of `B[e_1, …, e_p]` restricting to δ on `B` and to `δ_M` on the `e_j`.
pub fn sym_extend(m: &DeltaModule) -> Result<Derivation> {
    if !m.is_free() {
        return Err(Error::NonFree);
    }
    let ext = m.ring().extend(&m.basis)?;
    let n = m.ring().arity();
    let mut images = m.base.embed_prefix(&ext);
    for j in 0..m.rank() {
        let mut img = Polynomial::zero(&ext);
        for i in 0..m.rank() {
            let c = &m.connection[i][j];
            if !c.is_zero() {
                img = &img + &(&c.embed_prefix(&ext) * &Polynomial::var(&ext, n + i));
            }
        }
        images.push(img);
    }
    Derivation::new(&ext, images)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCheck {
    pub holds: bool,
    /// First generator whose image leaves the submodule, with that image.
    pub witness: Option<(ModuleElement, ModuleElement)>,
}

/// Whether the submodule generated by `gens` is stable under `δ_M`.
pub fn is_delta_submodule(m: &DeltaModule, gens: &[ModuleVector]) -> Result<DeltaCheck> {
    if !m.is_free() {
        return Err(Error::NonFree);
    }
    for g in gens {
        m.check(g)?;
    }
    let gb = GroebnerBasis::compute(m.ring(), m.rank(), gens, MonomialOrder::Grevlex)?;
    for g in gens {
        let img = m.apply_raw(g);
        if !gb.contains(&img) {
            return Ok(DeltaCheck { holds: false, witness: Some((m.element(g.clone()), m.element(img))) });
        }
    }
    Ok(DeltaCheck { holds: true, witness: None })
}

/// Weights of the basis elements, compatible with a weight system of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleGrading {
    pub weights: WeightSystem,
    pub basis_weights: Vec<Vec<i64>>,
}

impl ModuleGrading {
    /// Checks that the connection is homogeneous of the base shift and the relations are homogeneous.
    pub fn new(m: &DeltaModule, weights: WeightSystem, basis_weights: Vec<Vec<i64>>) -> Result<Self> {
        weights.validate(m.base())?;
        if basis_weights.len() != m.rank() || basis_weights.iter().any(|b| b.len() != weights.rank()) {
            return Err(Error::InvalidWeights(format!("need {} basis weights of length {}", m.rank(), weights.rank())));
        }
        let g = ModuleGrading { weights, basis_weights };
        for j in 0..m.rank() {
            let want: Vec<i64> = add(&g.basis_weights[j], g.weights.shift());
            for i in 0..m.rank() {
                for mono in m.connection[i][j].monomials() {
                    if g.term_weight(mono, i) != want {
                        return Err(Error::InvalidWeights(format!(
                            "connection entry for d {} is not homogeneous",
                            m.basis[j]
                        )));
                    }
                }
            }
        }
        for r in m.relations() {
            if g.vector_weight(r).is_none() {
                return Err(Error::InvalidWeights(format!("relation {} is not homogeneous", m.display(r))));
            }
        }
        Ok(g)
    }

    /// Solves the difference constraints imposed by the connection and the
    /// relations; each connected group of basis elements is shifted so that
    /// its lowest positive degree is 0.
    pub fn infer(m: &DeltaModule, weights: WeightSystem) -> Result<Self> {
        let p = m.rank();
        let g = weights.rank();
        // edges: b_to = b_from + offset
        let mut edges: Vec<Vec<(usize, Vec<i64>)>> = vec![Vec::new(); p];
        let mut link = |from: usize, to: usize, off: Vec<i64>| {
            edges[to].push((from, off.iter().map(|x| -x).collect()));
            edges[from].push((to, off));
        };
        for j in 0..p {
            for i in 0..p {
                for mono in m.connection[i][j].monomials() {
                    // wt(t) + b_i = b_j + shift
                    let off: Vec<i64> = weights.weight(mono).iter().zip(weights.shift()).map(|(a, s)| a - s).collect();
                    link(i, j, off);
                }
            }
        }
        for r in m.relations() {
            let terms: Vec<(usize, Vec<i64>)> = r
                .iter()
                .enumerate()
                .flat_map(|(k, q)| q.monomials().map(move |mono| (k, mono.clone())).collect::<Vec<_>>())
                .map(|(k, mono)| (k, weights.weight(&mono)))
                .collect();
            if let Some((k0, w0)) = terms.first().cloned() {
                for (k, w) in &terms[1..] {
                    // w0 + b_k0 = w + b_k
                    let off: Vec<i64> = w.iter().zip(&w0).map(|(a, b)| a - b).collect();
                    link(*k, k0, off);
                }
            }
        }
        let mut assigned: Vec<Option<Vec<i64>>> = vec![None; p];
        for start in 0..p {
            if assigned[start].is_some() {
                continue;
            }
            let mut component = vec![start];
            assigned[start] = Some(vec![0; g]);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let bu = assigned[u].clone().expect("assigned");
                for (v, off) in &edges[u] {
                    // b_v = b_u + off when the edge was stored from u
                    let want = add(&bu, off);
                    match &assigned[*v] {
                        None => {
                            assigned[*v] = Some(want);
                            component.push(*v);
                            queue.push_back(*v);
                        }
                        Some(b) if *b != want => {
                            return Err(Error::Inhomogeneous(format!("no consistent weight for {}", m.basis[*v])))
                        }
                        _ => {}
                    }
                }
            }
            let low = component
                .iter()
                .map(|&k| assigned[k].clone().expect("assigned"))
                .min_by_key(|b| weights.degree_of_weight(b))
                .expect("nonempty");
            for &k in &component {
                let b = assigned[k].take().expect("assigned");
                assigned[k] = Some(b.iter().zip(&low).map(|(x, y)| x - y).collect());
            }
        }
        let basis_weights = assigned.into_iter().map(|b| b.expect("assigned")).collect();
        Self::new(m, weights, basis_weights)
    }

    /// Natural grading of `Ω`: `wt(dx_i) = wt(x_i)`.
    pub fn omega(m: &DeltaModule, weights: WeightSystem) -> Result<Self> {
        let n = weights.arity();
        let bw = (0..n).map(|i| weights.weight(&Monomial::var(n, i))).collect();
        Self::new(m, weights, bw)
    }

    pub fn term_weight(&self, mono: &Monomial, k: usize) -> Vec<i64> {
        add(&self.weights.weight(mono), &self.basis_weights[k])
    }

    pub fn basis_degree(&self, k: usize) -> i64 {
        self.weights.degree_of_weight(&self.basis_weights[k])
    }

    /// Weight of a vector if all of its terms share one.
    pub fn vector_weight(&self, v: &[Polynomial]) -> Option<Vec<i64>> {
        let mut w: Option<Vec<i64>> = None;
        for (k, q) in v.iter().enumerate() {
            for mono in q.monomials() {
                let t = self.term_weight(mono, k);
                match &w {
                    None => w = Some(t),
                    Some(prev) if *prev != t => return None,
                    _ => {}
                }
            }
        }
        w
    }

    /// Weights for the symmetric extension `B[e_1 … e_p]`: the base rows with
    /// the basis weights appended, plus a final row counting the e-degree.
    pub fn extended_weights(&self) -> Result<WeightSystem> {
        let n = self.weights.arity();
        let p = self.basis_weights.len();
        let mut rows: Vec<Vec<i64>> = self
            .weights
            .rows()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut out = row.clone();
                out.extend(self.basis_weights.iter().map(|b| b[r]));
                out
            })
            .collect();
        let mut e_row = vec![0; n];
        e_row.extend(std::iter::repeat_n(1, p));
        rows.push(e_row);
        let mut shift = self.weights.shift().to_vec();
        shift.push(0);
        let mut combo = self.weights.positive_combination().to_vec();
        combo.push(1);
        WeightSystem::with_positive(rows, shift, combo)
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Standard terms `x^a·e_k` of one module weight, ordered by component and
/// then descending monomial.
fn module_piece(m: &DeltaModule, grading: &ModuleGrading, target: &[i64]) -> Vec<(usize, Monomial)> {
    let ws = &grading.weights;
    let mut out = Vec::new();
    for k in 0..m.rank() {
        let rest: Vec<i64> = target.iter().zip(&grading.basis_weights[k]).map(|(a, b)| a - b).collect();
        let degree = ws.degree_of_weight(&rest);
        for mono in monomials_of_degree(ws.positive_weights(), degree, usize::MAX).unwrap_or_default() {
            if ws.weight(&mono) == rest && m.groebner.is_standard(k, &mono) {
                out.push((k, mono));
            }
        }
    }
    out
}

fn piece_kernel(m: &DeltaModule, piece: &[(usize, Monomial)]) -> Vec<ModuleVector> {
    let ring = m.ring();
    let images: Vec<ModuleVector> = piece
        .iter()
        .map(|(k, mono)| {
            let mut z = m.zero();
            z[*k] = Polynomial::term(ring, mono.clone(), Rational::one());
            m.apply(&z).expect("well-formed element")
        })
        .collect();
    let mut index: BTreeMap<(usize, &Monomial), usize> = BTreeMap::new();
    for img in &images {
        for (k, q) in img.iter().enumerate() {
            for mono in q.monomials() {
                let next = index.len();
                index.entry((k, mono)).or_insert(next);
            }
        }
    }
    let mut mat = RationalMatrix::zeros(index.len(), piece.len());
    for (j, img) in images.iter().enumerate() {
        for (k, q) in img.iter().enumerate() {
            for (mono, c) in q.terms() {
                mat.set(index[&(k, mono)], j, c.clone());
            }
        }
    }
    nullspace(&mat)
        .into_iter()
        .map(|v| {
            let mut z = m.zero();
            for ((k, mono), c) in piece.iter().zip(v) {
                if !c.is_zero() {
                    z[*k] = &z[*k] + &Polynomial::term(ring, mono.clone(), c);
                }
            }
            z
        })
        .collect()
}

/// Basis of `(M_0)_w`, in normal form.
pub fn module_kernel_basis(m: &DeltaModule, grading: &ModuleGrading, target: &[i64]) -> Result<Vec<ModuleVector>> {
    if target.len() != grading.weights.rank() {
        return Err(Error::InvalidWeights("target has wrong length".into()));
    }
    Ok(piece_kernel(m, &module_piece(m, grading, target)))
}

type ModulePiece = (Vec<i64>, Vec<(usize, Monomial)>);

/// Pieces of `M` of one positive degree, grouped by weight.
fn module_pieces_of_degree(m: &DeltaModule, grading: &ModuleGrading, degree: i64) -> Vec<ModulePiece> {
    let ws = &grading.weights;
    let mut groups: BTreeMap<Vec<i64>, Vec<(usize, Monomial)>> = BTreeMap::new();
    for k in 0..m.rank() {
        let d = degree - grading.basis_degree(k);
        for mono in monomials_of_degree(ws.positive_weights(), d, usize::MAX).unwrap_or_default() {
            if m.groebner.is_standard(k, &mono) {
                groups.entry(grading.term_weight(&mono, k)).or_default().push((k, mono));
            }
        }
    }
    groups.into_iter().collect()
}

/// Truncated `M_0` up to positive degree `bound`. New generators at a weight are
/// the basis elements outside `Σ A_{w - wt(g)}·g` over earlier generators `g`,
/// with `A` computed to the same bound.
pub fn module_kernel_generators(
    m: &DeltaModule,
    grading: &ModuleGrading,
    bound: i64,
    opts: &KernelOptions,
) -> Result<GradedKernelReport<ModuleElement>> {
    let ring_report = kernel_generators_with(m.base(), &grading.weights, bound, opts)?;
    let ring_bases = ring_report.basis_map();
    let mut entries: Vec<WeightEntry<ModuleElement>> = Vec::new();
    let mut generators: Vec<KernelGenerator<ModuleVector>> = Vec::new();
    for degree in 0..=bound {
        let pieces = module_pieces_of_degree(m, grading, degree);
        let results = par::map(&pieces, opts.parallel, |(weight, piece)| {
            if piece.len() > opts.piece_limit {
                return (weight.clone(), piece.len(), None);
            }
            let basis = piece_kernel(m, piece);
            let index: HashMap<(usize, &Monomial), usize> =
                piece.iter().enumerate().map(|(i, (k, mono))| ((*k, mono), i)).collect();
            let coords = |z: &ModuleVector| {
                let mut v = vec![Rational::zero(); piece.len()];
                for (k, q) in z.iter().enumerate() {
                    for (mono, c) in q.terms() {
                        v[index[&(k, mono)]] = c.clone();
                    }
                }
                v
            };
            let mut span = EchelonBasis::new(piece.len());
            let mut incomplete = false;
            for g in &generators {
                let rest: Vec<i64> = weight.iter().zip(&g.weight).map(|(a, b)| a - b).collect();
                match ring_bases.get(&rest) {
                    Some(Some(lower)) => {
                        for a in lower {
                            let prod: ModuleVector = g.element.iter().map(|q| a * q).collect();
                            span.insert(&coords(&m.groebner.normal_form(&prod)));
                        }
                    }
                    Some(None) => incomplete = true,
                    None => {}
                }
            }
            let span_dim = span.rank();
            let new: Vec<ModuleVector> = basis.iter().filter(|b| span.insert(&coords(b))).cloned().collect();
            (weight.clone(), piece.len(), Some((basis, span_dim, new, incomplete)))
        });
        for (weight, size, res) in results {
            let outcome = match res {
                None => PieceOutcome::Skipped,
                Some((basis, span_dim, new, incomplete)) => {
                    for g in &new {
                        generators.push(KernelGenerator { weight: weight.clone(), degree, element: g.clone() });
                    }
                    PieceOutcome::Computed {
                        kernel_dim: basis.len(),
                        basis: basis.into_iter().map(|b| m.element(b)).collect(),
                        span_dim,
                        new_generators: new.into_iter().map(|b| m.element(b)).collect(),
                        span_incomplete: incomplete,
                    }
                }
            };
            entries.push(WeightEntry { weight, degree, piece_size: size, outcome });
        }
    }
    let mut report = GradedKernelReport {
        bound,
        weights: grading.weights.clone(),
        piece_limit: opts.piece_limit,
        entries,
        generators: generators
            .into_iter()
            .map(|g| KernelGenerator { weight: g.weight, degree: g.degree, element: m.element(g.element) })
            .collect(),
        notes: vec![format!(
            "coefficients from the invariant ring are only known up to degree {bound}; generators are relative to that truncation"
        )],
    };
    report.note_skipped();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn p(r: &Ring, s: &str) -> Polynomial {
        parse_poly(s, r).unwrap()
    }

    fn ex33() -> Derivation {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        Derivation::from_text(&r, &[("y", "x")]).unwrap()
    }

    #[test]
    fn quotient_by_square() {
        let d = ex33();
        let r = d.ring().clone();
        let m = make_module(&d, &["e"], vec![vec![Polynomial::zero(&r)]], vec![vec![p(&r, "x^2")]]).unwrap();
        let z = m.parse_element("x*y^2*e").unwrap();
        assert!(m.is_zero(&m.apply(&z).unwrap()).unwrap());
        assert_eq!(m.apply(&m.zero()).unwrap(), m.zero());
        let ws = WeightSystem::new(vec![vec![1, 1]], vec![0]).unwrap();
        let g = ModuleGrading::new(&m, ws, vec![vec![0]]).unwrap();
        for w in 1..=5 {
            assert_eq!(module_kernel_basis(&m, &g, &[w]).unwrap().len(), 1, "weight {w}");
        }
        let basis = module_kernel_basis(&m, &g, &[3]).unwrap();
        assert_eq!(m.display(&basis[0]).to_string(), "x*y^2*e");
    }

    #[test]
    fn swap_with_relation_rejected() {
        let d = ex33();
        let r = d.ring().clone();
        let (z, o) = (Polynomial::zero(&r), Polynomial::one(&r));
        let res = make_module(
            &d,
            &["e1", "e2"],
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
            vec![vec![o.clone(), z.clone()]],
        );
        assert!(matches!(res, Err(Error::NotWellDefined(_))));
        let free = DeltaModule::free(&d, &["e1", "e2"], vec![vec![z.clone(), o.clone()], vec![o, z]]);
        assert!(matches!(free, Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn omega_and_differential() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "1")]).unwrap();
        let om = omega(&d);
        assert_eq!(om.basis(), ["dx", "dy"]);
        assert!(om.apply(&om.unit(1)).unwrap().iter().all(Polynomial::is_zero));
        let df = differential(&p(&r, "x^2*y"));
        assert_eq!(om.display(&df).to_string(), "2*x*y*dx + x^2*dy");
        assert!(differential(&p(&r, "5")).iter().all(Polynomial::is_zero));
    }

    #[test]
    fn tensor_hom_and_sym() {
        let d = ex33();
        let r = d.ring().clone();
        let z = Polynomial::zero(&r);
        let m = DeltaModule::free(&d, &["e1", "e2"], vec![vec![z.clone(), p(&r, "x")], vec![z.clone(), z.clone()]])
            .unwrap();
        let t = tensor(&m, &m).unwrap();
        assert_eq!(t.basis(), ["e1_e1", "e1_e2", "e2_e1", "e2_e2"]);
        let img = t.apply(&t.unit(3)).unwrap();
        assert_eq!(t.display(&img).to_string(), "x*e1_e2 + x*e2_e1");

        let one = DeltaModule::free(&d, &["e"], vec![vec![z.clone()]]).unwrap();
        let h = hom(&one, &one).unwrap();
        assert!(h.apply(&h.unit(0)).unwrap()[0].is_zero());
        let hm = hom(&m, &m).unwrap();
        // identity map e1 ↦ e1, e2 ↦ e2 commutes with δ_M
        let mut id = hm.zero();
        id[0] = Polynomial::one(&r);
        id[3] = Polynomial::one(&r);
        assert!(hm.apply(&id).unwrap().iter().all(Polynomial::is_zero));

        let s = sym_extend(&m).unwrap();
        assert_eq!(s.to_string(), "x -> 0; y -> x; e1 -> 0; e2 -> x*e1");
        assert_eq!(
            sym_extend(&one).unwrap().image(2),
            &Polynomial::zero(s.ring()).embed_prefix(sym_extend(&one).unwrap().ring())
        );

        let q = make_module(&d, &["e"], vec![vec![z.clone()]], vec![vec![p(&r, "x^2")]]).unwrap();
        assert_eq!(tensor(&q, &one), Err(Error::NonFree));
        let other = DeltaModule::free(&Derivation::from_text(&r, &[]).unwrap(), &["e"], vec![vec![z]]).unwrap();
        assert_eq!(hom(&one, &other), Err(Error::BaseMismatch));
    }

    #[test]
    fn submodule_checks() {
        let d = ex33();
        let r = d.ring().clone();
        let z = Polynomial::zero(&r);
        let m = DeltaModule::free(&d, &["e1", "e2"], vec![vec![z.clone(), p(&r, "x")], vec![z.clone(), z]]).unwrap();
        assert!(is_delta_submodule(&m, &[m.unit(0)]).unwrap().holds);
        let bad = is_delta_submodule(&m, &[m.unit(1)]).unwrap();
        assert!(!bad.holds);
        let (g, img) = bad.witness.unwrap();
        assert_eq!((g.to_string(), img.to_string()), ("e2".into(), "x*e1".into()));
        assert!(is_delta_submodule(&m, &[m.unit(0), m.unit(1)]).unwrap().holds);
    }

    #[test]
    fn inferred_grading() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "x^2")]).unwrap();
        let z = Polynomial::zero(&r);
        let o = Polynomial::one(&r);
        let m = make_module(
            &d,
            &["e1", "e2"],
            vec![vec![z.clone(), o], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), p(&r, "y")], vec![p(&r, "y"), p(&r, "x^2")], vec![p(&r, "x^2"), z]],
        )
        .unwrap();
        let ws = WeightSystem::new(vec![vec![1, 2]], vec![0]).unwrap();
        let g = ModuleGrading::infer(&m, ws).unwrap();
        assert_eq!(g.basis_weights, vec![vec![0], vec![0]]);
        let rep = module_kernel_generators(&m, &g, 4, &KernelOptions::default()).unwrap();
        let gens: Vec<String> = rep.generators.iter().map(|g| g.element.to_string()).collect();
        assert_eq!(gens, ["e1", "x^2*e2"]);
        // with the full lattice the relations force wt(e2) = wt(e1) + (0, 1)
        let g = ModuleGrading::infer(&m, crate::kernel::infer_weights(&d).unwrap()).unwrap();
        assert_eq!(g.basis_weights, vec![vec![0, 0], vec![0, 1]]);
    }
}
