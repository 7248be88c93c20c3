//! Buchberger's algorithm for submodules of a free module `Bᵖ`, with ideals
//! as the rank-one case.
//!
//! Module terms are compared position-over-term: a term in `e1` beats any
//! term in `e2`, and within one component the monomial order decides.

use std::cmp::Ordering;

use num_traits::One;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::ring::{same_ring, Monomial, Polynomial, Rational, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp_lex(b),
            MonomialOrder::Grevlex => a.cmp_grevlex(b),
        }
    }
}

/// Element of `Bᵖ`, one polynomial per basis vector.
pub type ModuleVector = Vec<Polynomial>;

/// Leading term `(component, monomial, coefficient)` of a vector.
pub fn leading_term(v: &[Polynomial], order: MonomialOrder) -> Option<(usize, Monomial, Rational)> {
    v.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(i, p)| {
        let (m, c) = lead(p, order).expect("nonzero");
        (i, m.clone(), c.clone())
    })
}

fn lead(p: &Polynomial, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
    match order {
        MonomialOrder::Grevlex => p.leading_term(),
        MonomialOrder::Lex => p.terms().max_by(|a, b| a.0.cmp_lex(b.0)),
    }
}

fn cmp_terms(order: MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    // smaller component index is the larger term
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

fn is_zero_vec(v: &[Polynomial]) -> bool {
    v.iter().all(Polynomial::is_zero)
}

fn sub_multiple(v: &mut [Polynomial], g: &[Polynomial], m: &Monomial, c: &Rational) {
    for (x, y) in v.iter_mut().zip(g) {
        if !y.is_zero() {
            *x = &*x - &y.mul_term(m, c);
        }
    }
}

fn scale_vec(v: &[Polynomial], m: &Monomial, c: &Rational) -> ModuleVector {
    v.iter().map(|p| p.mul_term(m, c)).collect()
}

/// Reduced Gröbner basis: every element monic, no term of an element divisible
/// by the leading term of another, sorted by descending leading term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    rank: usize,
    order: MonomialOrder,
    elements: Vec<ModuleVector>,
    leads: Vec<(usize, Monomial)>,
}

impl GroebnerBasis {
    pub fn compute(ring: &Ring, rank: usize, gens: &[ModuleVector], order: MonomialOrder) -> Result<Self> {
        for g in gens {
            if g.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in a module of rank {rank}",
                    g.len()
                )));
            }
            if g.iter().any(|p| !same_ring(p.ring(), ring)) {
                return Err(Error::RingMismatch);
            }
        }
        let mut basis: Vec<ModuleVector> = Vec::new();
        let mut leads: Vec<(usize, Monomial, Rational)> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let push = |v: ModuleVector,
                    basis: &mut Vec<ModuleVector>,
                    leads: &mut Vec<(usize, Monomial, Rational)>,
                    pairs: &mut Vec<(usize, usize)>| {
            let lt = leading_term(&v, order).expect("nonzero");
            let k = basis.len();
            for (i, l) in leads.iter().enumerate() {
                if l.0 == lt.0 {
                    pairs.push((i, k));
                }
            }
            basis.push(v);
            leads.push(lt);
        };
        for g in gens {
            let r = reduce(g, &basis, &leads, order, false);
            if !is_zero_vec(&r) {
                push(r, &mut basis, &mut leads, &mut pairs);
            }
        }
        while !pairs.is_empty() {
            let pos = (0..pairs.len())
                .min_by_key(|&k| {
                    let (i, j) = pairs[k];
                    (leads[i].1.lcm(&leads[j].1).degree(), i, j)
                })
                .expect("nonempty");
            let (i, j) = pairs.swap_remove(pos);
            let (li, lj) = (&leads[i], &leads[j]);
            if rank == 1 && li.1.is_coprime(&lj.1) {
                continue;
            }
            let l = li.1.lcm(&lj.1);
            let mut s = scale_vec(&basis[i], &li.1.quotient_of(&l).expect("divides"), &li.2.recip());
            sub_multiple(&mut s, &basis[j], &lj.1.quotient_of(&l).expect("divides"), &lj.2.recip());
            let r = reduce(&s, &basis, &leads, order, false);
            if !is_zero_vec(&r) {
                push(r, &mut basis, &mut leads, &mut pairs);
            }
        }
        // minimalize
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..basis.len() {
            let redundant = (0..basis.len()).any(|j| {
                j != i
                    && leads[j].0 == leads[i].0
                    && leads[j].1.divides(&leads[i].1)
                    && (leads[j].1 != leads[i].1 || j < i)
            });
            if !redundant {
                keep.push(i);
            }
        }
        let mut minimal: Vec<ModuleVector> = keep.iter().map(|&i| basis[i].clone()).collect();
        let mut min_leads: Vec<(usize, Monomial, Rational)> = keep.iter().map(|&i| leads[i].clone()).collect();
        // interreduce and normalize
        for k in 0..minimal.len() {
            let others: Vec<ModuleVector> =
                minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v.clone()).collect();
            let other_leads: Vec<(usize, Monomial, Rational)> =
                min_leads.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, l)| l.clone()).collect();
            let r = reduce(&minimal[k], &others, &other_leads, order, true);
            let lt = leading_term(&r, order).expect("minimal element stays nonzero");
            let inv = lt.2.recip();
            minimal[k] = r.iter().map(|p| p.scale(&inv)).collect();
            min_leads[k] = (lt.0, lt.1, Rational::one());
        }
        let mut paired: Vec<(ModuleVector, (usize, Monomial))> =
            minimal.into_iter().zip(min_leads).map(|(v, l)| (v, (l.0, l.1))).collect();
        paired.sort_by(|a, b| cmp_terms(order, (b.1 .0, &b.1 .1), (a.1 .0, &a.1 .1)));
        let (elements, leads) = paired.into_iter().unzip();
        Ok(GroebnerBasis { ring: ring.clone(), rank, order, elements, leads })
    }

    /// Gröbner basis of an ideal.
    pub fn ideal(ring: &Ring, gens: &[Polynomial], order: MonomialOrder) -> Result<Self> {
        let vecs: Vec<ModuleVector> = gens.iter().map(|g| vec![g.clone()]).collect();
        Self::compute(ring, 1, &vecs, order)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    pub fn leading_terms(&self) -> &[(usize, Monomial)] {
        &self.leads
    }

    /// True when the basis is the whole module.
    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|c| self.leads.iter().any(|l| l.0 == c && l.1.is_one()))
    }

    /// Unique remainder of `v` modulo the submodule.
    pub fn normal_form(&self, v: &[Polynomial]) -> ModuleVector {
        assert_eq!(v.len(), self.rank, "vector length does not match module rank");
        let leads: Vec<(usize, Monomial, Rational)> =
            self.leads.iter().map(|(c, m)| (*c, m.clone(), Rational::one())).collect();
        reduce(v, &self.elements, &leads, self.order, true)
    }

    pub fn ideal_normal_form(&self, p: &Polynomial) -> Polynomial {
        self.normal_form(std::slice::from_ref(p)).pop().expect("rank one")
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        is_zero_vec(&self.normal_form(v))
    }

    /// Whether `mono·e_comp` is a standard term (not divisible by a leading term).
    pub fn is_standard(&self, comp: usize, mono: &Monomial) -> bool {
        !self.leads.iter().any(|(c, m)| *c == comp && m.divides(mono))
    }
}

/// Outcome of a δ-stability check on an ideal.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdealCheck {
    pub holds: bool,
    /// First generator `g` with `δ(g)` outside the ideal, and `δ(g)`.
    pub witness: Option<(Polynomial, Polynomial)>,
}

/// Whether the ideal generated by `gens` is a δ-ideal. Checking the
/// generators suffices by the Leibniz rule.
pub fn is_delta_ideal(d: &Derivation, gens: &[Polynomial]) -> Result<IdealCheck> {
    let gb = GroebnerBasis::ideal(d.ring(), gens, MonomialOrder::Grevlex)?;
    for g in gens {
        let img = d.apply(g);
        if !gb.ideal_normal_form(&img).is_zero() {
            return Ok(IdealCheck { holds: false, witness: Some((g.clone(), img)) });
        }
    }
    Ok(IdealCheck { holds: true, witness: None })
}

/// Division of `v` by `basis`. With `full`, every term is reduced; otherwise
/// only leading terms.
fn reduce(
    v: &[Polynomial],
    basis: &[ModuleVector],
    leads: &[(usize, Monomial, Rational)],
    order: MonomialOrder,
    full: bool,
) -> ModuleVector {
    let mut p: ModuleVector = v.to_vec();
    let mut rem: ModuleVector = v.iter().map(|x| Polynomial::zero(x.ring())).collect();
    while let Some((c, m, coef)) = leading_term(&p, order) {
        let hit = leads.iter().position(|l| l.0 == c && l.1.divides(&m));
        match hit {
            Some(k) => {
                let q = leads[k].1.quotient_of(&m).expect("divides");
                let f = &coef / &leads[k].2;
                sub_multiple(&mut p, &basis[k], &q, &f);
            }
            None => {
                if !full {
                    for (x, y) in rem.iter_mut().zip(p) {
                        *x = &*x + &y;
                    }
                    return rem;
                }
                let t = Polynomial::term(p[c].ring(), m, coef);
                p[c] = &p[c] - &t;
                rem[c] = &rem[c] + &t;
            }
        }
    }
    rem
}
