//! Derivations of a polynomial ring, the exponential map `φ_t`, the
//! δ-degree, and kernel elements produced from slices and local slices.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{rational, same_ring, Monomial, Polynomial, Rational, Ring};

/// Iteration cap used when nilpotency has to be observed element by element.
pub const DEFAULT_CAP: usize = 512;

/// A k-derivation of a polynomial ring, given by the images of the variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    ring: Ring,
    images: Vec<Polynomial>,
}

/// δ-degree of an element: the t-degree of `φ_t(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaDegree {
    NegInfinity,
    Finite(usize),
    Exceeded,
}

impl DeltaDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            DeltaDegree::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for DeltaDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaDegree::NegInfinity => f.write_str("-inf"),
            DeltaDegree::Finite(n) => write!(f, "{n}"),
            DeltaDegree::Exceeded => f.write_str("exceeded cap"),
        }
    }
}

impl Derivation {
    pub fn new(ring: &Ring, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != ring.arity() {
            return Err(Error::DimensionMismatch(format!("{} images for {} variables", images.len(), ring.arity())));
        }
        if images.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Derivation { ring: ring.clone(), images })
    }

    /// Build from `(variable, image)` text pairs; variables not mentioned map to 0.
    pub fn from_text(ring: &Ring, images: &[(&str, &str)]) -> Result<Self> {
        let mut out = vec![None; ring.arity()];
        for (name, text) in images {
            let i = ring.require(name)?;
            if out[i].is_some() {
                return Err(Error::Input(format!("variable `{name}` given two images")));
            }
            out[i] = Some(crate::ring::parse_poly(text, ring)?);
        }
        let images = out.into_iter().map(|p| p.unwrap_or_else(|| Polynomial::zero(ring))).collect();
        Derivation::new(ring, images)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn image(&self, var: usize) -> &Polynomial {
        &self.images[var]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// `δ(f)`. Panics if `f` is not in this derivation's ring; see [`Derivation::try_apply`].
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.try_apply(f).expect("polynomial ring mismatch")
    }

    pub fn try_apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in f.terms() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 || self.images[i].is_zero() {
                    continue;
                }
                let mut rest = m.clone();
                rest.exponents_mut()[i] -= 1;
                let factor = c * rational(e as i64, 1);
                for (im, ic) in self.images[i].terms() {
                    out.add_term(rest.mul(im), &factor * ic);
                }
            }
        }
        Ok(out)
    }

    /// `δⁿ(f)`.
    pub fn iterate(&self, f: &Polynomial, n: usize) -> Polynomial {
        let mut g = f.clone();
        for _ in 0..n {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g);
        }
        g
    }

    /// `[f, δf, δ²f, …]` up to the last nonzero iterate.
    fn orbit(&self, f: &Polynomial, cap: usize) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        let mut g = f.clone();
        while !g.is_zero() {
            if out.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            let next = self.apply(&g);
            out.push(g);
            g = next;
        }
        Ok(out)
    }

    /// A variable order `v1, …, vn` with each `δ(v_i) ∈ k[v1, …, v_{i-1}]`, if one exists.
    /// Ties are broken by declaration order.
    pub fn triangular_order(&self) -> Option<Vec<usize>> {
        let n = self.ring.arity();
        let supports: Vec<Vec<usize>> = self.images.iter().map(Polynomial::support).collect();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n).find(|&i| !placed[i] && supports[i].iter().all(|&j| placed[j]))?;
            placed[next] = true;
            order.push(next);
        }
        Some(order)
    }

    /// Structural local-nilpotency certificate: the triangular order by variable name.
    pub fn is_locally_nilpotent_structural(&self) -> Option<Vec<String>> {
        self.triangular_order().map(|o| o.into_iter().map(|i| self.ring.name(i).to_string()).collect())
    }

    /// δ-degree `ν(f)`: the least `n` with `δ^{n+1}(f) = 0`.
    pub fn nu(&self, f: &Polynomial, cap: usize) -> DeltaDegree {
        if f.is_zero() {
            return DeltaDegree::NegInfinity;
        }
        let mut g = f.clone();
        for n in 0..cap {
            g = self.apply(&g);
            if g.is_zero() {
                return DeltaDegree::Finite(n);
            }
        }
        DeltaDegree::Exceeded
    }

    /// `φ_t(f) = Σ δ^i(f) t^i / i!` in the ring extended by a variable `t`.
    pub fn phi_t(&self, f: &Polynomial, cap: usize) -> Result<Polynomial> {
        self.phi_t_named(f, "t", cap)
    }

    pub fn phi_t_named(&self, f: &Polynomial, t: &str, cap: usize) -> Result<Polynomial> {
        let ext = self.ring.extend(&[t])?;
        let tvar = ext.arity() - 1;
        let mut out = Polynomial::zero(&ext);
        let mut fact = Rational::one();
        for (i, g) in self.orbit(f, cap)?.iter().enumerate() {
            if i > 0 {
                fact *= rational(i as i64, 1);
            }
            let mut tm = Monomial::one(ext.arity());
            tm.exponents_mut()[tvar] = i as u32;
            out = &out + &g.embed_prefix(&ext).mul_term(&tm, &fact.recip());
        }
        Ok(out)
    }

    /// `φ_{-u}(f) = Σ δ^i(f) (-u)^i / i!` for a slice `u`; the result lies in the kernel.
    pub fn phi_minus_u(&self, u: &Polynomial, f: &Polynomial) -> Result<Polynomial> {
        let du = self.try_apply(u)?;
        if !du.is_one() {
            return Err(Error::NotASlice(du.to_string()));
        }
        let minus_u = -u;
        let mut out = Polynomial::zero(&self.ring);
        let mut power = Polynomial::one(&self.ring);
        let mut fact = Rational::one();
        for (i, g) in self.orbit(f, DEFAULT_CAP)?.iter().enumerate() {
            if i > 0 {
                fact *= rational(i as i64, 1);
                power = &power * &minus_u;
            }
            out = &out + &(g * &power).scale(&fact.recip());
        }
        Ok(out)
    }

    /// Kernel elements of the extension of δ to `B[a⁻¹]`, `a = δ(u')`, obtained by
    /// applying `φ_{-u'/a}` to each generator.
    pub fn local_slice_kernel(&self, u_prime: &Polynomial, generators: &[Polynomial]) -> Result<Vec<LocalizedElement>> {
        let a = self.try_apply(u_prime)?;
        if a.is_zero() {
            return Err(Error::ZeroLocalSlice);
        }
        if !self.apply(&a).is_zero() {
            return Err(Error::NotInKernel(a.to_string()));
        }
        let minus_u = -u_prime;
        generators
            .iter()
            .map(|g| {
                let orbit = self.orbit(g, DEFAULT_CAP)?;
                let Some(top) = orbit.len().checked_sub(1) else {
                    return Ok(LocalizedElement::new(Polynomial::zero(&self.ring), a.clone(), 0));
                };
                let a_powers: Vec<Polynomial> =
                    std::iter::successors(Some(Polynomial::one(&self.ring)), |p| Some(p * &a)).take(top + 1).collect();
                let mut num = Polynomial::zero(&self.ring);
                let mut u_pow = Polynomial::one(&self.ring);
                let mut fact = Rational::one();
                for (i, gi) in orbit.iter().enumerate() {
                    if i > 0 {
                        fact *= rational(i as i64, 1);
                        u_pow = &u_pow * &minus_u;
                    }
                    let term = &(gi * &u_pow) * &a_powers[top - i];
                    num = &num + &term.scale(&fact.recip());
                }
                Ok(LocalizedElement::new(num, a.clone(), top as u32))
            })
            .collect()
    }

    /// Same derivation viewed in a larger ring whose variable list starts with ours.
    pub fn embed_prefix(&self, target: &Ring) -> Vec<Polynomial> {
        self.images.iter().map(|p| p.embed_prefix(target)).collect()
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation {{ {self} }}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", self.ring.name(i), img)?;
        }
        Ok(())
    }
}

/// `numerator / base^power` in `B[base⁻¹]`, where `base` is a kernel element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedElement {
    pub numerator: Polynomial,
    pub base: Polynomial,
    pub power: u32,
}

impl LocalizedElement {
    /// Divides out `base` from the numerator as long as the division is exact.
    pub fn new(numerator: Polynomial, base: Polynomial, power: u32) -> Self {
        let mut e = LocalizedElement { numerator, base, power };
        if e.numerator.is_zero() {
            e.power = 0;
        }
        while e.power > 0 {
            match e.numerator.div_exact(&e.base) {
                Some(q) => {
                    e.numerator = q;
                    e.power -= 1;
                }
                None => break,
            }
        }
        e
    }

    /// Multiply by `base^k`.
    pub fn mul_base_power(&self, k: u32) -> LocalizedElement {
        if k <= self.power {
            LocalizedElement::new(self.numerator.clone(), self.base.clone(), self.power - k)
        } else {
            let num = &self.numerator * &self.base.pow(k - self.power);
            LocalizedElement::new(num, self.base.clone(), 0)
        }
    }

    /// The extended derivation kills `n / a^k` iff it kills `n`, since `δ(a) = 0`.
    pub fn is_annihilated_by(&self, d: &Derivation) -> bool {
        d.apply(&self.numerator).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({})/({})", self.numerator, self.base),
            k => write!(f, "({})/({})^{k}", self.numerator, self.base),
        }
    }
}

/// `δ(f) = 0`.
pub fn in_kernel(d: &Derivation, f: &Polynomial) -> bool {
    d.apply(f).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, RingDescriptor};

    fn xy_lift() -> Derivation {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        Derivation::from_text(&r, &[("x", "0"), ("y", "x")]).unwrap()
    }

    fn p(d: &Derivation, s: &str) -> Polynomial {
        parse_poly(s, d.ring()).unwrap()
    }

    #[test]
    fn apply_follows_leibniz() {
        let d = xy_lift();
        assert_eq!(d.apply(&p(&d, "y^2")), p(&d, "2*x*y"));
        assert!(d.apply(&p(&d, "5")).is_zero());
    }

    #[test]
    fn iterates() {
        let d = xy_lift();
        assert!(d.iterate(&p(&d, "y"), 2).is_zero());
        assert_eq!(d.iterate(&p(&d, "y^2"), 2), p(&d, "2*x^2"));
        assert_eq!(d.iterate(&p(&d, "x*y + 3"), 0), p(&d, "x*y + 3"));
    }

    #[test]
    fn nu_values() {
        let d = xy_lift();
        assert_eq!(d.nu(&p(&d, "y"), DEFAULT_CAP), DeltaDegree::Finite(1));
        assert_eq!(d.nu(&p(&d, "y^2"), DEFAULT_CAP), DeltaDegree::Finite(2));
        assert_eq!(d.nu(&p(&d, "0"), DEFAULT_CAP), DeltaDegree::NegInfinity);
        assert_eq!(d.nu(&p(&d, "x^4"), DEFAULT_CAP), DeltaDegree::Finite(0));
    }

    #[test]
    fn swap_is_not_triangular_and_not_nilpotent() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("x", "y"), ("y", "x")]).unwrap();
        assert!(d.triangular_order().is_none());
        assert_eq!(d.nu(&p(&d, "x"), 50), DeltaDegree::Exceeded);
        assert!(matches!(d.phi_t(&p(&d, "x"), 50), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn phi_t_values() {
        let d = xy_lift();
        let ext = d.ring().extend(&["t"]).unwrap();
        let phi = d.phi_t(&p(&d, "y"), DEFAULT_CAP).unwrap();
        assert_eq!(phi, parse_poly("y + x*t", &ext).unwrap());
        let phi2 = d.phi_t(&p(&d, "y^2"), DEFAULT_CAP).unwrap();
        assert_eq!(phi2, parse_poly("(y + x*t)^2", &ext).unwrap());
        assert_eq!(phi2, parse_poly("y^2 + 2*x*y*t + x^2*t^2", &ext).unwrap());
        let phix = d.phi_t(&p(&d, "x^3"), DEFAULT_CAP).unwrap();
        assert_eq!(phix, parse_poly("x^3", &ext).unwrap());
    }

    #[test]
    fn phi_t_name_collision() {
        let r = RingDescriptor::new(&["x", "t"]).unwrap();
        let d = Derivation::from_text(&r, &[("t", "x")]).unwrap();
        assert_eq!(d.phi_t(&parse_poly("t", &r).unwrap(), DEFAULT_CAP), Err(Error::NameCollision("t".into())));
        assert!(d.phi_t_named(&parse_poly("t", &r).unwrap(), "s", DEFAULT_CAP).is_ok());
    }

    #[test]
    fn slice_kernel_generators() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "1")]).unwrap();
        let u = p(&d, "y");
        assert!(d.phi_minus_u(&u, &p(&d, "y")).unwrap().is_zero());
        assert_eq!(d.phi_minus_u(&u, &p(&d, "x")).unwrap(), p(&d, "x"));
        assert!(d.phi_minus_u(&u, &p(&d, "x*y^2")).unwrap().is_zero());
        assert_eq!(d.phi_minus_u(&u, &p(&d, "x*y^2 + x^2")).unwrap(), p(&d, "x^2"));
        assert!(matches!(d.phi_minus_u(&p(&d, "x"), &u), Err(Error::NotASlice(_))));
    }

    #[test]
    fn local_slice_on_three_variables() {
        let r = RingDescriptor::new(&["x", "y", "z"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "x"), ("z", "y")]).unwrap();
        let gens = vec![p(&d, "z"), p(&d, "x")];
        let out = d.local_slice_kernel(&p(&d, "y"), &gens).unwrap();
        assert_eq!(out[0].power, 1);
        assert_eq!(out[0].base, p(&d, "x"));
        assert_eq!(out[0].numerator.primitive(), p(&d, "2*x*z - y^2").primitive());
        assert!(out[0].is_annihilated_by(&d));
        assert_eq!(out[1], LocalizedElement::new(p(&d, "x"), p(&d, "x"), 0));
        let cleared = out[0].mul_base_power(1);
        assert_eq!(cleared.power, 0);
        assert_eq!(cleared.numerator.coefficient_in(1, 2), p(&d, "-1/2"));
    }

    #[test]
    fn local_slice_errors() {
        let r = RingDescriptor::new(&["x", "y", "z"]).unwrap();
        let d = Derivation::from_text(&r, &[("y", "x"), ("z", "y")]).unwrap();
        assert_eq!(d.local_slice_kernel(&p(&d, "x"), &[]), Err(Error::ZeroLocalSlice));
        assert!(matches!(d.local_slice_kernel(&p(&d, "z"), &[]), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn triangular_witness_order() {
        let r = RingDescriptor::new(&["x", "s", "t", "u", "v"]).unwrap();
        let d = Derivation::from_text(&r, &[("s", "x^3"), ("t", "s"), ("u", "t"), ("v", "x^2")]).unwrap();
        assert_eq!(d.is_locally_nilpotent_structural().unwrap(), vec!["x", "s", "t", "u", "v"]);
    }
}
