#![allow(dead_code)]

use lnd_core::catalog::{self, Params};
use lnd_core::dmodule::omega;
use lnd_core::{DeltaModule, Derivation, Monomial, Polynomial, Rational, Ring};
use lnd_oracles::NPoly;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Seed shared by every property suite in this crate.
pub const SEED: u64 = 0x6c6e_6421;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Random polynomial with at most `terms` terms of total degree at most `deg`.
pub fn poly(ring: Ring, terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let n = ring.arity();
    prop::collection::vec((prop::collection::vec(0..=deg, n), -4i64..=4, 1i64..=3), 0..=terms).prop_map(move |ts| {
        Polynomial::from_terms(
            &ring,
            ts.into_iter().filter_map(|(mut e, a, b)| {
                let mut total: u32 = e.iter().sum();
                for x in e.iter_mut().rev() {
                    if total <= deg {
                        break;
                    }
                    let cut = (*x).min(total - deg);
                    *x -= cut;
                    total -= cut;
                }
                (a != 0).then(|| (Monomial::new(e), Rational::new(a.into(), b.into())))
            }),
        )
    })
}

pub fn nonzero_poly(ring: Ring, terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    poly(ring, terms.max(1), deg).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn to_npoly(p: &Polynomial) -> NPoly {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

fn params(kv: &[(&str, i64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Every derivation in the catalog at small parameters, including module bases.
pub fn catalog_derivations() -> Vec<(String, Derivation)> {
    let mut out = Vec::new();
    for (id, kv) in [
        ("roberts", vec![("n", 3), ("t", 2)]),
        ("cor63", vec![("n", 3), ("t", 2)]),
        ("freudenburg6", vec![]),
        ("df5", vec![]),
        ("ex33", vec![]),
        ("lem44", vec![("n", 2)]),
        ("thm52", vec![("n", 4)]),
        ("lem42", vec![]),
        ("lem43", vec![("q", 2)]),
    ] {
        let e = catalog::get(id, &params(&kv)).unwrap();
        out.push((id.to_string(), e.derivation().unwrap().clone()));
    }
    out
}

/// Catalog modules plus the differentials of a few catalog derivations.
pub fn catalog_modules() -> Vec<(String, DeltaModule)> {
    let mut out = vec![
        ("thm52".to_string(), catalog::thm52(4)),
        ("lem42".to_string(), catalog::lem42()),
        ("lem43".to_string(), catalog::lem43(2)),
    ];
    for (id, kv) in [("ex33", vec![]), ("df5", vec![]), ("roberts", vec![("n", 3), ("t", 2)])] {
        let e = catalog::get(id, &params(&kv)).unwrap();
        out.push((format!("omega({id})"), omega(e.derivation().unwrap())));
    }
    out
}

/// Rank of a list of polynomials as vectors over ℚ.
pub fn span_rank(polys: &[Polynomial]) -> usize {
    let rows: Vec<Vec<Rational>> = {
        let mut monos: Vec<&Monomial> = polys.iter().flat_map(|p| p.monomials()).collect();
        monos.sort();
        monos.dedup();
        polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect()
    };
    let q: Vec<Vec<lnd_oracles::Q>> = rows;
    lnd_oracles::rank(&q)
}
