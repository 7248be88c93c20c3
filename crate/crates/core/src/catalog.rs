//! Named example derivations, modules and exponent data.

use std::collections::BTreeMap;

use crate::derivation::Derivation;
use crate::dmodule::{make_module, DeltaModule};
use crate::error::{Error, Result};
use crate::kuroda::ExponentData;
use crate::ring::{parse_poly, Polynomial, RingDescriptor};

pub type Params = BTreeMap<String, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Derivation(Derivation),
    Module(DeltaModule),
    Exponents(ExponentData),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub params: Params,
    pub payload: Payload,
}

impl CatalogEntry {
    /// The derivation, or the base derivation of a module.
    pub fn derivation(&self) -> Option<&Derivation> {
        match &self.payload {
            Payload::Derivation(d) => Some(d),
            Payload::Module(m) => Some(m.base()),
            Payload::Exponents(_) => None,
        }
    }

    pub fn module(&self) -> Option<&DeltaModule> {
        match &self.payload {
            Payload::Module(m) => Some(m),
            _ => None,
        }
    }

    pub fn exponents(&self) -> Option<&ExponentData> {
        match &self.payload {
            Payload::Exponents(e) => Some(e),
            _ => None,
        }
    }
}

/// Catalog id, parameters with their minimum values, and a one-line summary.
pub type EntrySpec = (&'static str, &'static [(&'static str, i64)], &'static str);

pub const ENTRIES: &[EntrySpec] = &[
    ("roberts", &[("n", 3), ("t", 2)], "y_i -> x_i^(t+1), y_(n+1) -> (x1...xn)^t"),
    ("thm52", &[("n", 4)], "rank-2 module over y_i -> x_i^2 with d e2 -> x1...xn*e1"),
    ("cor63", &[("n", 3), ("t", 2)], "symmetric extension of the differentials of roberts(n, t)"),
    ("freudenburg6", &[], "s -> x^3, t -> y^3*s, u -> y^3*t, v -> x^2*y^2"),
    ("df5", &[], "s -> x^3, t -> s, u -> t, v -> x^2"),
    ("ex33", &[], "y -> x on k[x, y]"),
    ("lem42", &[], "k[x, y]/(x^2) over y -> x"),
    ("lem43", &[("q", 1)], "rank-2 quotient over y -> x^q with d e2 -> e1"),
    ("lem44", &[("n", 1)], "y -> x, z -> y^n on k[x, y, z]"),
    ("thm52data", &[("n", 4)], "exponent data of the symmetric extension of thm52(n)"),
];

const MAX_PARAM: i64 = 64;

fn check_params(id: &str, params: &Params) -> Result<Vec<i64>> {
    let (_, spec, _) =
        ENTRIES.iter().find(|(name, _, _)| *name == id).ok_or_else(|| Error::UnknownCatalogId(id.to_string()))?;
    if let Some(extra) = params.keys().find(|k| !spec.iter().any(|(n, _)| n == k)) {
        return Err(Error::Parameter { name: extra.clone(), message: format!("`{id}` takes no such parameter") });
    }
    spec.iter()
        .map(|(name, min)| {
            let v = *params
                .get(*name)
                .ok_or_else(|| Error::Parameter { name: name.to_string(), message: format!("required by `{id}`") })?;
            if v < *min || v > MAX_PARAM {
                return Err(Error::Parameter {
                    name: name.to_string(),
                    message: format!("{name} >= {min} required (and at most {MAX_PARAM}), got {v}"),
                });
            }
            Ok(v)
        })
        .collect()
}

pub fn get(id: &str, params: &Params) -> Result<CatalogEntry> {
    let v = check_params(id, params)?;
    let payload = match id {
        "roberts" => Payload::Derivation(roberts(v[0] as usize, v[1] as u32)),
        "thm52" => Payload::Module(thm52(v[0] as usize)),
        "cor63" => Payload::Derivation(cor63(v[0] as usize, v[1] as u32)),
        "freudenburg6" => Payload::Derivation(text_derivation(
            &["x", "y", "s", "t", "u", "v"],
            &[("s", "x^3"), ("t", "y^3*s"), ("u", "y^3*t"), ("v", "x^2*y^2")],
        )),
        "df5" => Payload::Derivation(text_derivation(
            &["x", "s", "t", "u", "v"],
            &[("s", "x^3"), ("t", "s"), ("u", "t"), ("v", "x^2")],
        )),
        "ex33" => Payload::Derivation(text_derivation(&["x", "y"], &[("y", "x")])),
        "lem42" => Payload::Module(lem42()),
        "lem43" => Payload::Module(lem43(v[0] as u32)),
        "lem44" => Payload::Derivation(text_derivation(&["x", "y", "z"], &[("y", "x"), ("z", &format!("y^{}", v[0]))])),
        "thm52data" => Payload::Exponents(thm52data(v[0] as usize)),
        _ => unreachable!("checked above"),
    };
    Ok(CatalogEntry { id: id.to_string(), params: params.clone(), payload })
}

fn text_derivation(vars: &[&str], images: &[(&str, &str)]) -> Derivation {
    let ring = RingDescriptor::new(vars).expect("valid names");
    Derivation::from_text(&ring, images).expect("valid catalog text")
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

fn product(prefix: &str, n: usize) -> String {
    names(prefix, n).join("*")
}

pub fn roberts(n: usize, t: u32) -> Derivation {
    let mut vars = names("x", n);
    vars.extend(names("y", n + 1));
    let ring = RingDescriptor::new(&vars).expect("valid names");
    let mut images: Vec<(String, String)> = (1..=n).map(|i| (format!("y{i}"), format!("x{i}^{}", t + 1))).collect();
    images.push((format!("y{}", n + 1), format!("({})^{t}", product("x", n))));
    let pairs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Derivation::from_text(&ring, &pairs).expect("valid catalog text")
}

pub fn cor63(n: usize, t: u32) -> Derivation {
    let mut vars = names("x", n);
    vars.extend(names("y", n + 1));
    vars.extend(names("w", n));
    vars.extend(names("z", n + 1));
    let ring = RingDescriptor::new(&vars).expect("valid names");
    let mut images: Vec<(String, String)> = Vec::new();
    for i in 1..=n {
        images.push((format!("y{i}"), format!("x{i}^{}", t + 1)));
        images.push((format!("z{i}"), format!("{}*x{i}^{t}*w{i}", t + 1)));
    }
    images.push((format!("y{}", n + 1), format!("({})^{t}", product("x", n))));
    let sum: Vec<String> = (1..=n)
        .map(|i| {
            let others: Vec<String> =
                (1..=n).map(|j| if j == i { format!("x{j}^{}", t - 1) } else { format!("x{j}^{t}") }).collect();
            format!("{t}*{}*w{i}", others.join("*"))
        })
        .collect();
    images.push((format!("z{}", n + 1), sum.join(" + ")));
    let pairs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Derivation::from_text(&ring, &pairs).expect("valid catalog text")
}

pub fn thm52(n: usize) -> DeltaModule {
    let mut vars = names("x", n);
    vars.extend(names("y", n));
    let ring = RingDescriptor::new(&vars).expect("valid names");
    let images: Vec<(String, String)> = (1..=n).map(|i| (format!("y{i}"), format!("x{i}^2"))).collect();
    let pairs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let d = Derivation::from_text(&ring, &pairs).expect("valid catalog text");
    let z = Polynomial::zero(&ring);
    let prod = parse_poly(&product("x", n), &ring).expect("valid catalog text");
    DeltaModule::free(&d, &["e1", "e2"], vec![vec![z.clone(), prod], vec![z.clone(), z]])
        .expect("triangular connection")
}

pub fn lem42() -> DeltaModule {
    let d = text_derivation(&["x", "y"], &[("y", "x")]);
    let r = d.ring().clone();
    let x2 = parse_poly("x^2", &r).expect("valid");
    make_module(&d, &["e"], vec![vec![Polynomial::zero(&r)]], vec![vec![x2]]).expect("valid catalog module")
}

pub fn lem43(q: u32) -> DeltaModule {
    let f = format!("x^{q}");
    let d = text_derivation(&["x", "y"], &[("y", &f)]);
    let r = d.ring().clone();
    let p = |s: &str| parse_poly(s, &r).expect("valid");
    let (z, o) = (Polynomial::zero(&r), Polynomial::one(&r));
    make_module(
        &d,
        &["e1", "e2"],
        vec![vec![z.clone(), o], vec![z.clone(), z.clone()]],
        vec![vec![z.clone(), p("y")], vec![p("y"), p(&f)], vec![p(&f), z]],
    )
    .expect("valid catalog module")
}

pub fn thm52data(n: usize) -> ExponentData {
    let mut delta: Vec<Vec<i64>> = (0..n).map(|j| (0..=n).map(|i| if i == j { 2 } else { 0 }).collect()).collect();
    delta.push(vec![1; n + 1]);
    ExponentData::new(n + 1, delta).expect("standing assumptions hold")
}
