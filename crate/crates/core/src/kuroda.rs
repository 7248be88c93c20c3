//! Kuroda's systems `L_{k,r-2}` for derivations of the form
//! `D(x_i) = 0`, `D(y_j) = x^{δ_j}`, and an exact Fourier–Motzkin feasibility
//! test that returns a rational witness.
//!
//! Feasibility of every system certifies that the kernel of `D` is not
//! finitely generated; an infeasible system says nothing.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::par;
use crate::ring::{rational, ser_opt_rationals, ser_rational, ser_rationals, Rational};

/// Affine form `Σ coeffs[j]·u_j + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Constraint {
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub constant: Rational,
}

impl Constraint {
    pub fn eval(&self, u: &[Rational]) -> Rational {
        self.coeffs.iter().zip(u).fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Positive rescaling making the first nonzero coefficient ±1.
    fn normalized(&self) -> Constraint {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => {
                let s = c.abs().recip();
                Constraint { coeffs: self.coeffs.iter().map(|x| x * &s).collect(), constant: &self.constant * &s }
            }
        }
    }

    fn substitute(&self, var: usize, value: &Constraint) -> Constraint {
        let f = self.coeffs[var].clone();
        if f.is_zero() {
            return self.clone();
        }
        let mut coeffs: Vec<Rational> = self.coeffs.iter().zip(&value.coeffs).map(|(a, b)| a + &f * b).collect();
        coeffs[var] = Rational::zero();
        Constraint { coeffs, constant: &self.constant + &f * &value.constant }
    }
}

/// Displays as e.g. `-u1 + u2 + u3 - 1`.
impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, c: &Rational, var: Option<usize>| -> fmt::Result {
            if c.is_zero() {
                return Ok(());
            }
            let neg = c.is_negative();
            let a = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            match var {
                Some(j) if a.is_one() => write!(f, "u{}", j + 1),
                Some(j) => write!(f, "{a}*u{}", j + 1),
                None => write!(f, "{a}"),
            }
        };
        for (j, c) in self.coeffs.iter().enumerate() {
            put(f, c, Some(j))?;
        }
        put(f, &self.constant, None)?;
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `equalities` are `form = 0`, `inequalities` are `form ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn is_satisfied_by(&self, u: &[Rational]) -> bool {
        u.len() == self.num_vars
            && self.equalities.iter().all(|c| c.eval(u).is_zero())
            && self.inequalities.iter().all(|c| !c.eval(u).is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    #[serde(serialize_with = "ser_opt_rationals")]
    pub witness: Option<Vec<Rational>>,
    /// One line per elimination step.
    pub trace: Vec<String>,
}

/// Exact feasibility by substituting out equalities and then eliminating the
/// remaining variables one at a time. A feasible answer carries a witness that
/// has been checked against every constraint.
pub fn fourier_motzkin(sys: &LinearSystem) -> FeasibilityResult {
    let n = sys.num_vars;
    let mut trace = Vec::new();
    let infeasible = |trace: Vec<String>| FeasibilityResult { feasible: false, witness: None, trace };

    // Equalities: solve each for one variable and substitute it everywhere.
    let mut eqs: Vec<Constraint> = sys.equalities.clone();
    let mut ineqs: Vec<Constraint> = sys.inequalities.clone();
    let mut solved: Vec<(usize, Constraint)> = Vec::new();
    while let Some(eq) = eqs.pop() {
        let Some(p) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
            if !eq.constant.is_zero() {
                trace.push(format!("equality reduces to {} = 0", eq.constant));
                return infeasible(trace);
            }
            continue;
        };
        let inv = -eq.coeffs[p].recip();
        let mut value =
            Constraint { coeffs: eq.coeffs.iter().map(|c| c * &inv).collect(), constant: &eq.constant * &inv };
        value.coeffs[p] = Rational::zero();
        trace.push(format!("u{} = {}", p + 1, value));
        for c in eqs.iter_mut().chain(ineqs.iter_mut()) {
            *c = c.substitute(p, &value);
        }
        for (_, v) in solved.iter_mut() {
            *v = v.substitute(p, &value);
        }
        solved.push((p, value));
    }

    let is_solved = |j: usize, solved: &[(usize, Constraint)]| solved.iter().any(|(p, _)| *p == j);
    let order: Vec<usize> = (0..n).rev().filter(|&j| !is_solved(j, &solved)).collect();
    let mut stages: Vec<(usize, Vec<Constraint>)> = Vec::new();
    let mut current = dedup(ineqs);
    for &v in &order {
        if let Some(bad) = current.iter().find(|c| c.is_constant() && c.constant.is_negative()) {
            trace.push(format!("contradiction {bad} >= 0"));
            return infeasible(trace);
        }
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in &current {
            if c.coeffs[v].is_positive() {
                lower.push(c.clone());
            } else if c.coeffs[v].is_negative() {
                upper.push(c.clone());
            } else {
                rest.push(c.clone());
            }
        }
        for lo in &lower {
            for up in &upper {
                // lo/a + up/b with a = lo[v] > 0, b = -up[v] > 0 eliminates v.
                let a = lo.coeffs[v].recip();
                let b = (-&up.coeffs[v]).recip();
                let mut coeffs: Vec<Rational> =
                    lo.coeffs.iter().zip(&up.coeffs).map(|(x, y)| x * &a + y * &b).collect();
                coeffs[v] = Rational::zero();
                rest.push(Constraint { coeffs, constant: &lo.constant * &a + &up.constant * &b });
            }
        }
        trace.push(format!(
            "eliminate u{}: {} lower, {} upper, {} remaining",
            v + 1,
            lower.len(),
            upper.len(),
            rest.len()
        ));
        stages.push((v, std::mem::replace(&mut current, dedup(rest))));
    }
    if let Some(bad) = current.iter().find(|c| c.constant.is_negative()) {
        trace.push(format!("contradiction {bad} >= 0"));
        return infeasible(trace);
    }

    let mut u = vec![Rational::zero(); n];
    for (v, cons) in stages.iter().rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in cons {
            let coef = c.coeffs[*v].clone();
            if coef.is_zero() {
                continue;
            }
            let mut others = c.clone();
            others.coeffs[*v] = Rational::zero();
            let bound = -others.eval(&u) / &coef;
            if coef.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        u[*v] = lo.or(hi).unwrap_or_else(Rational::zero);
    }
    for (p, value) in solved.iter().rev() {
        u[*p] = value.eval(&u);
    }
    assert!(sys.is_satisfied_by(&u), "elimination produced an invalid witness");
    trace.push(format!("witness ({})", u.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    FeasibilityResult { feasible: true, witness: Some(u), trace }
}

fn dedup(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::new();
    for c in cs {
        let c = c.normalized();
        if c.is_constant() && !c.constant.is_negative() {
            continue;
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Exponent data `D(y_j) = x^{δ_j}` with `m` x-variables and `r` y-variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentData {
    pub m: usize,
    pub r: usize,
    pub delta: Vec<Vec<i64>>,
}

impl ExponentData {
    /// Checks shape and the standing assumptions `r ≥ 4`, `m ≥ r − 1`, `ε^i_{i,j} > 0`.
    pub fn new(m: usize, delta: Vec<Vec<i64>>) -> Result<Self> {
        let r = delta.len();
        if delta.iter().any(|d| d.len() != m) {
            return Err(Error::DimensionMismatch(format!("every exponent vector needs {m} entries")));
        }
        if delta.iter().flatten().any(|&e| e < 0) {
            return Err(Error::Assumption("exponents must be nonnegative".into()));
        }
        if r < 4 {
            return Err(Error::Assumption(format!("r >= 4 required, got r = {r}")));
        }
        if m + 1 < r {
            return Err(Error::Assumption(format!("m >= r - 1 required, got m = {m}, r = {r}")));
        }
        let data = ExponentData { m, r, delta };
        for i in 1..r {
            for j in 1..=r {
                if i != j && data.eps(i, i, j) <= 0 {
                    return Err(Error::Assumption(format!(
                        "epsilon^{i}_{{{i},{j}}} = {} is not positive",
                        data.eps(i, i, j)
                    )));
                }
            }
        }
        Ok(data)
    }

    /// Reads the data from a derivation whose zero-image variables are the
    /// x-variables and whose other images are monomials in them.
    pub fn from_derivation(d: &Derivation) -> Result<Self> {
        let ring = d.ring();
        let xs: Vec<usize> = (0..ring.arity()).filter(|&i| d.image(i).is_zero()).collect();
        let mut delta = Vec::new();
        for (i, img) in d.images().iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let (mono, _) = match (img.len(), img.leading_term()) {
                (1, Some(t)) => t,
                _ => return Err(Error::Assumption(format!("image of `{}` is not a monomial", ring.name(i)))),
            };
            if mono.exponents().iter().enumerate().any(|(j, &e)| e > 0 && !xs.contains(&j)) {
                return Err(Error::Assumption(format!(
                    "image of `{}` involves a variable with nonzero image",
                    ring.name(i)
                )));
            }
            delta.push(xs.iter().map(|&j| mono.exponents()[j] as i64).collect());
        }
        Self::new(xs.len(), delta)
    }

    /// `ε^i_{a,b} = δ_a[i] − δ_b[i]`, all indices 1-based.
    pub fn eps(&self, i: usize, a: usize, b: usize) -> i64 {
        self.delta[a - 1][i - 1] - self.delta[b - 1][i - 1]
    }

    pub fn eta(&self) -> Rational {
        let den = (2..self.r).map(|j| self.eps(1, 1, j)).min().expect("r >= 4");
        rational(self.eps(1, 1, self.r), den)
    }

    /// `η_{k,i} = η·min(max(ε^i_{1,k}, ε^i_{2,k}), 0)`.
    pub fn eta_ki(&self, k: usize, i: usize) -> Rational {
        let m = self.eps(i, 1, k).max(self.eps(i, 2, k)).min(0);
        self.eta() * rational(m, 1)
    }
}

/// The system `L_{k,r-2}` in the variables `u_1 … u_{r-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KurodaSystem {
    pub k: usize,
    #[serde(serialize_with = "ser_rational")]
    pub eta: Rational,
    /// Rows `i = 2 … r − 1`, in order.
    pub rows: Vec<Constraint>,
    pub system: LinearSystem,
}

pub fn build_systems(data: &ExponentData) -> Vec<KurodaSystem> {
    let r = data.r;
    let nv = r - 2;
    let eta = data.eta();
    (3..r)
        .map(|k| {
            let rows: Vec<Constraint> = (2..r)
                .map(|i| Constraint {
                    coeffs: (1..=nv).map(|j| rational(data.eps(i, r, 1).min(data.eps(i, r, j + 1)), 1)).collect(),
                    constant: data.eta_ki(k, i),
                })
                .collect();
            let unit = |j: usize| {
                let mut c = vec![Rational::zero(); nv];
                c[j] = Rational::one();
                c
            };
            let mut inequalities = vec![Constraint { coeffs: unit(0), constant: -eta.clone() }];
            inequalities.extend((1..nv).map(|j| Constraint { coeffs: unit(j), constant: Rational::zero() }));
            inequalities.extend(rows.iter().cloned());
            let equalities = vec![Constraint { coeffs: vec![Rational::one(); nv], constant: rational(-1, 1) }];
            KurodaSystem { k, eta: eta.clone(), rows, system: LinearSystem { num_vars: nv, equalities, inequalities } }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Every system is feasible: the kernel is not finitely generated.
    CriterionSatisfied,
    /// Some system is infeasible; the criterion does not apply.
    Inconclusive { failing_k: Vec<usize> },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CriterionSatisfied => write!(f, "criterion satisfied: kernel not finitely generated"),
            Verdict::Inconclusive { failing_k } => {
                let ks: Vec<String> = failing_k.iter().map(ToString::to_string).collect();
                write!(f, "criterion inconclusive: infeasible for k = {}", ks.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KurodaReport {
    pub data: ExponentData,
    #[serde(serialize_with = "ser_rational")]
    pub eta: Rational,
    pub systems: Vec<(KurodaSystem, FeasibilityResult)>,
    pub verdict: Verdict,
}

pub fn kuroda_verdict(data: &ExponentData, parallel: bool) -> KurodaReport {
    let systems = build_systems(data);
    let results = par::map(&systems, parallel, |s| fourier_motzkin(&s.system));
    let failing_k: Vec<usize> = systems.iter().zip(&results).filter(|(_, r)| !r.feasible).map(|(s, _)| s.k).collect();
    let verdict = if failing_k.is_empty() { Verdict::CriterionSatisfied } else { Verdict::Inconclusive { failing_k } };
    KurodaReport { data: data.clone(), eta: data.eta(), systems: systems.into_iter().zip(results).collect(), verdict }
}
