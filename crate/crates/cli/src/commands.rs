use std::fmt::Write as _;

use lnd_core::catalog::ENTRIES;
use lnd_core::dmodule::{
    differential, hom, is_delta_submodule, module_kernel_basis, module_kernel_generators, omega, sym_extend, tensor,
};
use lnd_core::groebner::is_delta_ideal;
use lnd_core::kernel::{kernel_basis, kernel_generators_with, GradedKernelReport, PieceOutcome};
use lnd_core::kuroda::{kuroda_verdict, Verdict};
use lnd_core::ring::parse_poly_list;
use lnd_core::{
    infer_weights, parse_poly, DeltaModule, Derivation, KernelOptions, ModuleGrading, Polynomial, Rational,
    WeightSystem,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::source::Source;
use crate::CliError;

pub struct Report {
    pub text: String,
    pub result: Value,
}

pub struct Settings {
    pub cap: usize,
    pub parallel: bool,
    pub piece_limit: usize,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn q(r: &Rational) -> String {
    r.to_string()
}

fn tuple(v: &[Rational]) -> String {
    let s: Vec<String> = v.iter().map(q).collect();
    format!("({})", s.join(", "))
}

fn ivec(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", s.join(", "))
}

fn derivation_lines(d: &Derivation) -> String {
    let mut out = String::new();
    for (i, img) in d.images().iter().enumerate() {
        let _ = writeln!(out, "  {} -> {}", d.ring().name(i), img);
    }
    out
}

fn derivation_json(d: &Derivation) -> Value {
    let images: Vec<Value> = d
        .images()
        .iter()
        .enumerate()
        .map(|(i, p)| json!({ "var": d.ring().name(i), "image": p.to_string() }))
        .collect();
    json!({ "variables": d.ring().names(), "images": images })
}

fn module_lines(m: &DeltaModule) -> String {
    let mut out = format!("basis: {}\n", m.basis().join(", "));
    for part in m.describe().split("; ") {
        let _ = writeln!(out, "  {part}");
    }
    out
}

fn module_json(m: &DeltaModule) -> Value {
    let images: Vec<Value> = (0..m.rank())
        .map(|j| {
            let col: Vec<Polynomial> = (0..m.rank()).map(|i| m.connection()[i][j].clone()).collect();
            json!({ "basis": m.basis()[j], "image": m.display(&col).to_string() })
        })
        .collect();
    let rels: Vec<String> = m.relations().iter().map(|r| m.display(r).to_string()).collect();
    json!({
        "base": derivation_json(m.base()),
        "basis": m.basis(),
        "images": images,
        "relations": rels,
    })
}

/// `1,0,2;0,1,1` as weight rows; shifts are read off the derivation.
pub fn parse_weights(text: &str, d: &Derivation) -> Result<WeightSystem, CliError> {
    let mut rows = Vec::new();
    for row in text.split(';') {
        let r: Result<Vec<i64>, _> = row.split(',').map(|x| x.trim().parse::<i64>()).collect();
        let r = r.map_err(|_| CliError::Usage(format!("--weights: cannot read row `{}`", row.trim())))?;
        if r.len() != d.ring().arity() {
            return Err(CliError::Usage(format!("--weights: row `{}` needs {} entries", row.trim(), d.ring().arity())));
        }
        rows.push(r);
    }
    let shift: Vec<i64> = rows
        .iter()
        .map(|row| {
            d.images()
                .iter()
                .enumerate()
                .find_map(|(i, img)| {
                    img.monomials().next().map(|m| {
                        let w: i64 = m.exponents().iter().zip(row).map(|(&e, &c)| e as i64 * c).sum();
                        w - row[i]
                    })
                })
                .unwrap_or(0)
        })
        .collect();
    let ws = WeightSystem::new(rows, shift)?;
    ws.validate(d)?;
    Ok(ws)
}

pub fn parse_target(text: &str, ws: &WeightSystem) -> Result<Vec<i64>, CliError> {
    let t: Result<Vec<i64>, _> = text.split(',').map(|x| x.trim().parse::<i64>()).collect();
    let t = t.map_err(|_| CliError::Usage(format!("--target: cannot read `{text}`")))?;
    if t.len() != ws.rank() {
        return Err(CliError::Usage(format!("--target needs {} entries (one per weight row)", ws.rank())));
    }
    Ok(t)
}

pub fn examples() -> Report {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (id, params, summary) in ENTRIES {
        let ps: Vec<String> = params.iter().map(|(k, min)| format!("{k}>={min}")).collect();
        let _ = writeln!(text, "{id:<14} {:<12} {summary}", ps.join(" "));
        let pj: serde_json::Map<String, Value> = params.iter().map(|(k, m)| (k.to_string(), json!(m))).collect();
        rows.push(json!({ "id": id, "params": pj, "summary": summary }));
    }
    Report { text, result: json!(rows) }
}

pub fn check_lnd(src: &Source, cap: usize) -> Result<Report, CliError> {
    if src.wants_module() {
        let m = src.module(false)?;
        let order = m.triangular_order().map(|o| o.iter().map(|&j| m.basis()[j].clone()).collect::<Vec<_>>());
        let text = match &order {
            Some(o) => format!("module: triangular connection, order [{}]\n", o.join(", ")),
            None => "module: nilpotent on every basis element modulo the relations (checked when built)\n".into(),
        };
        return Ok(Report { text, result: json!({ "module": true, "certified": true, "triangular_order": order }) });
    }
    let d = src.derivation()?;
    if let Some(order) = d.is_locally_nilpotent_structural() {
        return Ok(Report {
            text: format!("locally nilpotent: triangular order [{}]\n", order.join(", ")),
            result: json!({ "certified": true, "method": "triangular", "order": order }),
        });
    }
    let mut degrees = Vec::new();
    let mut failing = None;
    for i in 0..d.ring().arity() {
        let nu = d.nu(&Polynomial::var(d.ring(), i), cap);
        if nu.finite().is_none() && failing.is_none() {
            failing = Some(d.ring().name(i).to_string());
        }
        degrees.push(json!({ "var": d.ring().name(i), "nu": nu.to_string() }));
    }
    let (text, certified) = match &failing {
        None => (format!("locally nilpotent: every variable is killed within {cap} steps\n"), true),
        Some(v) => (format!("not certified: no triangular order and `{v}` survives {cap} steps\n"), false),
    };
    Ok(Report { text, result: json!({ "certified": certified, "method": "iteration", "cap": cap, "nu": degrees }) })
}

pub fn apply(src: &Source, expr: &str, times: usize) -> Result<Report, CliError> {
    if src.wants_module() {
        let m = src.module(false)?;
        let mut z = m.normal_form(&m.parse_element(expr)?)?;
        for _ in 0..times {
            z = m.apply(&z)?;
        }
        let out = m.display(&z).to_string();
        return Ok(Report { text: format!("{out}\n"), result: json!({ "input": expr, "times": times, "value": out }) });
    }
    let d = src.derivation()?;
    let f = parse_poly(expr, d.ring())?;
    let out = d.iterate(&f, times);
    Ok(Report { text: format!("{out}\n"), result: json!({ "input": expr, "times": times, "value": out.to_string() }) })
}

pub fn phi_t(src: &Source, expr: &str, var: &str, cap: usize) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let f = parse_poly(expr, d.ring())?;
    let out = d.phi_t_named(&f, var, cap)?;
    Ok(Report { text: format!("{out}\n"), result: json!({ "input": expr, "var": var, "value": out.to_string() }) })
}

pub fn nu(src: &Source, expr: &str, cap: usize) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let f = parse_poly(expr, d.ring())?;
    let n = d.nu(&f, cap);
    Ok(Report {
        text: format!("{n}\n"),
        result: json!({ "input": expr, "cap": cap, "nu": n.finite(), "display": n.to_string() }),
    })
}

fn generators_or_variables(d: &Derivation, gens: &[String]) -> Result<Vec<Polynomial>, CliError> {
    if gens.is_empty() {
        return Ok((0..d.ring().arity()).map(|i| Polynomial::var(d.ring(), i)).collect());
    }
    gens.iter().map(|g| parse_poly(g, d.ring()).map_err(CliError::from)).collect()
}

pub fn slice_kernel(src: &Source, slice: &str, gens: &[String]) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let u = parse_poly(slice, d.ring())?;
    let gs = generators_or_variables(&d, gens)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for g in &gs {
        let k = d.phi_minus_u(&u, g)?;
        debug_assert!(d.apply(&k).is_zero());
        let _ = writeln!(text, "{g} -> {k}");
        rows.push(json!({ "generator": g.to_string(), "image": k.to_string() }));
    }
    Ok(Report { text, result: json!({ "slice": slice, "images": rows }) })
}

pub fn local_slice_kernel(src: &Source, slice: &str, gens: &[String]) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let u = parse_poly(slice, d.ring())?;
    let gs = generators_or_variables(&d, gens)?;
    let out = d.local_slice_kernel(&u, &gs)?;
    let a = d.apply(&u);
    let mut text = format!("a = {a}\n");
    let mut rows = Vec::new();
    for (g, k) in gs.iter().zip(&out) {
        let _ = writeln!(text, "{g} -> {k}");
        rows.push(json!({
            "generator": g.to_string(),
            "numerator": k.numerator.to_string(),
            "power": k.power,
            "annihilated": k.is_annihilated_by(&d),
        }));
    }
    Ok(Report { text, result: json!({ "local_slice": slice, "denominator": a.to_string(), "images": rows }) })
}

fn weights_for(d: &Derivation, weights: Option<&str>) -> Result<WeightSystem, CliError> {
    match weights {
        Some(w) => parse_weights(w, d),
        None => Ok(infer_weights(d)?),
    }
}

fn weights_text(ws: &WeightSystem) -> String {
    let rows: Vec<String> = ws.rows().iter().map(|r| ivec(r)).collect();
    format!(
        "weights: rows {} shift {} positive degree {}\n",
        rows.join(" "),
        ivec(ws.shift()),
        ivec(ws.positive_weights())
    )
}

fn report_text<T: std::fmt::Display + Clone + PartialEq>(r: &GradedKernelReport<T>, show_basis: bool) -> String {
    let mut out = weights_text(&r.weights);
    let _ = writeln!(out, "bound: {}", r.bound);
    for e in &r.entries {
        match &e.outcome {
            PieceOutcome::Skipped => {
                let _ =
                    writeln!(out, "deg {} weight {}: skipped ({} monomials)", e.degree, ivec(&e.weight), e.piece_size);
            }
            PieceOutcome::Computed { kernel_dim, span_dim, new_generators, span_incomplete, basis } => {
                if *kernel_dim == 0 {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "deg {} weight {}: piece {}, kernel {}, span {}{}, new {}",
                    e.degree,
                    ivec(&e.weight),
                    e.piece_size,
                    kernel_dim,
                    span_dim,
                    if *span_incomplete { " (incomplete)" } else { "" },
                    new_generators.len()
                );
                if show_basis {
                    for b in basis {
                        let _ = writeln!(out, "    {b}");
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "generators: {} at {} weights", r.generators.len(), r.generator_weights().len());
    for g in &r.generators {
        let _ = writeln!(out, "  {} {}", ivec(&g.weight), g.element);
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

pub struct KernelArgs<'a> {
    pub max_weight: Option<i64>,
    pub target: Option<&'a str>,
    pub weights: Option<&'a str>,
    pub show_basis: bool,
}

pub fn kernel(src: &Source, a: &KernelArgs<'_>, s: &Settings) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let ws = weights_for(&d, a.weights)?;
    if let Some(t) = a.target {
        let target = parse_target(t, &ws)?;
        let basis = kernel_basis(&d, &ws, &target);
        let mut text = weights_text(&ws);
        let _ = writeln!(text, "weight {}: kernel {}", ivec(&target), basis.len());
        for b in &basis {
            let _ = writeln!(text, "  {b}");
        }
        return Ok(Report {
            text,
            result: json!({ "weights": to_json(&ws), "target": target, "basis": to_json(&basis) }),
        });
    }
    let bound =
        a.max_weight.ok_or_else(|| CliError::Usage("kernel needs --max-weight W or --target w1,w2,...".into()))?;
    let opts = KernelOptions { piece_limit: s.piece_limit, parallel: s.parallel };
    let r = kernel_generators_with(&d, &ws, bound, &opts)?;
    Ok(Report { text: report_text(&r, a.show_basis), result: to_json(&r) })
}

pub fn module_kernel(src: &Source, a: &KernelArgs<'_>, use_omega: bool, s: &Settings) -> Result<Report, CliError> {
    let m = src.module(use_omega)?;
    let ws = weights_for(m.base(), a.weights)?;
    let grading = if use_omega { ModuleGrading::omega(&m, ws)? } else { ModuleGrading::infer(&m, ws)? };
    let mut head = String::new();
    let bw: Vec<String> =
        m.basis().iter().zip(&grading.basis_weights).map(|(b, w)| format!("{b}:{}", ivec(w))).collect();
    let _ = writeln!(head, "basis weights: {}", bw.join(" "));
    if let Some(t) = a.target {
        let target = parse_target(t, &grading.weights)?;
        let basis = module_kernel_basis(&m, &grading, &target)?;
        let mut text = weights_text(&grading.weights) + &head;
        let _ = writeln!(text, "weight {}: kernel {}", ivec(&target), basis.len());
        let els: Vec<String> = basis.iter().map(|z| m.display(z).to_string()).collect();
        for e in &els {
            let _ = writeln!(text, "  {e}");
        }
        return Ok(Report { text, result: json!({ "grading": to_json(&grading), "target": target, "basis": els }) });
    }
    let bound = a
        .max_weight
        .ok_or_else(|| CliError::Usage("module-kernel needs --max-weight W or --target w1,w2,...".into()))?;
    let opts = KernelOptions { piece_limit: s.piece_limit, parallel: s.parallel };
    let r = module_kernel_generators(&m, &grading, bound, &opts)?;
    let text = head + &report_text(&r, a.show_basis);
    Ok(Report { text, result: json!({ "basis_weights": grading.basis_weights, "report": to_json(&r) }) })
}

pub fn omega_cmd(src: &Source, diff: Option<&str>) -> Result<Report, CliError> {
    let d = src.derivation()?;
    let m = omega(&d);
    let mut text = module_lines(&m);
    let mut result = module_json(&m);
    if let Some(f) = diff {
        let f = parse_poly(f, d.ring())?;
        let df = differential(&f);
        let ddf = m.apply(&df)?;
        let _ = writeln!(text, "d({f}) = {}", m.display(&df));
        let _ = writeln!(text, "delta(d({f})) = {}", m.display(&ddf));
        result["differential"] = json!({
            "of": f.to_string(),
            "value": m.display(&df).to_string(),
            "image": m.display(&ddf).to_string(),
        });
    }
    Ok(Report { text, result })
}

pub fn sym_extend_cmd(src: &Source, use_omega: bool) -> Result<Report, CliError> {
    let m = src.module(use_omega)?;
    let d = sym_extend(&m)?;
    Ok(Report { text: derivation_lines(&d), result: derivation_json(&d) })
}

pub fn tensor_cmd(src: &Source, use_omega: bool, is_hom: bool) -> Result<Report, CliError> {
    let m = src.module(use_omega)?;
    let n = src.other_module(&m)?;
    let t = if is_hom { hom(&m, &n)? } else { tensor(&m, &n)? };
    Ok(Report { text: module_lines(&t), result: module_json(&t) })
}

pub fn delta_ideal_check(
    src: &Source,
    ideal: Option<&str>,
    submodule: Option<&str>,
    use_omega: bool,
) -> Result<Report, CliError> {
    match (ideal, submodule) {
        (Some(text), None) => {
            let d = src.derivation()?;
            let gens = parse_poly_list(text, d.ring())?;
            let c = is_delta_ideal(&d, &gens)?;
            let out = match &c.witness {
                None => "true\n".to_string(),
                Some((g, dg)) => format!("false\nwitness: delta({g}) = {dg} is not in the ideal\n"),
            };
            Ok(Report { text: out, result: json!({ "ideal": text, "check": to_json(&c) }) })
        }
        (None, Some(text)) => {
            let m = src.module(use_omega)?;
            let gens: Result<Vec<_>, _> = text.split(',').map(|t| m.parse_element(t)).collect();
            let c = is_delta_submodule(&m, &gens?)?;
            let out = match &c.witness {
                None => "true\n".to_string(),
                Some((g, dg)) => format!("false\nwitness: delta({g}) = {dg} is not in the submodule\n"),
            };
            Ok(Report { text: out, result: json!({ "submodule": text, "check": to_json(&c) }) })
        }
        _ => Err(CliError::Usage("delta-ideal-check needs exactly one of --ideal or --submodule".into())),
    }
}

pub fn kuroda(src: &Source, trace: bool, parallel: bool) -> Result<Report, CliError> {
    let data = src.exponents()?;
    let r = kuroda_verdict(&data, parallel);
    let mut text = format!("exponent data: m = {}, r = {}\n", data.m, data.r);
    for (j, e) in data.delta.iter().enumerate() {
        let _ = writeln!(text, "  delta_{} = {}", j + 1, ivec(e));
    }
    let _ = writeln!(text, "eta = {}", q(&r.eta));
    for (s, res) in &r.systems {
        let _ = writeln!(text, "k = {}:", s.k);
        for c in &s.rows {
            let _ = writeln!(text, "  {c} >= 0");
        }
        match &res.witness {
            Some(w) => {
                let _ = writeln!(text, "  feasible, witness u = {}", tuple(w));
            }
            None => {
                let _ = writeln!(text, "  infeasible");
            }
        }
        if trace {
            for t in &res.trace {
                let _ = writeln!(text, "  | {t}");
            }
        }
    }
    let _ = writeln!(text, "verdict: {}", r.verdict);
    let mut result = to_json(&r);
    result["satisfied"] = json!(r.verdict == Verdict::CriterionSatisfied);
    Ok(Report { text, result })
}
