mod common;

use common::{catalog_derivations, span_rank};
use lnd_core::catalog::{self, Params};
use lnd_core::dmodule::{differential, module_kernel_basis, module_kernel_generators, omega, sym_extend};
use lnd_core::kernel::{kernel_basis, kernel_generators_with, monomials_of_degree, PieceOutcome};
use lnd_core::{
    infer_weights, par, parse_document, DeltaModule, KernelOptions, ModuleGrading, Polynomial, Ring, WeightSystem,
};

fn opts(parallel: bool) -> KernelOptions {
    KernelOptions { parallel, ..KernelOptions::default() }
}

#[test]
fn roberts_weight_rows() {
    let d = catalog::roberts(3, 2);
    let ws = infer_weights(&d).unwrap();
    assert_eq!(&ws.rows()[..3], &[vec![1, 0, 0, 3, 0, 0, 2], vec![0, 1, 0, 0, 3, 0, 2], vec![0, 0, 1, 0, 0, 3, 2]]);
    assert_eq!(&ws.shift()[..3], &[0, 0, 0]);
    assert!(ws.positive_weights().iter().all(|&w| w > 0));
    ws.validate(&d).unwrap();
}

#[test]
fn reports_are_sound_for_every_catalog_derivation() {
    for (id, d) in catalog_derivations() {
        let ws = infer_weights(&d).unwrap();
        let bound = if id == "cor63" { 5 } else { 8 };
        let r = kernel_generators_with(&d, &ws, bound, &opts(true)).unwrap();
        for e in &r.entries {
            if let PieceOutcome::Computed { kernel_dim, basis, span_dim, new_generators, .. } = &e.outcome {
                assert_eq!(*kernel_dim, basis.len());
                assert_eq!(span_rank(basis), basis.len(), "{id}");
                assert_eq!(span_dim + new_generators.len(), *kernel_dim, "{id} at {:?}", e.weight);
            }
        }
        for g in &r.generators {
            assert!(d.apply(&g.element).is_zero(), "{id}");
            assert_eq!(ws.homogeneous_weight(&g.element), Some(g.weight.clone()));
        }
        // differentials of invariants are killed by the module derivation
        let m = omega(&d);
        for b in r.all_basis_elements() {
            assert!(m.apply(&differential(b)).unwrap().iter().all(Polynomial::is_zero), "{id}: d({b})");
        }
    }
}

#[test]
fn parallel_and_sequential_reports_agree() {
    let d = catalog::roberts(3, 2);
    let ws = infer_weights(&d).unwrap();
    let seq = kernel_generators_with(&d, &ws, 14, &opts(false)).unwrap();
    let par4 = par::with_jobs(4, || kernel_generators_with(&d, &ws, 14, &opts(true)).unwrap());
    assert_eq!(seq, par4);
    let m = omega(&d);
    let g = ModuleGrading::omega(&m, ws).unwrap();
    let a = module_kernel_generators(&m, &g, 10, &opts(false)).unwrap();
    let b = par::with_jobs(3, || module_kernel_generators(&m, &g, 10, &opts(true)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn piece_limit_marks_spans_incomplete() {
    let d = catalog::roberts(3, 2);
    // the total degree alone gives large pieces
    let ws = WeightSystem::new(vec![vec![1, 1, 1, 3, 3, 3, 6]], vec![0]).unwrap();
    let o = KernelOptions { piece_limit: 40, parallel: false };
    let r = kernel_generators_with(&d, &ws, 8, &o).unwrap();
    assert!(r.skipped() > 0);
    assert!(r.notes.iter().any(|n| n.contains("skipped")));
    assert!(r.entries.iter().all(|e| e.piece_size <= 40 || e.outcome == PieceOutcome::Skipped));
}

/// Embeds `Σ p_k e_k` into `B[e_1, …, e_p]`.
fn as_polynomial(z: &[Polynomial], ext: &Ring, base_arity: usize) -> Polynomial {
    z.iter().enumerate().fold(Polynomial::zero(ext), |acc, (k, p)| {
        &acc + &(&p.embed_prefix(ext) * &Polynomial::var(ext, base_arity + k))
    })
}

fn assert_e_degree_consistency(m: &DeltaModule, grading: &ModuleGrading, max_degree: i64) {
    let sym = sym_extend(m).unwrap();
    let ext = sym.ring().clone();
    let n = m.ring().arity();
    let ews = grading.extended_weights().unwrap();
    ews.validate(&sym).unwrap();
    let mut checked = 0;
    for degree in 0..=max_degree {
        let monos = monomials_of_degree(ews.positive_weights(), degree, usize::MAX).unwrap();
        let mut targets: Vec<Vec<i64>> = monos.iter().map(|mono| ews.weight(mono)).collect();
        targets.sort();
        targets.dedup();
        for t in targets {
            let e_degree = *t.last().unwrap();
            if e_degree > 1 {
                continue;
            }
            let w = &t[..t.len() - 1];
            let top = kernel_basis(&sym, &ews, &t);
            let low: Vec<Polynomial> = if e_degree == 0 {
                kernel_basis(m.base(), &grading.weights, w).iter().map(|p| p.embed_prefix(&ext)).collect()
            } else {
                module_kernel_basis(m, grading, w).unwrap().iter().map(|z| as_polynomial(z, &ext, n)).collect()
            };
            assert_eq!(top.len(), low.len(), "dimension at {t:?}");
            let mut both = top.clone();
            both.extend(low);
            assert_eq!(span_rank(&both), top.len(), "span at {t:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn symmetric_extension_matches_base_and_module_kernels() {
    let m = catalog::thm52(4);
    let g = ModuleGrading::infer(&m, infer_weights(m.base()).unwrap()).unwrap();
    assert_e_degree_consistency(&m, &g, 6);
    for id in ["ex33", "df5"] {
        let d = catalog::get(id, &Params::new()).unwrap().derivation().unwrap().clone();
        let m = omega(&d);
        let g = ModuleGrading::omega(&m, infer_weights(&d).unwrap()).unwrap();
        assert_e_degree_consistency(&m, &g, 6);
    }
}

#[test]
fn input_documents_feed_the_kernel() {
    let doc = parse_document(
        "ring B = Q[x, y, z]\nderivation D on B { y -> x; z -> y }\n\
         module M on D { basis e1, e2; d e2 -> x*e1; }",
    )
    .unwrap();
    let d = doc.derivation(Some("D")).unwrap();
    let ws = infer_weights(d).unwrap();
    let r = kernel_generators_with(d, &ws, 6, &opts(true)).unwrap();
    let gens: Vec<String> = r.generators.iter().map(|g| g.element.to_string()).collect();
    assert!(gens.contains(&"x".to_string()));
    assert!(gens.iter().any(|g| g.contains("y^2") && g.contains("x*z")));
    let m = doc.module(None).unwrap();
    let g = ModuleGrading::infer(m, ws).unwrap();
    let rep = module_kernel_generators(m, &g, 4, &opts(true)).unwrap();
    assert_eq!(rep.generators[0].element.to_string(), "e1");
}

#[test]
fn smaller_bounds_give_prefixes() {
    for (id, d) in catalog_derivations().into_iter().filter(|(id, _)| id != "cor63") {
        let ws = infer_weights(&d).unwrap();
        let big = kernel_generators_with(&d, &ws, 9, &opts(true)).unwrap();
        let mut last = 0;
        for b in [0, 3, 6] {
            let small = kernel_generators_with(&d, &ws, b, &opts(true)).unwrap();
            assert_eq!(small.entries[..], big.entries[..small.entries.len()], "{id} at bound {b}");
            assert_eq!(small.generators[..], big.generators[..small.generators.len()], "{id} at bound {b}");
            assert!(small.generators.len() >= last);
            last = small.generators.len();
        }
    }
}

#[test]
fn products_of_generators_stay_in_the_kernel_span() {
    for (id, d) in catalog_derivations().into_iter().filter(|(id, _)| id != "cor63") {
        let ws = infer_weights(&d).unwrap();
        let bound = 10;
        let r = kernel_generators_with(&d, &ws, bound, &opts(true)).unwrap();
        let gens = &r.generators;
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                if a.degree + b.degree > bound {
                    continue;
                }
                let w: Vec<i64> = a.weight.iter().zip(&b.weight).map(|(x, y)| x + y).collect();
                let basis = r.entry(&w).expect("weight within bound").basis();
                let mut all = basis.to_vec();
                all.push(&a.element * &b.element);
                assert_eq!(span_rank(&all), basis.len(), "{id}: ({}) * ({})", a.element, b.element);
            }
        }
    }
}
