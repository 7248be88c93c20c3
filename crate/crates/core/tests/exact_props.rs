//! Exact linear algebra, graded kernels, Fourier–Motzkin and Gröbner bases
//! against the slow reference implementations.

mod common;

use common::{catalog_derivations, catalog_modules, config, poly, rat, span_rank, to_npoly};
use lnd_core::dmodule::{hom, module_kernel_basis, ModuleGrading};
use lnd_core::groebner::{GroebnerBasis, MonomialOrder};
use lnd_core::kernel::{graded_piece, kernel_basis, monomials_of_degree};
use lnd_core::kuroda::{build_systems, fourier_motzkin, Constraint, ExponentData, LinearSystem};
use lnd_core::linalg::{nullspace, rank, rref, RationalMatrix};
use lnd_core::{infer_weights, DeltaModule, Derivation, Monomial, Polynomial, Rational, RingDescriptor};
use lnd_oracles::{self as oracle, Affine, ModuleData};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::sample::select;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], c), r)
    })
}

fn big_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=15, 1usize..=15).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![2 => Just(0i64), 3 => -9i64..=9], c), r)
    })
}

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

fn system() -> impl Strategy<Value = LinearSystem> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let c = move || (prop::collection::vec(-3i64..=3, n), -3i64..=3);
            (Just(n), prop::collection::vec(c(), 0..=2), prop::collection::vec(c(), 1..=6))
        })
        .prop_map(|(n, eqs, ineqs)| {
            let mk = |v: Vec<(Vec<i64>, i64)>| -> Vec<Constraint> {
                v.into_iter()
                    .map(|(c, k)| Constraint { coeffs: c.into_iter().map(rat).collect(), constant: rat(k) })
                    .collect()
            };
            LinearSystem { num_vars: n, equalities: mk(eqs), inequalities: mk(ineqs) }
        })
}

fn affine(c: &Constraint) -> Affine {
    Affine { coeffs: c.coeffs.clone(), constant: c.constant.clone() }
}

fn vertex_oracle(s: &LinearSystem) -> bool {
    let eqs: Vec<Affine> = s.equalities.iter().map(affine).collect();
    let ineqs: Vec<Affine> = s.inequalities.iter().map(affine).collect();
    oracle::vertex_feasible(s.num_vars, &eqs, &ineqs, 1000).is_some()
}

/// Exponent data meeting the standing assumptions: dominant diagonal, small off-diagonal entries.
fn exponent_data() -> impl Strategy<Value = ExponentData> {
    (4usize..=5)
        .prop_flat_map(|r| (Just(r), (r - 1)..=r))
        .prop_flat_map(|(r, m)| {
            (
                Just(r),
                Just(m),
                prop::collection::vec(prop::collection::vec(0i64..=2, m), r),
                prop::collection::vec(3i64..=5, r - 1),
            )
        })
        .prop_map(|(_, m, mut delta, diag)| {
            for (j, d) in diag.into_iter().enumerate() {
                delta[j][j] = d;
            }
            ExponentData::new(m, delta).expect("assumptions hold by construction")
        })
}

/// Derivations small enough for the brute-force piece oracle.
fn small_derivations() -> Vec<(String, Derivation)> {
    catalog_derivations().into_iter().filter(|(id, _)| id != "cor63").collect()
}

fn ideal_gens() -> impl Strategy<Value = Vec<Polynomial>> {
    let r = RingDescriptor::new(&["x", "y", "z"]).unwrap();
    prop::collection::vec(poly(r, 3, 2), 1..=3)
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn rank_and_nullspace_match_oracle(rows in matrix()) {
        let cols = rows[0].len();
        let m = RationalMatrix::from_rows(to_q(&rows));
        let r = rank(&m);
        prop_assert_eq!(r, oracle::rank(&to_q(&rows)));
        let ns = nullspace(&m);
        prop_assert_eq!(ns.len(), cols - r);
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let mut stacked = ns.clone();
        prop_assert_eq!(oracle::rank(&stacked), ns.len());
        let (red, pivots) = rref(&m);
        prop_assert_eq!(pivots.len(), r);
        for (i, &p) in pivots.iter().enumerate() {
            prop_assert_eq!(red.get(i, p), &rat(1));
        }
        stacked.extend(red.to_rows().into_iter().take(r));
        prop_assert_eq!(oracle::rank(&stacked), cols);
    }

    #[test]
    fn rref_matches_gauss_jordan(rows in big_matrix()) {
        let m = RationalMatrix::from_rows(to_q(&rows));
        let (red, pivots) = rref(&m);
        let want = oracle::rref(&to_q(&rows));
        prop_assert_eq!(pivots.len(), want.len());
        prop_assert_eq!(&red.to_rows()[..want.len()], &want[..]);
        prop_assert!(red.to_rows()[want.len()..].iter().all(|r| r.iter().all(Zero::is_zero)));
        let (again, same) = rref(&red);
        prop_assert_eq!(again, red);
        prop_assert_eq!(same, pivots);
    }

    #[test]
    fn graded_pieces_match_oracle(
        (id, d, degree, pick) in select(small_derivations())
            .prop_flat_map(|(id, d)| (Just(id), Just(d), 0i64..=8, any::<prop::sample::Index>()))
    ) {
        let ws = infer_weights(&d).unwrap();
        let monos = monomials_of_degree(ws.positive_weights(), degree, usize::MAX).unwrap();
        prop_assume!(!monos.is_empty());
        let target = ws.weight(pick.get(&monos));
        let piece = graded_piece(d.ring(), &ws, &target);
        prop_assume!(piece.len() <= 200);
        let images: Vec<_> = d.images().iter().map(to_npoly).collect();
        let (size, dim) = oracle::ring_kernel_dim(&images, ws.rows(), &target, degree as u32);
        prop_assert_eq!(piece.len(), size, "{} at {:?}", id, target);
        let basis = kernel_basis(&d, &ws, &target);
        prop_assert_eq!(basis.len(), dim, "{} at {:?}", id, target);
        prop_assert_eq!(span_rank(&basis), basis.len());
        for b in &basis {
            prop_assert!(d.apply(b).is_zero());
            prop_assert_eq!(ws.homogeneous_weight(b), Some(target.clone()));
        }
    }

    #[test]
    fn module_pieces_match_oracle(
        (id, m, degree, pick) in select(catalog_modules())
            .prop_flat_map(|(id, m)| (Just(id), Just(m), 0i64..=6, any::<prop::sample::Index>()))
    ) {
        let ws = infer_weights(m.base()).unwrap();
        let grading = if id.starts_with("omega") {
            ModuleGrading::omega(&m, ws).unwrap()
        } else {
            ModuleGrading::infer(&m, ws).unwrap()
        };
        let monos = monomials_of_degree(grading.weights.positive_weights(), degree, usize::MAX).unwrap();
        prop_assume!(!monos.is_empty());
        let k = pick.index(m.rank());
        let target: Vec<i64> = grading.term_weight(pick.get(&monos), k);
        let basis = module_kernel_basis(&m, &grading, &target).unwrap();
        for z in &basis {
            prop_assert!(m.is_zero(&m.apply(z).unwrap()).unwrap());
        }
        let data = ModuleData {
            images: m.base().images().iter().map(to_npoly).collect(),
            connection: m.connection().iter().map(|r| r.iter().map(to_npoly).collect()).collect(),
            relations: m.relations().iter().map(|r| r.iter().map(to_npoly).collect()).collect(),
            var_weights: grading.weights.rows().to_vec(),
            basis_weights: grading.basis_weights.clone(),
            shift: grading.weights.shift().to_vec(),
        };
        // positive weights are ≥ 1 and basis degrees ≥ 0, so this bounds every total degree involved
        let top = grading.weights.degree_of_weight(&target) + grading.weights.degree_of_weight(grading.weights.shift()).max(0);
        prop_assert_eq!(basis.len(), data.kernel_dim(&target, top as u32), "{} at {:?}", id, target);
    }

    #[test]
    fn fourier_motzkin_matches_vertex_oracle(s in system()) {
        let r = fourier_motzkin(&s);
        prop_assert_eq!(r.feasible, vertex_oracle(&s));
        if let Some(w) = &r.witness {
            prop_assert!(s.is_satisfied_by(w));
        }
        prop_assert_eq!(r.feasible, r.witness.is_some());
    }

    #[test]
    fn feasibility_ignores_row_order_and_scaling(
        s in system(),
        scales in prop::collection::vec(1i64..=5, 6),
        seed in any::<prop::sample::Index>(),
    ) {
        let mut t = s.clone();
        let n = t.inequalities.len();
        t.inequalities.rotate_left(seed.index(n));
        for (c, k) in t.inequalities.iter_mut().zip(&scales) {
            c.coeffs.iter_mut().for_each(|x| *x *= rat(*k));
            c.constant *= rat(*k);
        }
        for e in t.equalities.iter_mut() {
            e.coeffs.iter_mut().for_each(|x| *x = -x.clone());
            e.constant = -e.constant.clone();
        }
        prop_assert_eq!(fourier_motzkin(&s).feasible, fourier_motzkin(&t).feasible);
    }

    #[test]
    fn kuroda_systems_are_decided_consistently(data in exponent_data(), k in any::<prop::sample::Index>()) {
        let systems = build_systems(&data);
        prop_assert_eq!(systems.len(), data.r - 3);
        let sys = &systems[k.index(systems.len())];
        let r = fourier_motzkin(&sys.system);
        prop_assert_eq!(r.feasible, vertex_oracle(&sys.system));
        if let Some(w) = &r.witness {
            prop_assert!(sys.system.is_satisfied_by(w));
        }
        let mut rev = sys.system.clone();
        rev.inequalities.reverse();
        prop_assert_eq!(fourier_motzkin(&rev).feasible, r.feasible);
    }

    #[test]
    fn groebner_basis_ignores_generator_order(gens in ideal_gens(), f in {
        let r = RingDescriptor::new(&["x", "y", "z"]).unwrap();
        poly(r, 5, 3)
    }) {
        let ring = f.ring().clone();
        let a = GroebnerBasis::ideal(&ring, &gens, MonomialOrder::Grevlex).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let b = GroebnerBasis::ideal(&ring, &rev, MonomialOrder::Grevlex).unwrap();
        prop_assert_eq!(a.elements(), b.elements());
        prop_assert_eq!(a.ideal_normal_form(&f), b.ideal_normal_form(&f));
        for g in &gens {
            prop_assert!(a.contains(std::slice::from_ref(g)));
        }
        // f + h·g stays in the same class
        let h = &f * &Polynomial::var(&ring, 0);
        let shifted = &f + &(&h * &gens[0]);
        prop_assert_eq!(a.ideal_normal_form(&shifted), a.ideal_normal_form(&f));
        // the normal form has no term divisible by a leading term
        let nf = a.ideal_normal_form(&f);
        for mono in nf.monomials() {
            prop_assert!(a.is_standard(0, mono));
        }
    }

    #[test]
    fn monomial_ideal_membership(
        gens in prop::collection::vec(prop::collection::vec(0u32..=3, 3), 1..=4),
        probe in prop::collection::vec(0u32..=5, 3),
    ) {
        let ring = RingDescriptor::new(&["x", "y", "z"]).unwrap();
        let polys: Vec<Polynomial> =
            gens.iter().map(|e| Polynomial::term(&ring, Monomial::new(e.clone()), rat(1))).collect();
        let gb = GroebnerBasis::ideal(&ring, &polys, MonomialOrder::Lex).unwrap();
        let m = Monomial::new(probe);
        let expected = gens.iter().any(|g| Monomial::new(g.clone()).divides(&m));
        prop_assert_eq!(gb.contains(&[Polynomial::term(&ring, m, rat(1))]), expected);
    }

    #[test]
    fn module_leibniz(
        (id, m, b, z) in select(catalog_modules()).prop_flat_map(|(id, m)| {
            let r = m.ring().clone();
            let p = m.rank();
            (Just(id), Just(m), poly(r.clone(), 3, 2), prop::collection::vec(poly(r, 3, 2), p))
        })
    ) {
        let bz: Vec<Polynomial> = z.iter().map(|c| &b * c).collect();
        let lhs = m.apply(&bz).unwrap();
        let db = m.base().apply(&b);
        let mz = m.apply(&z).unwrap();
        let rhs: Vec<Polynomial> = z.iter().zip(&mz).map(|(zi, mi)| &(&db * zi) + &(&b * mi)).collect();
        prop_assert_eq!(lhs, m.normal_form(&rhs).unwrap(), "module {}", id);
    }

    #[test]
    fn hom_derivation_measures_failure_to_commute(
        entries in {
            let r = RingDescriptor::new(&["x", "y"]).unwrap();
            prop::collection::vec(poly(r, 3, 2), 4)
        }
    ) {
        let ring = entries[0].ring().clone();
        let d = Derivation::from_text(&ring, &[("y", "x")]).unwrap();
        let p = |s: &str| lnd_core::parse_poly(s, &ring).unwrap();
        let zero = Polynomial::zero(&ring);
        let mm = DeltaModule::free(&d, &["a", "b"], vec![vec![zero.clone(), p("x")], vec![zero.clone(), zero.clone()]]).unwrap();
        let nn = DeltaModule::free(&d, &["f", "g"], vec![vec![zero.clone(), p("1")], vec![zero.clone(), zero.clone()]]).unwrap();
        let h = hom(&mm, &nn).unwrap();
        // F(e_a) = Σ_k F[a·2 + k] f_k
        let image_of = |v: &[Polynomial]| -> Vec<Polynomial> {
            (0..2).map(|k| (0..2).fold(zero.clone(), |acc, a| &acc + &(&v[a] * &entries[a * 2 + k]))).collect()
        };
        let df = h.apply(&entries).unwrap();
        for a in 0..2 {
            let ea = mm.unit(a);
            let lhs: Vec<Polynomial> = (0..2).map(|k| df[a * 2 + k].clone()).collect();
            let via_n = nn.apply(&image_of(&ea)).unwrap();
            let via_m = image_of(&mm.apply(&ea).unwrap());
            let rhs: Vec<Polynomial> = via_n.iter().zip(&via_m).map(|(u, v)| u - v).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
