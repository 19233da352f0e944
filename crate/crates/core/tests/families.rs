//! Constructor-level checks for the module families.

use a1_core::a1core::margolis::{margolis, MargolisProfile};
use a1_core::families::*;
use a1_core::stable::{dual, hom, is_stably_iso, picard_element, stably_iso, PicardIndex, SearchBudget};

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn literal_modules() {
    let z = z_module();
    assert_eq!(z.dims().into_iter().collect::<Vec<_>>(), vec![(-1, 1), (0, 1)]);
    assert_eq!(margolis(&z), MargolisProfile::from_lists(&[], &[(-1, 1), (0, 1)]));
    let q = a1_mod_a0();
    assert_eq!(q.dims().keys().copied().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
    assert!(stably_iso(&question_mark(), &picard_element(PicardIndex::new(1, 3, 1))).is_yes());
}

#[test]
fn truncated_projective_examples() {
    let p = trunc_projective(1, 4).unwrap();
    assert!(p.sq1(1).get(0, 0));
    assert!(p.sq2(2).get(0, 0));
    assert!(p.sq1(3).get(0, 0));
    assert!(!p.sq1(2).get(0, 0));
    assert!(trunc_projective(3, 2).is_err());
    // 4-periodicity.
    let a = trunc_projective(-3, 9).unwrap().suspend(4);
    assert!(a.same_structure(&trunc_projective(1, 13).unwrap()));
    // Q0-acyclic for odd bottom, even top.
    for n in 1..=6 {
        for m in 1..=n {
            assert!(margolis(&trunc_projective(2 * m - 1, 2 * n).unwrap()).q0.is_empty());
        }
    }
}

#[test]
fn truncated_projective_duality() {
    // D P^b_a ≅ Σ^{1−4b} P^{4b−a−1}_{3b−1}.
    for (a, b) in [(3, 6), (1, 4), (2, 5), (1, 2)] {
        let lhs = dual(&trunc_projective(a, b).unwrap());
        let rhs = trunc_projective(3 * b - 1, 4 * b - a - 1).unwrap().suspend(1 - 4 * b);
        assert!(a1_core::stable::find_module_iso(&lhs, &rhs, budget()).is_yes(), "a={a} b={b}");
    }
}

#[test]
fn p0_and_r_profiles() {
    let p0 = p0_trunc(24).unwrap();
    let (lo, hi) = trusted_range(&p0, true, false);
    let pp = margolis(&p0).restricted(lo, hi);
    assert_eq!(pp, MargolisProfile::from_lists(&[], &[(0, 1)]));
    let r = r_trunc(24).unwrap();
    let pr = margolis(&r).restricted(lo, hi);
    assert_eq!(pr, MargolisProfile::from_lists(&[(-1, 1)], &[]));
    let d = dp0_trunc(24).unwrap();
    assert_eq!(d.window(), Some((-24, 1)));
}

#[test]
fn fir_family() {
    let f1 = fi_r(1).unwrap();
    assert!(f1.same_structure(&a1_mod_a0().suspend(-1)));
    for i in 1..=4 {
        let f = fi_r(i).unwrap();
        assert_eq!(f.total_dim(), 4 * i as usize);
    }
    // f2R / f1R ≅ Σ³ A1//A0, checked on dimensions and by a stable iso.
    let f2 = fi_r(2).unwrap();
    let r = r_trunc(16).unwrap();
    let _ = r;
    let gens: Vec<_> = f2.degrees().filter(|&n| n <= -1 && f2.dim(n) > 0).map(|n| (n, a1_core::gf2::BitVector::unit(f2.dim(n), 0))).collect();
    let q = f2.submodule_generated(&gens).quotient().module;
    assert!(a1_core::stable::find_module_iso(&q, &a1_mod_a0().suspend(3), budget()).is_yes());
}

#[test]
fn a_family_profiles() {
    for k in 1..=4 {
        for eps in 0..=1 {
            let a = make_a(k, eps).unwrap_or_else(|e| panic!("A_{k},{eps}: {e}"));
            assert_eq!(a.lo(), 2);
            assert_eq!(margolis(&a).q1.keys().copied().collect::<Vec<_>>(), vec![3, 2 * (k as i32 + 1)]);
        }
    }
    assert_eq!(make_a(1, 1).unwrap().total_dim(), 4);
}

#[test]
fn a_contains_question_mark() {
    for k in 1..=3 {
        for eps in 0..=1 {
            let q = question_mark().suspend(3);
            for t in 0..4 {
                let x = orbit_member(k, eps, t).unwrap();
                let h = hom(&q, &x.module);
                if t == 0 {
                    assert_eq!(h.len(), 1, "k={k} eps={eps}");
                    assert!(h[0].is_injective());
                } else {
                    assert!(h.is_empty(), "k={k} eps={eps} t={t}");
                }
            }
        }
    }
}

#[test]
fn identify_a_truncations() {
    for k in 1..=3 {
        for eps in 0..=1 {
            assert!(identify_a(k, eps, budget()).unwrap().is_yes(), "k={k} eps={eps}");
        }
    }
}

#[test]
fn brown_gitler_small() {
    let t2 = brown_gitler(BgKind::T, 2).unwrap();
    assert!(t2.same_structure(&z_module()));
    let t04 = brown_gitler(BgKind::T0, 4).unwrap();
    assert_eq!(t04.dims().keys().copied().collect::<Vec<_>>(), vec![-3, -2, 0]);
    assert!(brown_gitler(BgKind::T, 3).is_err());
    assert!(brown_gitler(BgKind::T0, 6).is_err());
}

#[test]
fn mahowald_sequences() {
    for n in 1..=8 {
        let c = mahowald_ses(n).unwrap();
        assert!(c.sub_ok && c.quotient_ok, "n={n}: {c:?}");
    }
    for v in 1..=3 {
        assert!(mahowald_special_case(v, budget()).unwrap().is_yes(), "nu={v}");
        assert!(wtwo_inject_question(v).unwrap(), "nu={v}");
    }
}

#[test]
fn wtwo_reductions() {
    for n in 1..=8 {
        assert!(wtwo_reduction(n, budget()).unwrap().is_yes(), "n={n}");
    }
}

#[test]
fn toda_stages() {
    let st = toda_complex(8).unwrap();
    for s in &st {
        assert!(s.kappa_matches, "n={}", s.n);
    }
    for n in 1..st.len() {
        assert!(toda_exact_at(&st, n), "n={n}");
    }
}

#[test]
fn killing_constructions() {
    let a = make_a(2, 1).unwrap();
    let kq = kill_bottom(&a, KillKind::Question, None).unwrap();
    assert!(kq.is_reduced_in_trust());
    let p = kq.profile_in_trust();
    assert!(p.q0.is_empty());
    assert_eq!(p.q1.keys().copied().collect::<Vec<_>>(), vec![6]);

    let f = a1_core::stable::unit_module();
    let kf = kill_bottom(&f, KillKind::Unit, Some(24)).unwrap();
    assert!(kf.module.same_structure(&dr_trunc(24).unwrap().suspend(-1)));
    assert!(kill_bottom(&a1_core::a1core::module::A1Module::zero(), KillKind::Unit, None).is_err());
}

#[test]
fn p0_idempotence_on_a_modules() {
    for (k, eps) in [(1, 0), (1, 1), (2, 0)] {
        assert!(p0_idempotence(&make_a(k, eps).unwrap(), 32).unwrap());
    }
}

#[test]
fn family_build_dispatch() {
    let a = build(&FamilySpec::new(FamilyKind::A, &[2, 1])).unwrap();
    assert_eq!(margolis(&a).q1.keys().copied().collect::<Vec<_>>(), vec![3, 6]);
    assert!(build(&FamilySpec::new(FamilyKind::A, &[2])).is_err());
    assert!(FamilyKind::from_name("nope").is_err());
    let bg = build(&FamilySpec::new(FamilyKind::BgT, &[2])).unwrap();
    assert!(bg.same_structure(&z_module()));
    let mut s = FamilySpec::new(FamilyKind::P0Trunc, &[]);
    s.window = Some((0, 20));
    assert!(build(&s).is_err());
    let _ = is_stably_iso;
}
