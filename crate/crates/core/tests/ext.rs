//! Ext charts against independent descriptions: the algebra structure of
//! `𝓔xt(F, F)`, explicit charts for `Z`, `A_{2,1}`, `A_{2,0}`, and the
//! relations of the `A`-family.

mod common;

use std::collections::BTreeMap;

use a1_core::a1core::module::A1Module;
use a1_core::ext::*;
use a1_core::families::*;
use a1_core::stable::{joker, unit_module, SearchBudget};
use common::*;

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn resolution_of_unit_is_minimal_and_exact() {
    let res = resolution_of_unit(8);
    res.check().unwrap();
    // Minimality: generators of P_s in degree t count Ext^{s,t}(F,F).
    let alg = algebra_monomials(40, 8);
    for s in 0..=8usize {
        let mut want: BTreeMap<i32, usize> = BTreeMap::new();
        for (&(x, y, e), ms) in &alg {
            if e == 0 && y == s as i32 {
                *want.entry(x + y).or_insert(0) += ms.len();
            }
        }
        let mut got: BTreeMap<i32, usize> = BTreeMap::new();
        for &g in res.gens(s) {
            *got.entry(g).or_insert(0) += 1;
        }
        assert_eq!(got, want, "generators of P_{s}");
    }
}

#[test]
fn unit_chart_first_quadrant_by_cochains() {
    let w = ChartWindow::new((0, 6), (0, 8));
    let chart = ext_chart(&unit_module(), &w).unwrap();
    assert_eq!(unit_oracle_mismatches(&chart, &w), Vec::<String>::new());
}

#[test]
fn unit_chart_all_quadrants_by_socles() {
    let w = ChartWindow::new((-6, 6), (-11, 8));
    let chart = stext_chart(&unit_module(), &w, budget()).unwrap();
    assert_eq!(unit_oracle_mismatches(&chart, &w), Vec::<String>::new());
    for e in 0..=1 {
        assert!(rotation_mismatches(&chart, e, (-5, -1)).is_empty(), "eps={e}");
    }
}

#[test]
fn generator_products_in_the_unit_chart() {
    use ExtGen::*;
    let one = unit_class();
    let zero = |w: &[ExtGen]| multiply_word(w, &one).unwrap().is_zero();
    assert!(zero(&[H0, H1]));
    assert!(zero(&[H1, H1, H1]));
    assert!(zero(&[H1, Kappa]));
    assert!(!zero(&[H1, H1]));
    assert!(!zero(&[Alpha, Alpha]));
    let k2 = multiply_word(&[Kappa, Kappa], &one).unwrap();
    let h2 = multiply_word(&[H0, H0], &one).unwrap();
    assert_eq!(classes_equal(&k2, &h2, budget()).unwrap(), Some(true));
    let ka = multiply_word(&[Kappa, Alpha], &one).unwrap();
    let a = multiply(A, &one).unwrap();
    assert_eq!(classes_equal(&ka, &a, budget()).unwrap(), Some(true));
    let aa = multiply_word(&[Alpha, Alpha], &one).unwrap();
    let b = multiply(B, &one).unwrap();
    assert_eq!(classes_equal(&aa, &b, budget()).unwrap(), Some(true));
}

/// In positive filtration; at `s = 0` the cochain engine computes
/// `Hom(F, J^{⊗ε} ⊗ N)`, which also sees free summands.
fn engines_agree(m: &A1Module) {
    let w = ChartWindow::new((1, 5), (-4, 8));
    let a = ext_chart(m, &w).unwrap();
    let b = stext_chart(m, &w, budget()).unwrap();
    assert_eq!(a.dims, b.dims, "{}", m.name());
    for &(s, t, e) in a.dims.keys() {
        if s < w.s.1 {
            for which in 0..2 {
                assert_eq!(a.h_rank(which, s, t, e), b.h_rank(which, s, t, e), "{} h{which} at {:?}", m.name(), (s, t, e));
            }
        }
    }
}

#[test]
fn cochain_and_socle_engines_agree() {
    for m in [unit_module(), joker(), z_module(), question_mark(), a1_mod_a0(), make_a(2, 1).unwrap(), make_a(2, 0).unwrap()] {
        engines_agree(&m);
    }
}

#[test]
fn z_chart() {
    let w = ChartWindow { s: (-4, 8), x: (-12, 12), eps: vec![0] };
    let c = stext_chart(&z_module(), &w, budget()).unwrap();
    let (dots, h1, _) = compare_periodic(&c, &Z_EXPECTED);
    assert!(dots && h1);
    // h0 is nonzero exactly on the class in stem 2 of filtration 1: the
    // Massey product ⟨h0, h1, h0⟩ = h1² read through 0 → F → Z → Σ⁻¹F → 0.
    assert_eq!(h_support(&c, 0), sources(periodic(&[(2, 1)], &w), (0, 1), &w));
}

#[test]
fn a21_chart() {
    let w = ChartWindow { s: (-2, 9), x: (-12, 11), eps: vec![0] };
    let c = stext_chart(&make_a(2, 1).unwrap(), &w, budget()).unwrap();
    assert_eq!(compare_periodic(&c, &A21), (true, true, true));
}

#[test]
fn a20_chart() {
    let w = ChartWindow { s: (-2, 9), x: (-12, 11), eps: vec![0] };
    let c = stext_chart(&make_a(2, 0).unwrap(), &w, budget()).unwrap();
    assert_eq!(compare_periodic(&c, &A20), (true, true, true));
}

#[test]
fn named_classes_are_unique_and_detected_by_the_extension() {
    for k in 1..=3 {
        for eps in 0..=1 {
            let mu = named_class(NamedClass::Mu { k, eps }).unwrap();
            assert!(!mu.is_zero());
            let (_, nonzero) = connecting_map(k, eps).unwrap();
            assert!(nonzero, "k={k} eps={eps}");
        }
        assert_eq!(named_class(NamedClass::Lambda { k }).unwrap().adams(), (-3, k as i32));
        assert!(lambda_is_preimage(k).unwrap(), "k={k}");
        assert_eq!(named_class(NamedClass::Nu { k }).unwrap().adams(), (1, k as i32 + 2));
    }
}

/// `h0^n` composed along the chart, from cell `(s,t,ε)`.
fn h0_power_rank(c: &ExtChart, n: usize, s: i32, t: i32, e: u8) -> usize {
    let mut m: Option<a1_core::gf2::BitMatrix> = None;
    for i in 0..n as i32 {
        let Some(step) = c.h0.get(&(s + i, t + i, e)) else {
            return 0;
        };
        m = Some(match m {
            None => step.clone(),
            Some(prev) => step.mul(&prev),
        });
    }
    m.map(|m| m.rank()).unwrap_or(0)
}

#[test]
fn a_family_relations() {
    use ExtGen::*;
    let eq = |x: &StextClass, y: &StextClass| classes_equal(x, y, budget()).unwrap();
    for k in 1..=4u32 {
        let ku = k as usize;
        // ε = 1.
        let lambda = named_class(NamedClass::Lambda { k }).unwrap();
        let mu = named_class(NamedClass::Mu { k, eps: 1 }).unwrap();
        for g in [A, Kappa, H0] {
            assert!(multiply(g, &lambda).unwrap().is_zero(), "k={k}: {}·λ", g.name());
        }
        let lhs = multiply_power(H1, 2, &lambda).unwrap();
        let rhs = multiply_power(H0, ku + 1, &mu).unwrap();
        assert!(!rhs.is_zero(), "k={k}: h0^(k+1)μ ≠ 0");
        assert_eq!(eq(&lhs, &rhs), Some(true), "k={k}: h1²λ = h0^(k+1)μ");
        assert!(multiply_power(H0, ku, &multiply(Kappa, &mu).unwrap()).unwrap().is_zero(), "k={k}: h0^k κμ = 0");
        let a = make_a(k, 1).unwrap();
        let w = ChartWindow { s: (-3, 3 + k as i32 + 4), x: (-4, 11), eps: vec![0, 1] };
        let c = stext_chart(&a, &w, budget()).unwrap();
        for &(s, t, e) in c.dims.keys() {
            if s + k as i32 + 2 <= w.s.1 {
                assert_eq!(h0_power_rank(&c, ku + 2, s, t, e), 0, "k={k}: h0^(k+2) at {:?}", (s, t, e));
            }
        }
        // ε = 0.
        let nu = named_class(NamedClass::Nu { k }).unwrap();
        let mu = named_class(NamedClass::Mu { k, eps: 0 }).unwrap();
        for g in [A, Kappa, H0] {
            assert!(multiply(g, &nu).unwrap().is_zero(), "k={k}: {}·ν", g.name());
        }
        let lhs = multiply_power(H1, 2, &nu).unwrap();
        let rhs = multiply_power(H0, ku, &multiply(A, &mu).unwrap()).unwrap();
        assert!(!rhs.is_zero());
        assert_eq!(eq(&lhs, &rhs), Some(true), "k={k}: h1²ν = h0^k aμ");
        assert!(multiply_power(H0, ku + 1, &mu).unwrap().is_zero(), "k={k}: h0^(k+1)μ = 0");
        assert!(!multiply_power(H0, ku, &mu).unwrap().is_zero(), "k={k}: h0^k μ ≠ 0");
    }
}

#[test]
fn b_periodicity_on_q0_acyclic_modules() {
    let w = ChartWindow::new((-3, 4), (-8, 8));
    let mut mods = vec![z_module(), make_a(1, 0).unwrap(), make_a(2, 1).unwrap(), trunc_projective(1, 4).unwrap()];
    mods.push(trunc_projective(3, 6).unwrap());
    for m in mods {
        assert!(b_periodicity_failures(&m, &w, budget()).unwrap().is_empty(), "{}", m.name());
    }
    // Not an isomorphism for F.
    assert!(!b_periodicity_failures(&unit_module(), &w, budget()).unwrap().is_empty());
}

#[test]
fn vanishing_band_on_q0_acyclic_modules() {
    let w = ChartWindow::new((-4, 6), (-14, 14));
    for m in [z_module(), make_a(1, 1).unwrap(), make_a(3, 0).unwrap(), trunc_projective(1, 6).unwrap()] {
        let c = stext_chart(&m, &w, budget()).unwrap();
        assert!(vanishing_violations(&m, &c).unwrap().is_empty(), "{}", m.name());
    }
}
