//! Classification round-trips, tensor splittings and embedding probes.

use a1_core::classify::*;
use a1_core::families::*;
use a1_core::stable::{is_stably_iso, joker, picard_element, stable_hom, tensor, PicardIndex, SearchBudget};

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn examples() {
    let r = classify(&joker().suspend(2), budget()).unwrap();
    assert_eq!(r.tag, Tag::Picard(PicardIndex::new(0, 2, 1)));
    let z = z_module();
    assert!(classify(&tensor(&z, &z).unwrap(), budget()).unwrap().is_rejected());
    let p = trunc_projective(1, 6).unwrap();
    let r = classify(&p, budget()).unwrap();
    assert_eq!(r.tag.to_string(), "A_orbit d=-1 k=2 eps=0 t=0");
    assert!(replay(&p, &r, budget()));
}

#[test]
fn orbit_round_trip() {
    for k in 1..=4u32 {
        for eps in 0..=1u8 {
            for t in 0..4u8 {
                let x = orbit_member(k, eps, t as i32).unwrap();
                for d in -2..=2 {
                    let m = x.module.suspend(d);
                    let r = classify(&m, budget()).unwrap();
                    assert_eq!(r.tag, Tag::AOrbit { d, k, eps, t }, "{:?}", r.checked);
                    assert!(replay(&m, &r, budget()));
                }
            }
        }
    }
}

#[test]
fn z_family_round_trip() {
    for t in 0..4u8 {
        let x = orbit_member(0, 1, t as i32).unwrap();
        let r = classify(&x.module.suspend(1), budget()).unwrap();
        assert_eq!(r.tag, Tag::AOrbit { d: 1, k: 0, eps: 1, t });
    }
}

#[test]
fn picard_round_trip() {
    for s in -4..=4 {
        for t in -4..=4 {
            for eps in 0..=1 {
                let i = PicardIndex::new(s, t, eps);
                let r = classify(&picard_element(i), budget()).unwrap();
                assert_eq!(r.tag, Tag::Picard(i));
            }
        }
    }
}

#[test]
fn fir_round_trip() {
    for i in 1..=3 {
        for d in -2..=2 {
            let m = fi_r(i).unwrap().suspend(d + 1);
            assert_eq!(classify(&m, budget()).unwrap().tag, Tag::FiR { d, i });
        }
    }
}

#[test]
fn a_orbits_are_disjoint() {
    for k in 1..=3 {
        let a0 = make_a(k, 0).unwrap();
        for t in 0..4 {
            let x = orbit_member(k, 1, t).unwrap();
            assert!(is_stably_iso(&a0, &x.module, budget()).is_no(), "k={k} t={t}");
        }
    }
}

#[test]
fn tensor_predicate_examples() {
    assert!(!predict_tensor_split(1, 1, 0, 1));
    assert!(predict_tensor_split(1, 2, 1, 1));
    assert!(predict_tensor_split(2, 2, 0, 0));
}

#[test]
fn tensor_splittings() {
    for k in 1..=3 {
        for l in k..=3 {
            for eps in 0..=1 {
                for delta in 0..=1 {
                    let r = verify_tensor_split(k, l, eps, delta, budget()).unwrap();
                    assert!(r.consistent(), "k={k} l={l} eps={eps} delta={delta}: {r:?}");
                }
            }
        }
    }
}

#[test]
fn stable_maps_between_a_modules() {
    for k in 1..=3 {
        for l in 1..=3 {
            let d = stable_hom(&make_a(k, 1).unwrap(), &make_a(l, 1).unwrap()).stable_dim;
            assert_eq!(d, usize::from(k >= l), "k={k} l={l}");
        }
    }
    let h = a1_core::stable::hom(&make_a(2, 1).unwrap(), &make_a(1, 1).unwrap());
    assert_eq!(h.len(), 2);
}

#[test]
fn bottom_embeddings() {
    for (k, eps) in [(1, 0), (2, 1), (3, 0)] {
        let r = probe_bottom_embedding(&make_a(k, eps).unwrap(), budget()).unwrap();
        assert_eq!(r.shift, -3);
        assert!(r.found.contains(&("S3 Om^-1 J".to_string(), "M".to_string())), "{r:?}");
    }
    let r = probe_bottom_embedding(&p0_trunc(24).unwrap(), budget()).unwrap();
    assert!(r.hypotheses, "{r:?}");
    assert!(r.found.contains(&("F".to_string(), "M".to_string())), "{r:?}");
}
