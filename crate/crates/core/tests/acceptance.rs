//! Acceptance run: fourteen criteria, one `PASS`/`FAIL` line each.
//!
//! Expected values are computed here from closed formulas and hand-entered
//! charts, not from the library's own predictions.  A criterion whose
//! stated claim disagrees with the computation is listed in
//! [`EXPECTED_FAIL`]; the run succeeds when every outcome matches its
//! expectation.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use a1_core::a1core::margolis::{margolis, MargolisProfile};
use a1_core::a1core::module::A1Module;
use a1_core::a1core::reduce::reduce;
use a1_core::a1core::text::{build_module, write_module};
use a1_core::classify::{classify, verify_tensor_split, Tag};
use a1_core::cli::CORPUS_SEED;
use a1_core::ext::*;
use a1_core::families::*;
use a1_core::stable::*;
use common::*;

/// Criteria whose stated claim does not hold as computed.
///
/// 2: `h0` acts nontrivially on `𝓔xt(F, Z)` from Adams `(2,1)` to `(2,2)`
/// and its `b`-translates; the dots and `h1` lines agree with the expected chart.
const EXPECTED_FAIL: &[u32] = &[2];

type Outcome = Result<(bool, String), String>;

type Criterion = (u32, &'static str, fn() -> Outcome);

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn popcount(n: u32) -> i32 {
    let (mut n, mut c) = (n, 0);
    while n > 0 {
        c += (n & 1) as i32;
        n >>= 1;
    }
    c
}

fn valuation(n: u32) -> u32 {
    let (mut n, mut v) = (n, 0);
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    v
}

/// `(ΣΩ⁻¹)^j M`.
fn sigma_omega_inv(m: &A1Module, j: i32) -> Result<A1Module, String> {
    Ok(omega(m, -j).map_err(err)?.suspend(j))
}

fn profile(q0: &[i32], q1: &[i32]) -> MargolisProfile {
    let mut p = MargolisProfile::default();
    for &d in q0 {
        *p.q0.entry(d).or_insert(0) += 1;
    }
    for &d in q1 {
        *p.q1.entry(d).or_insert(0) += 1;
    }
    p
}

fn check_all(items: Vec<(String, bool)>) -> (bool, Vec<String>) {
    let failed: Vec<String> = items.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.clone()).collect();
    (failed.is_empty(), failed)
}

fn c1_unit_charts() -> Outcome {
    let start = Instant::now();
    let first = ChartWindow::new((0, 6), (0, 8));
    let a = ext_chart(&unit_module(), &first).map_err(err)?;
    let mut bad = unit_oracle_mismatches(&a, &first);
    let full = ChartWindow::new((-6, 6), (-11, 8));
    let b = stext_chart(&unit_module(), &full, budget()).map_err(err)?;
    bad.extend(unit_oracle_mismatches(&b, &full));
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(10);
    Ok((ok, format!("eps 0 and 1, x in [0,8] s in [0,6] and x in [-11,8] s in [-6,6]; mismatches {bad:?}; {elapsed:.2?}")))
}

fn c2_z_chart() -> Outcome {
    let w = ChartWindow { s: (-4, 8), x: (-12, 12), eps: vec![0] };
    let c = stext_chart(&z_module(), &w, budget()).map_err(err)?;
    let (dots, h1, h0) = compare_periodic(&c, &Z_EXPECTED);
    let h0_sources = h_support(&c, 0);
    Ok((
        dots && h1 && h0,
        format!("dots match {dots}, h1 match {h1}, h0 zero everywhere {h0} (h0 sources {h0_sources:?})"),
    ))
}

fn c3_a_charts() -> Outcome {
    let w = ChartWindow { s: (-2, 9), x: (-12, 11), eps: vec![0] };
    let a21 = compare_periodic(&stext_chart(&make_a(2, 1).map_err(err)?, &w, budget()).map_err(err)?, &A21);
    let a20 = compare_periodic(&stext_chart(&make_a(2, 0).map_err(err)?, &w, budget()).map_err(err)?, &A20);
    let ok = a21 == (true, true, true) && a20 == (true, true, true);
    Ok((ok, format!("(dots, h1, h0) A_2,1 {a21:?}, A_2,0 {a20:?}")))
}

/// Largest `n` with `h0^n` nonzero on the chart (source and target inside).
fn h0_height(c: &ExtChart, smax: i32) -> usize {
    let mut best = 0;
    for &(s, t, e) in c.dims.keys() {
        let mut n = best + 1;
        while s + n as i32 <= smax && c.h0_power_rank(n, s, t, e) > 0 {
            best = n;
            n += 1;
        }
    }
    best
}

fn c4_ake_relations() -> Outcome {
    let start = Instant::now();
    let mut items = Vec::new();
    for k in 1..=4u32 {
        for r in ake_relations(k, budget()).map_err(err)? {
            items.push((format!("k={k} {}", r.label), r.holds));
        }
        // Exact h0-heights on charts: k+1 for ε = 1, k for ε = 0.
        for eps in 0..=1u8 {
            let w = ChartWindow { s: (-3, k as i32 + 8), x: (-4, 11), eps: vec![0, 1] };
            let c = stext_chart(&make_a(k, eps).map_err(err)?, &w, budget()).map_err(err)?;
            let want = k as usize + eps as usize;
            let got = h0_height(&c, w.s.1);
            items.push((format!("k={k} eps={eps} h0-height {got} (want {want})"), got == want));
        }
    }
    let elapsed = start.elapsed();
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok && elapsed < Duration::from_secs(60), format!("{n} checks; failed {failed:?}; {elapsed:.2?}")))
}

fn c5_tensor_decomp() -> Outcome {
    let mut items = Vec::new();
    for k in 1..=3u32 {
        for l in k..=3u32 {
            for eps in 0..=1u8 {
                for delta in 0..=1u8 {
                    let splits = !(k == l && eps != delta);
                    let r = verify_tensor_split(k, l, eps, delta, budget()).map_err(err)?;
                    let ok = r.predicted == splits
                        && if splits { r.verdict.is_yes() } else { r.verdict.is_no() && r.obstruction_nonzero };
                    items.push((format!("A_{k},{eps} x A_{l},{delta}"), ok));
                }
            }
        }
    }
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok && n == 24, format!("{n} cases; failed {failed:?}")))
}

fn c6_identify_a_trunc() -> Outcome {
    let mut items = Vec::new();
    for n in 2..=8u32 {
        for m in 1..n {
            let k = n - m;
            let p = reduce(&trunc_projective(2 * m as i32 - 1, 2 * n as i32).map_err(err)?).map_err(err)?.reduced;
            let rhs = if m % 2 == 1 {
                let eps = if matches!(k % 4, 2 | 3) { 0 } else { 1 };
                make_a(k, eps).map_err(err)?.suspend(2 * m as i32 - 3)
            } else {
                let eps = if matches!(k % 4, 0 | 3) { 0 } else { 1 };
                omega(&make_a(k, eps).map_err(err)?, -1).map_err(err)?.suspend(2 * m as i32)
            };
            let ok = p.is_reduced() && rhs.is_reduced() && find_module_iso(&p, &rhs, budget()).is_yes();
            items.push((format!("P^{}_{}", 2 * n, 2 * m - 1), ok));
        }
    }
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok, format!("{n} module isomorphisms; failed {failed:?}")))
}

fn c7_identify_bg() -> Outcome {
    let mut items = Vec::new();
    for n in 1..=16u32 {
        let lhs = brown_gitler(BgKind::T, 2 * n).map_err(err)?.suspend(2 * n as i32);
        let v = valuation(n);
        let a = if v == 0 { z_module().suspend(3) } else { make_a(v, 1).map_err(err)? };
        let rhs = sigma_omega_inv(&a.suspend(-1), 1 - popcount(n))?;
        items.push((format!("n={n}"), is_stably_iso(&lhs, &rhs, budget()).is_yes()));
    }
    let (ok, failed) = check_all(items);
    Ok((ok, format!("16 stable isomorphisms; failed {failed:?}")))
}

fn c8_brown_gitler() -> Outcome {
    let mut items = Vec::new();
    for i in 0..=3u32 {
        let lhs = brown_gitler(BgKind::T0, 4 << i).map_err(err)?;
        let rhs = if i == 0 { sigma_omega_inv(&joker(), 1)? } else { sigma_omega_inv(&unit_module(), (1 << (i + 1)) - 1)? };
        items.push((format!("T0({})", 4 << i), is_stably_iso(&lhs, &rhs, budget()).is_yes()));
    }
    for n in 0..=8u32 {
        let want = profile(&[0], &[2 * (popcount(n) - 2 * n as i32)]);
        items.push((format!("profile T0({})", 4 * n), margolis(&brown_gitler(BgKind::T0, 4 * n).map_err(err)?) == want));
    }
    // From Σ^{2n}T(2n) ≃ (ΣΩ⁻¹)^{1−α(n)}Σ⁻¹A_{ν(n),1}: Q1 classes of A_{k,1}
    // sit in degrees 3 and 2(k+1) (those of Σ³Z in 2 and 3), and ΣΩ⁻¹
    // lowers Q1 degrees by 2.
    for n in 1..=16u32 {
        let v = valuation(n);
        let base = if v == 0 { [2, 3] } else { [3, 2 * (v as i32 + 1)] };
        let shift = -2 * (1 - popcount(n)) - 1 - 2 * n as i32;
        let want = profile(&[], &[base[0] + shift, base[1] + shift]);
        items.push((format!("profile T({})", 2 * n), margolis(&brown_gitler(BgKind::T, 2 * n).map_err(err)?) == want));
    }
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok, format!("{n} checks (weights <= 32); failed {failed:?}")))
}

fn c9_duality() -> Outcome {
    let mut items = Vec::new();
    let mut counts = Vec::new();
    for k in 1..=4u32 {
        let want = if k % 2 == 0 { 2 } else { 0 };
        let mut per_eps = Vec::new();
        for eps in 0..=1u8 {
            let a = make_a(k, eps).map_err(err)?;
            let (ki, e) = (k as i32, eps as i32);
            let rhs = omega(&dual(&a), ki + 2 + 2 * e).map_err(err)?.suspend(-(ki + 1 + 6 * e));
            items.push((format!("duality A_{k},{eps}"), is_stably_iso(&a, &rhs, budget()).is_yes()));
            let mut fixed = 0;
            for t in 0..4 {
                if dual_k_image(k, eps, t, budget()).map_err(err)? as i32 == t {
                    fixed += 1;
                }
            }
            items.push((format!("fixed points k={k} eps={eps}: {fixed}"), fixed == want));
            per_eps.push(fixed);
        }
        counts.push(per_eps);
    }
    let (ok, failed) = check_all(items);
    Ok((ok, format!("fixed-point counts by k (eps 0, 1) {counts:?}; failed {failed:?}")))
}

fn c10_unicity() -> Outcome {
    let mut table = Vec::new();
    let mut ok = true;
    for k in 1..=3u32 {
        let mut row = Vec::new();
        for l in 1..=3u32 {
            let d = stable_hom(&make_a(k, 1).map_err(err)?, &make_a(l, 1).map_err(err)?).stable_dim;
            ok &= d == usize::from(k >= l);
            row.push(d);
        }
        table.push(row);
    }
    let h = hom(&make_a(2, 1).map_err(err)?, &make_a(1, 1).map_err(err)?).len();
    Ok((ok && h == 2, format!("stable table {table:?}; dim hom(A_2,1, A_1,1) = {h}")))
}

fn c11_picard() -> Outcome {
    let b = budget();
    let z = z_module();
    let mut items = Vec::new();
    let jj = tensor(&joker(), &joker()).map_err(err)?;
    items.push(("J x J ~ F".to_string(), is_stably_iso(&jj, &unit_module(), b).is_yes()));
    let o4 = omega(&z, 4).map_err(err)?;
    items.push(("W^4 Z ~ S^12 Z".to_string(), is_stably_iso(&o4, &z.suspend(12), b).is_yes()));
    let o2 = omega(&z, 2).map_err(err)?;
    let jz = tensor(&joker(), &z).map_err(err)?.suspend(6);
    items.push(("W^2 Z ~ S^6 J x Z".to_string(), is_stably_iso(&o2, &jz, b).is_yes()));
    // Group law: every element against the generators, plus all pairs
    // whose sum stays in range with |s|, |t| <= 1.
    let gens = [PicardIndex::new(-1, 0, 0), PicardIndex::new(1, 0, 0), PicardIndex::new(0, 1, 0), PicardIndex::new(0, 0, 1)];
    let mut products = 0;
    for s in -3..=3 {
        for t in -3..=3 {
            for eps in 0..=1u8 {
                let i = PicardIndex::new(s, t, eps);
                let x = picard_element(i);
                let want = profile(&[t - s], &[t - 3 * s]);
                items.push((format!("profile {i:?}"), margolis(&x) == want));
                let mut others: Vec<PicardIndex> = gens.to_vec();
                if s.abs() <= 1 && t.abs() <= 1 {
                    for s2 in -1..=1 {
                        for t2 in -1..=1 {
                            others.push(PicardIndex::new(s2, t2, 1 - eps));
                        }
                    }
                }
                for g in others {
                    let sum = PicardIndex::new(s + g.s, t + g.t, (eps + g.eps) % 2);
                    let lhs = tensor(&x, &picard_element(g)).map_err(err)?;
                    products += 1;
                    items.push((format!("{i:?} + {g:?}"), is_stably_iso(&lhs, &picard_element(sum), b).is_yes()));
                }
            }
        }
    }
    let corpus = random_corpus(CORPUS_SEED, 50, 40);
    for m in &corpus {
        let om = omega(m, 1).map_err(err)?;
        let p = margolis(m);
        let shifted = MargolisProfile {
            q0: p.q0.iter().map(|(&d, &n)| (d + 1, n)).collect(),
            q1: p.q1.iter().map(|(&d, &n)| (d + 3, n)).collect(),
        };
        items.push((format!("shift law {}", m.name()), margolis(&om) == shifted));
    }
    let (ok, failed) = check_all(items);
    Ok((ok, format!("3 periodicities, 98 profiles, {products} products, 50 shift laws; failed {failed:?}")))
}

fn c12_classification() -> Outcome {
    let b = budget();
    let mut items = Vec::new();
    for k in 1..=4u32 {
        for eps in 0..=1u8 {
            for t in 0..4u8 {
                let x = orbit_member(k, eps, t as i32).map_err(err)?;
                for d in -2..=2 {
                    let r = classify(&x.module.suspend(d), b).map_err(err)?;
                    items.push((format!("S^{d} (S^-3 W)^{t} A_{k},{eps}"), r.tag == Tag::AOrbit { d, k, eps, t }));
                }
            }
        }
    }
    for s in -4..=4 {
        for t in -4..=4 {
            for eps in 0..=1u8 {
                let i = PicardIndex::new(s, t, eps);
                let r = classify(&picard_element(i), b).map_err(err)?;
                items.push((format!("{i:?}"), r.tag == Tag::Picard(i)));
            }
        }
    }
    let z = z_module();
    let r = classify(&tensor(&z, &z).map_err(err)?, b).map_err(err)?;
    items.push(("Z x Z rejected".into(), matches!(r.tag, Tag::Rejected(_))));
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok, format!("{n} round trips; failed {failed:?}")))
}

fn c13_toda() -> Outcome {
    let b = budget();
    let mut items = Vec::new();
    let st = toda_complex(8).map_err(err)?;
    let j = joker();
    let base = [
        unit_module(),
        omega(&j, -1).map_err(err)?.suspend(5),
        j.suspend(4),
        omega(&j, 1).map_err(err)?.suspend(3),
    ];
    for s in &st {
        let n = s.n as usize;
        let want = base[n % 4].suspend(8 * (n / 4) as i32);
        items.push((format!("K_{n} by periodicity"), is_stably_iso(&toda_k(s.n), &want, b).is_yes()));
        items.push((format!("splice n={n}"), s.kappa_matches));
        if n > 0 {
            items.push((format!("exact n={n}"), toda_exact_at(&st, n)));
        }
    }
    let w = ChartWindow::new((-2, 3), (-8, 8));
    for m in [z_module(), make_a(1, 1).map_err(err)?, make_a(2, 0).map_err(err)?] {
        for n in 0..=4 {
            let (bad, _) = toda_reindex_mismatches(&m, n, &w).map_err(err)?;
            items.push((format!("re-index {} n={n}", m.name()), bad.is_empty()));
        }
    }
    let n = items.len();
    let (ok, failed) = check_all(items);
    Ok((ok, format!("{n} checks; Ext^(s,t)(K_n, M) = Ext^(s+n,t+n)(F, M); failed {failed:?}")))
}

/// The relations of A(1), checked on every basis vector from the matrices.
fn relations_hold(m: &A1Module) -> bool {
    m.degrees().all(|n| {
        let sq1sq1 = m.sq1(n + 1).mul(&m.sq1(n));
        let sq2sq2 = m.sq2(n + 2).mul(&m.sq2(n));
        let sq121 = m.sq1(n + 3).mul(&m.sq2(n + 1)).mul(&m.sq1(n));
        sq1sq1.is_zero() && sq2sq2.add(&sq121).is_zero()
    })
}

/// Free rank from the top class: the rank of Sq²Sq²Sq² summed over degrees.
fn free_rank_from_top_class(m: &A1Module) -> usize {
    m.degrees().map(|n| m.sq2(n + 4).mul(&m.sq2(n + 2)).mul(&m.sq2(n)).rank()).sum()
}

fn convolve(a: &MargolisProfile, b: &MargolisProfile) -> MargolisProfile {
    let mut out = MargolisProfile::default();
    for (pa, pb, po) in [(&a.q0, &b.q0, &mut out.q0), (&a.q1, &b.q1, &mut out.q1)] {
        let mut acc: BTreeMap<i32, usize> = BTreeMap::new();
        for (&i, &x) in pa {
            for (&j, &y) in pb {
                *acc.entry(i + j).or_insert(0) += x * y;
            }
        }
        *po = acc;
    }
    out
}

fn negated(p: &MargolisProfile) -> MargolisProfile {
    MargolisProfile {
        q0: p.q0.iter().map(|(&d, &n)| (-d, n)).collect(),
        q1: p.q1.iter().map(|(&d, &n)| (-d, n)).collect(),
    }
}

fn c14_corpus() -> Outcome {
    let corpus = random_corpus(CORPUS_SEED, 220, 40);
    let small = [z_module(), joker(), question_mark()];
    let mut fails: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut note = |law: &'static str, ok: bool, name: &str| {
        let e = fails.entry(law).or_default();
        if !ok {
            e.push(name.to_string());
        }
    };
    let mut band_checked = 0;
    for (i, m) in corpus.iter().enumerate() {
        let name = m.name().to_string();
        note("size", m.total_dim() <= 40 && !m.is_zero(), &name);
        let round_trip = build_module(&write_module(m)).map(|r| r.same_structure(m)).unwrap_or(false);
        note("relations", m.validate().is_ok() && relations_hold(m) && round_trip, &name);
        let t = tensor(m, &small[i % 3]).map_err(err)?;
        let mut kunneth = margolis(&t) == convolve(&margolis(m), &margolis(&small[i % 3]));
        let other = &corpus[(i + 1) % corpus.len()];
        if m.total_dim() * other.total_dim() <= 400 {
            let t = tensor(m, other).map_err(err)?;
            kunneth &= margolis(&t) == convolve(&margolis(m), &margolis(other));
        }
        note("kunneth", kunneth, &name);
        let r = reduce(m).map_err(err)?;
        let accounting = m.total_dim() == 8 * r.free_rank + r.reduced.total_dim()
            && r.reduced.is_reduced()
            && r.free_rank == free_rank_from_top_class(m);
        note("reduce", accounting, &name);
        let d = dual(m);
        note("dual", dual(&d).same_structure(m) && margolis(&d) == negated(&margolis(m)), &name);
        let p = margolis(m);
        if p.q0.is_empty() && !p.q1.is_empty() {
            band_checked += 1;
            let d1 = *p.q1.keys().next().unwrap();
            let d2 = *p.q1.keys().next_back().unwrap();
            let (s0, s1) = (-3, 4);
            let w = ChartWindow::new((s0, s1), (2 * s0 - d2 - 6, 2 * s1 - d1 + 3));
            let c = stext_chart(m, &w, budget()).map_err(err)?;
            let inside = c.dims.keys().all(|&(s, t, _)| {
                let x = t - s;
                2 * s - d2 - 3 <= x && x <= 2 * s - d1
            });
            note("vanishing", inside, &name);
        }
    }
    let summary: Vec<String> = fails.iter().map(|(law, f)| format!("{law} {f:?}")).collect();
    let ok = fails.values().all(|f| f.is_empty()) && band_checked > 0;
    Ok((ok, format!("{} modules, seed {CORPUS_SEED:#x}, {band_checked} band checks; failures: {}", corpus.len(), summary.join(", "))))
}

fn main() {
    let criteria: [Criterion; 14] = [
        (1, "Ext charts of F and of the J-twist", c1_unit_charts),
        (2, "Ext chart of Z", c2_z_chart),
        (3, "Ext charts of A_2,1 and A_2,0", c3_a_charts),
        (4, "Ext relations of A_k,eps, k <= 4", c4_ake_relations),
        (5, "tensor splitting of A_k,eps x A_l,delta", c5_tensor_decomp),
        (6, "truncated projectives as A-family members", c6_identify_a_trunc),
        (7, "Brown-Gitler modules T(2n), n <= 16", c7_identify_bg),
        (8, "T0(4.2^i) and Brown-Gitler Margolis profiles", c8_brown_gitler),
        (9, "duality of A_k,eps and orbit fixed points", c9_duality),
        (10, "stable maps between A_k,1", c10_unicity),
        (11, "Picard group and periodicities", c11_picard),
        (12, "classification round trips", c12_classification),
        (13, "Toda complex", c13_toda),
        (14, "invariants on a random corpus", c14_corpus),
    ];
    let mut unexpected = Vec::new();
    for (n, title, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        let expected = !EXPECTED_FAIL.contains(&n);
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if pass == expected { "" } else { " [UNEXPECTED]" };
        println!("{tag} criterion {n:>2} {title}: {detail} ({:.2?}){note}", start.elapsed());
        if pass != expected {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all outcomes as expected (expected failures: {EXPECTED_FAIL:?})");
    } else {
        println!("acceptance: unexpected outcomes for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
