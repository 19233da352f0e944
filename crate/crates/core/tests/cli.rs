//! End-to-end checks of the `a1` binary: file round trips, exit codes and
//! output formats.

use std::path::PathBuf;
use std::process::{Command, Output};

use a1_core::a1core::text::build_module;
use a1_core::ext::{stext_chart, ChartWindow};
use a1_core::families::make_a;
use a1_core::stable::SearchBudget;

fn a1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a1")).args(args).output().expect("run a1")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("a1-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn family_output_builds_back() {
    let o = a1(&["family", "A", "2", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let m = build_module(&text).unwrap();
    assert!(m.same_structure(&make_a(2, 1).unwrap()));
    let p = scratch("a21.mod", &text);
    let b = a1(&["build", p.to_str().unwrap()]);
    assert!(b.status.success());
    assert_eq!(stdout(&b), text);
}

#[test]
fn margolis_report() {
    let o = a1(&["margolis", "@A:2:1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Q0 none"), "{out}");
    assert!(out.contains("Q1 3:1 6:1"), "{out}");
}

#[test]
fn stable_iso_and_classify() {
    let o = a1(&["stable-iso", "@BG_T:2", "@Z"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("YES"));
    let jj = stdout(&a1(&["op", "tensor", "@J", "@J"]));
    let p = scratch("jj.mod", &jj);
    let o = a1(&["stable-iso", p.to_str().unwrap(), "@F"]);
    assert_eq!(stdout(&o).lines().next(), Some("YES"));
    let o = a1(&["stable-iso", "@Z", "@J"]);
    assert_eq!(stdout(&o).lines().next(), Some("NO"));
    let o = a1(&["classify", "@trunc_projective:1:6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("A_orbit d=-1 k=2 eps=0 t=0"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(a1(&["family", "nope"]).status.code(), Some(2));
    assert_eq!(a1(&["family", "A", "2"]).status.code(), Some(2));
    assert_eq!(a1(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(a1(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_3_with_location() {
    let bad_degree = scratch("deg.mod", "module X\ngen a 0\ngen b 2\nsq1 a = b\n");
    let o = a1(&["build", bad_degree.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    // Sq²Sq² = Sq¹Sq²Sq¹ fails on `a`.
    let bad_rel = scratch("rel.mod", "module X\ngen a 0\ngen b 2\ngen c 4\nsq2 a = b\nsq2 b = c\n");
    let o = a1(&["build", bad_rel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`a`") || String::from_utf8_lossy(&o.stderr).contains(" a"));
    assert_eq!(a1(&["margolis", "/nonexistent/file.mod"]).status.code(), Some(3));
}

#[test]
fn stext_tsv_matches_library_chart() {
    let args = ["stext", "@A:2:1", "--smax", "6", "--trange", "-6:6"];
    let o = a1(&args);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out, stdout(&a1(&args)), "deterministic output");
    let w = ChartWindow::new((-6, 6), (-6, 6));
    let c = stext_chart(&make_a(2, 1).unwrap(), &w, SearchBudget::default()).unwrap();
    let mut cells = Vec::new();
    for line in out.lines().filter(|l| !l.starts_with('#')) {
        let f: Vec<i64> = line.split('\t').map(|x| x.parse().unwrap()).collect();
        cells.push(((f[0] as i32, f[1] as i32, f[2] as u8), f[3] as usize));
    }
    let want: Vec<_> = c.dims.iter().map(|(&k, &v)| (k, v)).collect();
    cells.sort();
    assert_eq!(cells, want);
}

#[test]
fn svg_is_deterministic() {
    let args = ["stext", "@Z", "--format", "svg"];
    let a = stdout(&a1(&args));
    assert!(a.starts_with("<svg") || a.starts_with("<?xml"));
    assert_eq!(a, stdout(&a1(&args)));
}

#[test]
fn verify_suites_exit_0() {
    for suite in ["orbit_duality", "identify_BG", "tensor_decomp"] {
        let o = a1(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    }
}
