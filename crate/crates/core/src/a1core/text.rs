//! The plain-text module format.
//!
//! ```text
//! # comment
//! module Z
//! window -1 0            (optional)
//! gen x -1
//! gen y 0
//! sq1 x = y
//! sq2 a = b + c
//! ```
//!
//! Every id must be declared by a `gen` line before it is used; omitted `sq`
//! lines mean the operation is zero on that generator. The writer names the
//! basis element `i` of degree `n` as `x{n}_{i}`.

use std::collections::{BTreeMap, HashMap};

use crate::a1core::module::{A1Module, ModuleError};
use crate::gf2::{BitMatrix, BitVector};

fn parse_err(line: usize, msg: impl Into<String>) -> ModuleError {
    ModuleError::Parse { line, msg: msg.into() }
}

/// Parses and validates a module description.
///
/// Errors carry the line number (parse and degree errors) or the degree and
/// id of the first element violating a relation.
pub fn build_module(text: &str) -> Result<A1Module, ModuleError> {
    let mut name = String::from("M");
    let mut window = None;
    let mut ids: Vec<(String, i32, usize)> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    // (op, line, from, targets)
    let mut arrows: Vec<(u8, usize, usize, Vec<usize>)> = Vec::new();
    let mut seen_arrow: HashMap<(u8, usize), usize> = HashMap::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "module" => {
                if words.len() != 2 {
                    return Err(parse_err(line, "expected `module <name>`"));
                }
                name = words[1].to_string();
            }
            "window" => {
                if words.len() != 3 {
                    return Err(parse_err(line, "expected `window <lo> <hi>`"));
                }
                let lo: i32 = words[1].parse().map_err(|_| parse_err(line, format!("bad integer `{}`", words[1])))?;
                let hi: i32 = words[2].parse().map_err(|_| parse_err(line, format!("bad integer `{}`", words[2])))?;
                if lo > hi {
                    return Err(parse_err(line, format!("empty window [{lo}, {hi}]")));
                }
                window = Some((lo, hi));
            }
            "gen" => {
                if words.len() != 3 {
                    return Err(parse_err(line, "expected `gen <id> <degree>`"));
                }
                let id = words[1];
                if id.contains('=') || id.contains('+') {
                    return Err(parse_err(line, format!("invalid id `{id}`")));
                }
                let deg: i32 = words[2].parse().map_err(|_| parse_err(line, format!("bad degree `{}`", words[2])))?;
                if by_name.contains_key(id) {
                    return Err(parse_err(line, format!("id `{id}` declared twice")));
                }
                let e = dims.entry(deg).or_insert(0);
                by_name.insert(id.to_string(), ids.len());
                ids.push((id.to_string(), deg, *e));
                *e += 1;
            }
            op @ ("sq1" | "sq2") => {
                let op: u8 = if op == "sq1" { 1 } else { 2 };
                let rest = body[3..].trim();
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| parse_err(line, "expected `sqN <id> = <id> [+ <id>]*`"))?;
                let lookup = |s: &str| -> Result<usize, ModuleError> {
                    by_name.get(s).copied().ok_or_else(|| parse_err(line, format!("undeclared id `{s}`")))
                };
                let lhs = lhs.trim();
                if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                    return Err(parse_err(line, "expected a single id before `=`"));
                }
                let from = lookup(lhs)?;
                if let Some(prev) = seen_arrow.insert((op, from), line) {
                    return Err(parse_err(line, format!("sq{op} {lhs} already given on line {prev}")));
                }
                let mut targets = Vec::new();
                let rhs = rhs.trim();
                if rhs != "0" {
                    for term in rhs.split('+') {
                        let term = term.trim();
                        if term.is_empty() || term.contains(char::is_whitespace) {
                            return Err(parse_err(line, "malformed sum on the right of `=`"));
                        }
                        targets.push(lookup(term)?);
                    }
                }
                for &to in &targets {
                    let (fd, td) = (ids[from].1, ids[to].1);
                    if td != fd + op as i32 {
                        return Err(ModuleError::DegreeMismatch {
                            op: format!("sq{op} (line {line})"),
                            from: ids[from].0.clone(),
                            to: ids[to].0.clone(),
                            expected: op as i32,
                            from_deg: fd,
                            to_deg: td,
                        });
                    }
                }
                arrows.push((op, line, from, targets));
            }
            other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let dim = |n: i32| dims.get(&n).copied().unwrap_or(0);
    let mut s1: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    let mut s2: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    for (op, _, from, targets) in &arrows {
        let d = ids[*from].1;
        let store = if *op == 1 { &mut s1 } else { &mut s2 };
        let m = store.entry(d).or_insert_with(|| BitMatrix::zeros(dim(d + *op as i32), dim(d)));
        for &to in targets {
            m.flip(ids[to].2, ids[*from].2);
        }
    }
    check_relations(&ids, &dims, &s1, &s2)?;
    let m = A1Module::from_maps(&name, &dims, &s1, &s2)?;
    m.with_window(window)
}

/// Reports the first relation violation by id.
fn check_relations(
    ids: &[(String, i32, usize)],
    dims: &BTreeMap<i32, usize>,
    s1: &BTreeMap<i32, BitMatrix>,
    s2: &BTreeMap<i32, BitMatrix>,
) -> Result<(), ModuleError> {
    let dim = |n: i32| dims.get(&n).copied().unwrap_or(0);
    let get = |m: &BTreeMap<i32, BitMatrix>, n: i32, step: i32| {
        m.get(&n).cloned().unwrap_or_else(|| BitMatrix::zeros(dim(n + step), dim(n)))
    };
    for (id, n, i) in ids {
        let v = BitVector::unit(dim(*n), *i);
        let a1 = get(s1, *n, 1).mul_vec(&v);
        if !get(s1, n + 1, 1).mul_vec(&a1).is_zero() {
            return Err(ModuleError::Relation { relation: "Sq1Sq1 = 0".into(), degree: *n, element: id.clone() });
        }
        let a22 = get(s2, n + 2, 2).mul_vec(&get(s2, *n, 2).mul_vec(&v));
        let a121 = get(s1, n + 3, 1).mul_vec(&get(s2, n + 1, 2).mul_vec(&a1));
        if !a22.add(&a121).is_zero() {
            return Err(ModuleError::Relation { relation: "Sq2Sq2 = Sq1Sq2Sq1".into(), degree: *n, element: id.clone() });
        }
    }
    Ok(())
}

/// The writer's name for basis element `i` of degree `n`.
pub fn basis_id(n: i32, i: usize) -> String {
    format!("x{n}_{i}")
}

/// Serializes a module; [`build_module`] reads the result back to a module
/// with identical structure.
pub fn write_module(m: &A1Module) -> String {
    let mut out = String::new();
    let name: String = m.name().chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect();
    out.push_str(&format!("module {}\n", if name.is_empty() { "M" } else { &name }));
    if let Some((lo, hi)) = m.window() {
        out.push_str(&format!("window {lo} {hi}\n"));
    }
    if m.is_zero() {
        return out;
    }
    for n in m.degrees() {
        for i in 0..m.dim(n) {
            out.push_str(&format!("gen {} {n}\n", basis_id(n, i)));
        }
    }
    for n in m.degrees() {
        for op in [1u8, 2] {
            let a = m.sq(op, n);
            for i in 0..m.dim(n) {
                let col = a.column(i);
                if col.is_zero() {
                    continue;
                }
                let terms: Vec<String> = col.ones().map(|j| basis_id(n + op as i32, j)).collect();
                out.push_str(&format!("sq{op} {} = {}\n", basis_id(n, i), terms.join(" + ")));
            }
        }
    }
    out
}
