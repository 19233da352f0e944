//! Independent descriptions of Ext charts shared by the integration tests:
//! the algebra structure of `𝓔xt(F, F)` and per-period dot lists for `Z`,
//! `A_{2,1}` and `A_{2,0}`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use a1_core::ext::{ChartWindow, ExtChart};

/// Normal monomials `h0^a h1^b κ^c α^d` of the first-quadrant algebra
/// `F[h0,h1,κ,α]/(h0h1, h1³, h1κ, κ²−h0²)`, keyed by Adams degree and `ε`.
pub fn algebra_monomials(xmax: i32, ymax: i32) -> BTreeMap<(i32, i32, u8), BTreeSet<[i32; 4]>> {
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for d in 0..=ymax {
        for c in 0..=1 {
            for b in 0..=2 {
                for a in 0..=ymax {
                    if b >= 1 && (a > 0 || c > 0) {
                        continue;
                    }
                    let (x, y) = (b + 4 * d, a + b + c + 2 * d);
                    if x <= xmax && y <= ymax {
                        out.entry((x, y, ((c + d) % 2) as u8)).or_default().insert([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Result of multiplying a normal monomial by `h0` (`which = 0`) or `h1`.
pub fn times_h(m: [i32; 4], which: usize) -> Option<[i32; 4]> {
    let [a, b, c, d] = m;
    match which {
        0 if b == 0 => Some([a + 1, b, c, d]),
        1 if a == 0 && c == 0 && b < 2 => Some([a, b + 1, c, d]),
        _ => None,
    }
}

/// Expected dimensions and h-ranks of `𝓔xt(F,F)` in Adams coordinates: the
/// algebra in the first quadrant plus its rotation about `(−5/2, −1/2)`, and
/// for `ε = 1` the extra pair `(−3,−1) → (−2,0)` joined by `h1`.
pub struct UnitOracle {
    pub dims: BTreeMap<(i32, i32, u8), usize>,
    pub h: [BTreeMap<(i32, i32, u8), usize>; 2],
}

pub fn unit_oracle() -> UnitOracle {
    let alg = algebra_monomials(20, 20);
    let mut dims = BTreeMap::new();
    let mut h = [BTreeMap::new(), BTreeMap::new()];
    let steps = [(0, 1), (1, 1)];
    for (&(x, y, e), ms) in &alg {
        *dims.entry((x, y, e)).or_insert(0) += ms.len();
        *dims.entry((-5 - x, -1 - y, e)).or_insert(0) += ms.len();
        for which in 0..2 {
            let r = ms.iter().filter(|m| times_h(**m, which).is_some()).count();
            if r > 0 {
                *h[which].entry((x, y, e)).or_insert(0) += r;
                // In the rotated part h maps rot(P + h) to rot(P).
                let (dx, dy) = steps[which];
                *h[which].entry((-5 - x - dx, -1 - y - dy, e)).or_insert(0) += r;
            }
        }
    }
    *dims.entry((-3, -1, 1)).or_insert(0) += 1;
    *dims.entry((-2, 0, 1)).or_insert(0) += 1;
    *h[1].entry((-3, -1, 1)).or_insert(0) += 1;
    UnitOracle { dims, h }
}

pub fn within(w: &ChartWindow, x: i32, y: i32) -> bool {
    (w.x.0..=w.x.1).contains(&x) && (w.s.0..=w.s.1).contains(&y)
}

/// Disagreements between a chart of `𝓔xt(F, F)` and [`unit_oracle`] on the
/// window, for dimensions and for `h0`/`h1` ranks whose target is in range.
pub fn unit_oracle_mismatches(chart: &ExtChart, w: &ChartWindow) -> Vec<String> {
    let o = unit_oracle();
    let mut bad = Vec::new();
    for e in 0..=1u8 {
        for y in w.s.0..=w.s.1 {
            for x in w.x.0..=w.x.1 {
                let want = o.dims.get(&(x, y, e)).copied().unwrap_or(0);
                let got = chart.dim_adams(x, y, e);
                if got != want {
                    bad.push(format!("dim at ({x},{y}) eps={e}: {got} != {want}"));
                }
                for which in 0..2 {
                    let (dx, dy) = [(0, 1), (1, 1)][which];
                    if !within(w, x + dx, y + dy) {
                        continue;
                    }
                    let want = o.h[which].get(&(x, y, e)).copied().unwrap_or(0);
                    let got = chart.h_rank(which, y, x + y, e);
                    if got != want {
                        bad.push(format!("h{which} at ({x},{y}) eps={e}: {got} != {want}"));
                    }
                }
            }
        }
    }
    bad
}

/// Expands per-period Adams positions by b-periodicity `(8, 4)`.
pub fn periodic(cells: &[(i32, i32)], w: &ChartWindow) -> BTreeSet<(i32, i32)> {
    let mut out = BTreeSet::new();
    for n in -4..=4 {
        for &(x, y) in cells {
            let (px, py) = (x + 8 * n, y + 4 * n);
            if within(w, px, py) {
                out.insert((px, py));
            }
        }
    }
    out
}

/// Adams positions of the nonzero cells with `ε = 0`.
pub fn support(chart: &ExtChart) -> BTreeSet<(i32, i32)> {
    chart.adams_dims(0).into_keys().collect()
}

/// Largest cell dimension with `ε = 0`.
pub fn max_cell_dim(chart: &ExtChart) -> usize {
    chart.adams_dims(0).into_values().max().unwrap_or(0)
}

pub fn h_support(chart: &ExtChart, which: usize) -> BTreeSet<(i32, i32)> {
    let m = if which == 0 { &chart.h0 } else { &chart.h1 };
    let step = [(0, 1), (1, 1)][which];
    let w = chart.window.as_ref().expect("chart window");
    let keys = m.keys().filter(|k| k.2 == 0).map(|&(s, t, _)| (t - s, s)).collect();
    sources(keys, step, w)
}

/// Keeps the sources whose target also lies in the window.
pub fn sources(cells: BTreeSet<(i32, i32)>, step: (i32, i32), w: &ChartWindow) -> BTreeSet<(i32, i32)> {
    cells.into_iter().filter(|&(x, y)| within(w, x + step.0, y + step.1)).collect()
}

/// Per-period dots and `h1`/`h0` sources of a chart drawn with
/// `b`-periodicity.
pub struct PeriodicChart {
    pub dots: &'static [(i32, i32)],
    pub h1: &'static [(i32, i32)],
    pub h0: &'static [(i32, i32)],
}

/// Expected `𝓔xt(F, Z)`, with no `h0` lines.
pub const Z_EXPECTED: PeriodicChart = PeriodicChart {
    dots: &[(0, 0), (1, 1), (2, 2), (2, 1), (3, 2), (4, 3)],
    h1: &[(0, 0), (1, 1), (2, 1), (3, 2)],
    h0: &[],
};

/// `𝓔xt(F, A_{2,1})`.
pub const A21: PeriodicChart = PeriodicChart {
    dots: &[(-3, 2), (-2, 3), (-1, 1), (-1, 2), (-1, 3), (-1, 4), (0, 2), (1, 3), (3, 4), (3, 5)],
    h1: &[(-3, 2), (-2, 3), (-1, 1), (0, 2)],
    h0: &[(-1, 1), (-1, 2), (-1, 3), (3, 4)],
};

/// `𝓔xt(F, A_{2,0})`.
pub const A20: PeriodicChart = PeriodicChart {
    dots: &[(-1, 1), (-1, 2), (-1, 3), (0, 2), (1, 3), (1, 4), (2, 5), (3, 4), (3, 5), (3, 6)],
    h1: &[(-1, 1), (0, 2), (1, 4), (2, 5)],
    h0: &[(-1, 1), (-1, 2), (3, 4), (3, 5)],
};

/// Which parts of a chart agree with an expected periodic chart:
/// `(dots, h1, h0)`; dots must be one-dimensional.
pub fn compare_periodic(chart: &ExtChart, want: &PeriodicChart) -> (bool, bool, bool) {
    let w = chart.window.as_ref().expect("chart window");
    let dots = support(chart) == periodic(want.dots, w) && max_cell_dim(chart) == 1;
    let h1 = h_support(chart, 1) == sources(periodic(want.h1, w), (1, 1), w);
    let h0 = h_support(chart, 0) == sources(periodic(want.h0, w), (0, 1), w);
    (dots, h1, h0)
}
