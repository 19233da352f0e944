//! Margolis cohomology H*(M, Q₀) and H*(M, Q₁).

use std::collections::BTreeMap;

use super::module::A1Module;
use super::morphism::Morphism;
use crate::gf2::{BitMatrix, BitVector, Solver, Subspace};

/// Per-degree dimensions of H*(M,Q₀) and H*(M,Q₁) (zero entries omitted).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MargolisProfile {
    pub q0: BTreeMap<i32, usize>,
    pub q1: BTreeMap<i32, usize>,
}

impl MargolisProfile {
    /// Profile from explicit lists of (degree, dimension).
    pub fn from_lists(q0: &[(i32, usize)], q1: &[(i32, usize)]) -> Self {
        let clean = |l: &[(i32, usize)]| l.iter().filter(|(_, d)| *d > 0).copied().collect();
        MargolisProfile { q0: clean(q0), q1: clean(q1) }
    }

    pub fn q(&self, j: usize) -> &BTreeMap<i32, usize> {
        if j == 0 {
            &self.q0
        } else {
            &self.q1
        }
    }

    pub fn total(&self, j: usize) -> usize {
        self.q(j).values().sum()
    }

    pub fn is_q0_acyclic(&self) -> bool {
        self.q0.is_empty()
    }

    pub fn is_q1_acyclic(&self) -> bool {
        self.q1.is_empty()
    }

    /// Shift Q₀ degrees by `a` and Q₁ degrees by `b`.
    pub fn shifted(&self, a: i32, b: i32) -> Self {
        MargolisProfile {
            q0: self.q0.iter().map(|(&n, &d)| (n + a, d)).collect(),
            q1: self.q1.iter().map(|(&n, &d)| (n + b, d)).collect(),
        }
    }

    /// Degreewise sum.
    pub fn plus(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for j in 0..2 {
            let dst = if j == 0 { &mut r.q0 } else { &mut r.q1 };
            for (&n, &d) in other.q(j) {
                *dst.entry(n).or_insert(0) += d;
            }
        }
        r
    }

    /// Graded convolution (the Künneth formula for tensor products).
    pub fn convolve(&self, other: &Self) -> Self {
        let mut r = MargolisProfile::default();
        for j in 0..2 {
            let dst = if j == 0 { &mut r.q0 } else { &mut r.q1 };
            for (&a, &da) in self.q(j) {
                for (&b, &db) in other.q(j) {
                    *dst.entry(a + b).or_insert(0) += da * db;
                }
            }
        }
        r
    }

    /// The part of the profile in degrees `[lo, hi]`.
    pub fn restricted(&self, lo: i32, hi: i32) -> Self {
        let keep = |m: &BTreeMap<i32, usize>| m.range(lo..=hi).map(|(&n, &d)| (n, d)).collect();
        MargolisProfile { q0: keep(&self.q0), q1: keep(&self.q1) }
    }

    /// Degrees of each class listed with multiplicity.
    pub fn degrees(&self, j: usize) -> Vec<i32> {
        self.q(j).iter().flat_map(|(&n, &d)| std::iter::repeat_n(n, d)).collect()
    }
}

/// The operator Q_j out of degree `n`, and its degree.
pub fn q_operator(m: &A1Module, j: usize, n: i32) -> BitMatrix {
    if j == 0 {
        m.q0(n)
    } else {
        m.q1(n)
    }
}

/// Degree of Q_j.
pub fn q_degree(j: usize) -> i32 {
    if j == 0 {
        1
    } else {
        3
    }
}

/// Computes the Margolis profile of a module.
pub fn margolis(m: &A1Module) -> MargolisProfile {
    let mut p = MargolisProfile::default();
    for j in 0..2 {
        let d = q_degree(j);
        for n in m.degrees() {
            let kernel = m.dim(n) - q_operator(m, j, n).rank();
            let image = q_operator(m, j, n - d).rank();
            let h = kernel - image;
            if h > 0 {
                if j == 0 {
                    p.q0.insert(n, h);
                } else {
                    p.q1.insert(n, h);
                }
            }
        }
    }
    p
}

/// Chosen cycle representatives for the Margolis cohomology of a module,
/// with a solver that reads off classes of arbitrary cycles.
#[derive(Clone, Debug)]
pub struct MargolisData {
    /// For each j and degree: representatives of a basis of H^n(M, Q_j).
    reps: [BTreeMap<i32, Vec<BitVector>>; 2],
    /// For each j and degree: solver for `[boundaries | reps] x = v`.
    solvers: [BTreeMap<i32, (usize, Solver)>; 2],
}

impl MargolisData {
    pub fn new(m: &A1Module) -> Self {
        let mut reps: [BTreeMap<i32, Vec<BitVector>>; 2] = [BTreeMap::new(), BTreeMap::new()];
        let mut solvers: [BTreeMap<i32, (usize, Solver)>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for j in 0..2 {
            let d = q_degree(j);
            for n in m.degrees() {
                let boundaries = q_operator(m, j, n - d).column_space();
                let cycles = q_operator(m, j, n).kernel_basis();
                let mut span = boundaries.clone();
                let mut r = Vec::new();
                for z in cycles {
                    if span.insert(&z) {
                        r.push(z);
                    }
                }
                if r.is_empty() {
                    continue;
                }
                let mut cols: Vec<BitVector> = boundaries.basis().to_vec();
                let nb = cols.len();
                cols.extend(r.iter().cloned());
                let solver = Solver::new(&BitMatrix::from_columns(m.dim(n), &cols));
                reps[j].insert(n, r);
                solvers[j].insert(n, (nb, solver));
            }
        }
        MargolisData { reps, solvers }
    }

    /// Basis representatives of H^n(M, Q_j).
    pub fn reps(&self, j: usize, n: i32) -> &[BitVector] {
        self.reps[j].get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Degrees where H(M, Q_j) is nonzero.
    pub fn degrees(&self, j: usize) -> Vec<i32> {
        self.reps[j].keys().copied().collect()
    }

    /// The class of a cycle in degree `n`, in the representative basis.
    pub fn class_of(&self, j: usize, n: i32, v: &BitVector) -> BitVector {
        match self.solvers[j].get(&n) {
            None => BitVector::zeros(0),
            Some((nb, s)) => {
                let x = s.solve(v).expect("vector is not a Q-cycle");
                x.slice(*nb, x.len() - nb)
            }
        }
    }
}

/// The matrix of H^n(f, Q_j) with respect to chosen representatives.
pub fn induced_map(f: &Morphism, src: &MargolisData, dst: &MargolisData, j: usize, n: i32) -> BitMatrix {
    let reps = src.reps(j, n);
    let cols: Vec<BitVector> = reps.iter().map(|z| dst.class_of(j, n, &f.apply(n, z))).collect();
    let rows = dst.reps(j, n).len();
    BitMatrix::from_columns(rows, &cols)
}

/// Whether `f` induces isomorphisms on both Margolis cohomologies.
pub fn induces_margolis_iso(f: &Morphism) -> bool {
    let a = MargolisData::new(&f.source);
    let b = MargolisData::new(&f.target);
    for j in 0..2 {
        let mut degs = a.degrees(j);
        degs.extend(b.degrees(j));
        degs.sort();
        degs.dedup();
        for n in degs {
            let m = induced_map(f, &a, &b, j, n);
            if m.rows() != m.cols() || !m.is_invertible() {
                return false;
            }
        }
    }
    true
}

/// Per-degree subspace of Q_j-cycles (kernel of Q_j).
pub fn cycles(m: &A1Module, j: usize, n: i32) -> Subspace {
    Subspace::from_vectors(m.dim(n), &q_operator(m, j, n).kernel_basis())
}
