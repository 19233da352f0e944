//! Splitting off free summands (reduction) and the E(1)-restriction test.

use std::collections::BTreeMap;

use super::algebra::{self, A1_DIM, BASIS_DEGREES, TOP, TOP_DEGREE};
use super::margolis::margolis;
use super::module::{A1Module, ModuleError};
use super::morphism::Morphism;
use crate::gf2::{BitMatrix, BitVector, Subspace};

/// Result of splitting `m ≅ F ⊕ m^red` with `F` free.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Number of free summands split off.
    pub free_rank: usize,
    /// Generator degrees of the free summands, in extraction order.
    pub free_degrees: Vec<i32>,
    /// The reduced complement.
    pub reduced: A1Module,
    /// Split injection `reduced → m`.
    pub inclusion: Morphism,
    /// A(1)-linear retraction `m → reduced` with `retraction ∘ inclusion = id`.
    pub retraction: Morphism,
}

/// Splits off free summands until Sq²Sq²Sq² acts trivially.
///
/// Extraction order: lowest degree first, first basis vector with nonzero
/// top action.  Errors if the module is flagged as a truncation window that
/// is too narrow to contain a top class (never the case for finite modules).
pub fn reduce(m: &A1Module) -> Result<Reduction, ModuleError> {
    if let Some((lo, hi)) = m.window() {
        if hi < lo {
            return Err(ModuleError::Input("empty truncation window".into()));
        }
    }
    let mut current = m.clone();
    let mut inclusion = Morphism::identity(m);
    let mut retraction = Morphism::identity(m);
    let mut free_degrees = Vec::new();
    while let Some((n, j)) = find_free_generator(&current) {
        let (complement, incl, retr) = split_once(&current, n, j);
        inclusion = incl.then(&inclusion);
        retraction = retraction.then(&retr);
        current = complement;
        free_degrees.push(n);
    }
    let reduced = current.with_name(&format!("red({})", m.name())).with_window(m.window())?;
    let inclusion = Morphism::new_unchecked(&reduced, m, inclusion.blocks().clone())?;
    let retraction = Morphism::new_unchecked(m, &reduced, retraction.blocks().clone())?;
    Ok(Reduction { free_rank: free_degrees.len(), free_degrees, reduced, inclusion, retraction })
}

/// Lowest degree `n` and first basis index `j` with nonzero top action.
fn find_free_generator(m: &A1Module) -> Option<(i32, usize)> {
    for n in m.degrees() {
        let t = m.basis_action(TOP, n);
        if let Some(j) = (0..t.cols()).find(|&c| !t.column(c).is_zero()) {
            return Some((n, j));
        }
    }
    None
}

/// Splits the free summand generated by `e_j` in degree `n`.
///
/// Uses the Frobenius form of A(1): with λ a coordinate functional on degree
/// `n+6` that is nonzero on `top·x`, the map ψ(v) = the unique `a` with
/// ⟨c, a⟩ = λ(c·v) for all `c` is A(1)-linear, restricts to an isomorphism on
/// A(1)·x, and its kernel is a complement.
fn split_once(m: &A1Module, n: i32, j: usize) -> (A1Module, Morphism, Morphism) {
    let x = BitVector::unit(m.dim(n), j);
    let y = m.act(TOP, n, &x);
    let lambda = y.first_one().expect("top action is nonzero");
    // ψ_d : m^d → A(1)^{d-n}, as a matrix with rows indexed by the basis of
    // A(1) in degree d-n.
    let mut psi: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    for d in m.degrees() {
        let k = d - n;
        if !(0..=TOP_DEGREE).contains(&k) {
            continue;
        }
        let a_basis: Vec<usize> = algebra::basis_in_degree(k).collect();
        let c_basis: Vec<usize> = algebra::basis_in_degree(TOP_DEGREE - k).collect();
        let pairing =
            BitMatrix::from_fn(c_basis.len(), a_basis.len(), |r, c| algebra::frobenius_pairing(c_basis[r], a_basis[c]));
        let pinv = pairing.inverse().expect("Frobenius pairing is nondegenerate");
        let mut lam = BitMatrix::zeros(c_basis.len(), m.dim(d));
        for (r, &c) in c_basis.iter().enumerate() {
            let act = m.basis_action(c, d);
            for col in 0..m.dim(d) {
                if act.get(lambda, col) {
                    lam.set(r, col, true);
                }
            }
        }
        psi.insert(d, pinv.mul(&lam));
    }
    // The complement ker ψ.
    let spaces: BTreeMap<i32, Subspace> = m
        .degrees()
        .map(|d| {
            let s = match psi.get(&d) {
                Some(p) => Subspace::from_vectors(m.dim(d), &p.kernel_basis()),
                None => Subspace::full(m.dim(d)),
            };
            (d, s)
        })
        .collect();
    let sub = m.submodule(spaces.clone());
    let complement = sub.module.clone();
    let inclusion = sub.inclusion_map();
    // Retraction v ↦ v − ψ(v)·x, written in the complement's echelon basis.
    let mut rmaps = BTreeMap::new();
    for d in m.degrees() {
        let dim = m.dim(d);
        let space = &spaces[&d];
        let mut r = BitMatrix::zeros(space.dim(), dim);
        let xs: Vec<(usize, BitVector)> = match psi.get(&d) {
            Some(_) => algebra::basis_in_degree(d - n).map(|b| (b, m.act(b, n, &x))).collect(),
            None => Vec::new(),
        };
        for c in 0..dim {
            let mut v = BitVector::unit(dim, c);
            if let Some(p) = psi.get(&d) {
                let coeffs = p.column(c);
                for (i, (_, bx)) in xs.iter().enumerate() {
                    if coeffs.get(i) {
                        v.add_assign(bx);
                    }
                }
            }
            let coords = space.coords(&v).expect("v − ψ(v)x lies in ker ψ");
            for i in coords.ones() {
                r.set(i, c, true);
            }
        }
        rmaps.insert(d, r);
    }
    let retraction = Morphism::new_unchecked(m, &complement, rmaps).expect("retraction has consistent shapes");
    debug_assert!(retraction.check_linear().is_ok());
    (complement, inclusion, retraction)
}

/// Result of restricting to E(1) = Λ(Q₀, Q₁) and discarding free summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Reduction {
    /// Number of E(1)-free summands (each of dimension 4).
    pub free_rank: usize,
    /// Degreewise dimensions of the E(1)-reduced part.
    pub reduced_dims: BTreeMap<i32, usize>,
    /// Total Margolis dimension; the restriction is indecomposable after
    /// reduction exactly when this is 2.
    pub margolis_total: usize,
}

impl E1Reduction {
    pub fn is_indecomposable(&self) -> bool {
        self.margolis_total == 2
    }
}

/// Splits E(1)-free summands, detected by Q₀Q₁ (the top class of E(1)).
///
/// Over a local Frobenius algebra the free summands generated in degree `n`
/// are counted by the rank of the top class acting out of degree `n`, so the
/// reduced dimensions follow without constructing the complement.
pub fn restrict_e1_reduce(m: &A1Module) -> E1Reduction {
    let mut dims = m.dims();
    let mut free_rank = 0;
    for n in m.degrees() {
        let q0q1 = m.q0(n + 3).mul(&m.q1(n));
        let r = q0q1.rank();
        free_rank += r;
        for shift in [0, 1, 3, 4] {
            if r > 0 {
                *dims.get_mut(&(n + shift)).expect("free summand lies in the support") -= r;
            }
        }
    }
    dims.retain(|_, d| *d > 0);
    let p = margolis(m);
    E1Reduction { free_rank, reduced_dims: dims, margolis_total: p.total(0) + p.total(1) }
}

/// Dimension of A(1) (exported for dimension accounting checks).
pub fn a1_dim() -> usize {
    A1_DIM
}

/// Degrees of the basis of A(1).
pub fn a1_degrees() -> [i32; A1_DIM] {
    BASIS_DEGREES
}
