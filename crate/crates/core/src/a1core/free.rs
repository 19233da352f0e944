//! Free A(1)-modules, minimal generators and projective covers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::algebra::{self, A1Elt, A1_DIM, BASIS_DEGREES, SQ1, SQ2, TOP_DEGREE};
use super::module::A1Module;
use super::morphism::Morphism;
use crate::gf2::{BitMatrix, BitVector, Solver};

/// The regular module A(1), basis in degree `d` = basis elements of degree `d`
/// in index order.
pub fn a1_regular() -> A1Module {
    static REG: OnceLock<A1Module> = OnceLock::new();
    REG.get_or_init(|| {
        let idx = |d: i32| algebra::basis_in_degree(d).collect::<Vec<_>>();
        let dims: Vec<usize> = (0..=TOP_DEGREE).map(algebra::dim_in_degree).collect();
        let op = |g: usize, step: i32| {
            move |n: i32| {
                let src = idx(n);
                let dst = idx(n + step);
                let mut m = BitMatrix::zeros(dst.len(), src.len());
                for (c, &b) in src.iter().enumerate() {
                    if let Some(p) = algebra::product(g, b) {
                        let r = dst.iter().position(|&x| x == p).expect("degrees add");
                        m.set(r, c, true);
                    }
                }
                m
            }
        };
        A1Module::from_fns("A(1)", 0, dims, op(SQ1, 1), op(SQ2, 2)).expect("A(1) is a valid module")
    })
    .clone()
}

/// A free module on generators of given degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    gens: Vec<i32>,
}

impl FreeModule {
    pub fn new(gens: Vec<i32>) -> Self {
        FreeModule { gens }
    }

    pub fn gens(&self) -> &[i32] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Basis of degree `n` as (generator index, A(1)-basis index), generator-major.
    pub fn basis(&self, n: i32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (g, &d) in self.gens.iter().enumerate() {
            for b in algebra::basis_in_degree(n - d) {
                out.push((g, b));
            }
        }
        out
    }

    pub fn dim(&self, n: i32) -> usize {
        self.gens.iter().map(|&d| algebra::dim_in_degree(n - d)).sum()
    }

    /// Position of `(g, b)` in the degree-`n` basis.
    pub fn index(&self, n: i32, g: usize, b: usize) -> usize {
        self.basis(n).iter().position(|&x| x == (g, b)).expect("basis element in this degree")
    }

    /// The module ⊕ Σ^{d_g} A(1), with bases ordered as [`FreeModule::basis`].
    pub fn as_module(&self) -> A1Module {
        let reg = a1_regular();
        let parts: Vec<A1Module> = self.gens.iter().map(|&d| reg.suspend(d)).collect();
        A1Module::sum_of(&parts).with_name(&format!("free{:?}", self.gens))
    }

    /// Decomposes a degree-`n` vector into per-generator A(1) coefficients.
    pub fn coefficients(&self, n: i32, v: &BitVector) -> Vec<A1Elt> {
        let mut out = vec![A1Elt::ZERO; self.gens.len()];
        for (pos, (g, b)) in self.basis(n).into_iter().enumerate() {
            if v.get(pos) {
                out[g] = out[g].add(A1Elt::basis(b));
            }
        }
        out
    }

    /// Left multiplication by the basis element `b` from degree `n`.
    pub fn left_mul(&self, b: usize, n: i32, v: &BitVector) -> BitVector {
        let src = self.basis(n);
        let tgt_deg = n + BASIS_DEGREES[b];
        let tgt = self.basis(tgt_deg);
        let mut out = BitVector::zeros(tgt.len());
        for pos in v.ones() {
            let (g, w) = src[pos];
            if let Some(p) = algebra::product(b, w) {
                let i = tgt.iter().position(|&x| x == (g, p)).expect("product stays in the summand");
                out.flip(i);
            }
        }
        out
    }
}

/// A minimal projective cover `P → M`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub free: FreeModule,
    /// `free` as a module.
    pub module: A1Module,
    /// Images of the generators in `M`.
    pub gen_images: Vec<(i32, BitVector)>,
    /// The surjection.
    pub map: Morphism,
}

/// The map from a free module determined by generator images.
pub fn free_map(free: &FreeModule, pmod: &A1Module, target: &A1Module, images: &[BitVector]) -> Morphism {
    let mut maps = BTreeMap::new();
    for n in pmod.degrees() {
        let basis = free.basis(n);
        let mut m = BitMatrix::zeros(target.dim(n), basis.len());
        for (c, (g, b)) in basis.into_iter().enumerate() {
            let img = target.act(b, free.gens()[g], &images[g]);
            for r in img.ones() {
                m.set(r, c, true);
            }
        }
        maps.insert(n, m);
    }
    Morphism::new_unchecked(pmod, target, maps).expect("free map has consistent shapes")
}

impl ProjectiveCover {
    /// Minimal cover on the minimal generators of `m`.
    pub fn new(m: &A1Module) -> Self {
        let gens = m.minimal_generators();
        let free = FreeModule::new(gens.iter().map(|(d, _)| *d).collect());
        let module = free.as_module();
        let images: Vec<BitVector> = gens.iter().map(|(_, v)| v.clone()).collect();
        let map = free_map(&free, &module, m, &images);
        debug_assert!(map.is_surjective());
        ProjectiveCover { free, module, gen_images: gens, map }
    }

    /// Per-degree solvers for lifting elements of `M` to `P`.
    pub fn section_solvers(&self) -> BTreeMap<i32, Solver> {
        self.map.target.degrees().map(|n| (n, Solver::new(&self.map.at(n)))).collect()
    }
}

/// Number of free summands, read off as the rank of the top class action.
pub fn free_rank(m: &A1Module) -> usize {
    m.degrees().map(|n| m.basis_action(algebra::TOP, n).rank()).sum()
}

/// Degrees of the generators of the free summands.
pub fn free_summand_degrees(m: &A1Module) -> Vec<i32> {
    let mut out = Vec::new();
    for n in m.degrees() {
        let r = m.basis_action(algebra::TOP, n).rank();
        out.extend(std::iter::repeat_n(n, r));
    }
    out
}

/// Dimension of A(1) summed over basis elements; kept for documentation.
pub const FREE_DIM: usize = A1_DIM;
