//! Graded A(1)-modules given by Sq¹/Sq² action matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::algebra::{A1Elt, APPLICATION_ORDER, A1_DIM};
use crate::gf2::{BitMatrix, BitVector, Subspace};

/// Errors in module construction and validation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// An arrow does not raise degree by the operation's degree.
    #[error("degree mismatch: {op} {from} = {to} must raise degree by {expected}, but {from} has degree {from_deg} and {to} has degree {to_deg}")]
    DegreeMismatch { op: String, from: String, to: String, expected: i32, from_deg: i32, to_deg: i32 },
    /// The action violates Sq¹Sq¹ = 0 or Sq²Sq² = Sq¹Sq²Sq¹.
    #[error("relation {relation} fails in degree {degree} on basis element {element}")]
    Relation { relation: String, degree: i32, element: String },
    /// Matrix shapes inconsistent with the graded dimensions.
    #[error("shape error: {0}")]
    Shape(String),
    /// Degrees outside the declared window.
    #[error("window violation: {0}")]
    Window(String),
    /// An operation that needs a finite or windowed input got something else.
    #[error("input error: {0}")]
    Input(String),
}

#[derive(Clone, PartialEq, Eq)]
struct ModuleData {
    name: String,
    /// Degree of `dims[0]`.
    lo: i32,
    dims: Vec<usize>,
    /// `sq1[i]`: degree `lo+i` → `lo+i+1`, shape `dim(lo+i+1) × dim(lo+i)`.
    sq1: Vec<BitMatrix>,
    /// `sq2[i]`: degree `lo+i` → `lo+i+2`.
    sq2: Vec<BitMatrix>,
    window: Option<(i32, i32)>,
}

/// A finite graded A(1)-module over GF(2) in cohomological grading.
///
/// Cheap to clone: the data is shared and immutable after validation.
#[derive(Clone, PartialEq, Eq)]
pub struct A1Module(Arc<ModuleData>);

impl A1Module {
    /// The zero module.
    pub fn zero() -> Self {
        A1Module(Arc::new(ModuleData {
            name: "0".into(),
            lo: 0,
            dims: vec![],
            sq1: vec![],
            sq2: vec![],
            window: None,
        }))
    }

    /// Builds and validates a module from per-degree action matrices.
    ///
    /// `dims` maps degree → dimension; `sq1`/`sq2` give the matrix out of each
    /// degree (missing entries mean zero).
    pub fn from_maps(
        name: &str,
        dims: &BTreeMap<i32, usize>,
        sq1: &BTreeMap<i32, BitMatrix>,
        sq2: &BTreeMap<i32, BitMatrix>,
    ) -> Result<Self, ModuleError> {
        let support: Vec<i32> = dims.iter().filter(|(_, &d)| d > 0).map(|(&n, _)| n).collect();
        if support.is_empty() {
            for (&n, m) in sq1.iter().chain(sq2.iter()) {
                if !m.is_zero() {
                    return Err(ModuleError::Shape(format!("nonzero action out of empty degree {n}")));
                }
            }
            let mut z = Self::zero();
            Arc::make_mut(&mut z.0).name = name.into();
            return Ok(z);
        }
        let lo = support[0];
        let hi = *support.last().unwrap();
        let dim = |n: i32| dims.get(&n).copied().unwrap_or(0);
        let mut vd = Vec::new();
        let mut v1 = Vec::new();
        let mut v2 = Vec::new();
        for n in lo..=hi {
            vd.push(dim(n));
            for (src, ops, step) in [(sq1, &mut v1, 1), (sq2, &mut v2, 2)] {
                let m = match src.get(&n) {
                    Some(m) => {
                        if m.rows() != dim(n + step) || m.cols() != dim(n) {
                            return Err(ModuleError::Shape(format!(
                                "Sq{step} out of degree {n} has shape {}x{}, expected {}x{}",
                                m.rows(),
                                m.cols(),
                                dim(n + step),
                                dim(n)
                            )));
                        }
                        if n + step > hi {
                            BitMatrix::zeros(0, dim(n))
                        } else {
                            m.clone()
                        }
                    }
                    None => BitMatrix::zeros(if n + step > hi { 0 } else { dim(n + step) }, dim(n)),
                };
                ops.push(m);
            }
        }
        for (&n, m) in sq1.iter().chain(sq2.iter()) {
            if (n < lo || n > hi) && !m.is_zero() {
                return Err(ModuleError::Shape(format!("nonzero action out of empty degree {n}")));
            }
        }
        let m = A1Module(Arc::new(ModuleData { name: name.into(), lo, dims: vd, sq1: v1, sq2: v2, window: None }));
        m.validate()?;
        Ok(m)
    }

    /// Builds a module from closures (trusted internal constructor; still validated).
    pub fn from_fns(
        name: &str,
        lo: i32,
        dims: Vec<usize>,
        sq1: impl Fn(i32) -> BitMatrix,
        sq2: impl Fn(i32) -> BitMatrix,
    ) -> Result<Self, ModuleError> {
        let mut dm = BTreeMap::new();
        let mut m1 = BTreeMap::new();
        let mut m2 = BTreeMap::new();
        for (i, &d) in dims.iter().enumerate() {
            let n = lo + i as i32;
            dm.insert(n, d);
        }
        for (i, _) in dims.iter().enumerate() {
            let n = lo + i as i32;
            m1.insert(n, sq1(n));
            m2.insert(n, sq2(n));
        }
        Self::from_maps(name, &dm, &m1, &m2)
    }

    /// Checks both defining relations in every degree.
    pub fn validate(&self) -> Result<(), ModuleError> {
        for n in self.lo()..=self.hi() {
            let s11 = self.sq1(n + 1).mul(&self.sq1(n));
            if let Some(c) = first_nonzero_column(&s11) {
                return Err(ModuleError::Relation {
                    relation: "Sq1Sq1 = 0".into(),
                    degree: n,
                    element: format!("basis element {c} in degree {n}"),
                });
            }
            let s22 = self.sq2(n + 2).mul(&self.sq2(n));
            let s121 = self.sq1(n + 3).mul(&self.sq2(n + 1)).mul(&self.sq1(n));
            if let Some(c) = first_nonzero_column(&s22.add(&s121)) {
                return Err(ModuleError::Relation {
                    relation: "Sq2Sq2 = Sq1Sq2Sq1".into(),
                    degree: n,
                    element: format!("basis element {c} in degree {n}"),
                });
            }
        }
        if let Some((wlo, whi)) = self.window() {
            if !self.is_zero() && (self.lo() < wlo || self.hi() > whi) {
                return Err(ModuleError::Window(format!(
                    "support [{}, {}] not inside window [{wlo}, {whi}]",
                    self.lo(),
                    self.hi()
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// A copy with a different name.
    pub fn with_name(&self, name: &str) -> Self {
        let mut d = (*self.0).clone();
        d.name = name.into();
        A1Module(Arc::new(d))
    }

    /// A copy carrying truncation-window metadata.
    pub fn with_window(&self, window: Option<(i32, i32)>) -> Result<Self, ModuleError> {
        let mut d = (*self.0).clone();
        d.window = window;
        let m = A1Module(Arc::new(d));
        m.validate()?;
        Ok(m)
    }

    pub fn window(&self) -> Option<(i32, i32)> {
        self.0.window
    }

    pub fn is_zero(&self) -> bool {
        self.0.dims.is_empty()
    }

    /// Lowest degree with nonzero dimension (0 for the zero module).
    pub fn lo(&self) -> i32 {
        self.0.lo
    }

    /// Highest degree with nonzero dimension (`lo - 1` for the zero module).
    pub fn hi(&self) -> i32 {
        self.0.lo + self.0.dims.len() as i32 - 1
    }

    /// Degrees `lo..=hi` as an iterator.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo()..=self.hi()
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < self.lo() || n > self.hi() {
            0
        } else {
            self.0.dims[(n - self.lo()) as usize]
        }
    }

    /// Total dimension.
    pub fn total_dim(&self) -> usize {
        self.0.dims.iter().sum()
    }

    /// Map degree → dimension over the support.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees().filter(|&n| self.dim(n) > 0).map(|n| (n, self.dim(n))).collect()
    }

    /// The Sq¹ matrix out of degree `n` (shape `dim(n+1) × dim(n)`).
    pub fn sq1(&self, n: i32) -> BitMatrix {
        self.op_matrix(1, n)
    }

    /// The Sq² matrix out of degree `n` (shape `dim(n+2) × dim(n)`).
    pub fn sq2(&self, n: i32) -> BitMatrix {
        self.op_matrix(2, n)
    }

    fn op_matrix(&self, step: i32, n: i32) -> BitMatrix {
        let target = self.dim(n + step);
        let source = self.dim(n);
        if source == 0 || target == 0 {
            return BitMatrix::zeros(target, source);
        }
        let i = (n - self.lo()) as usize;
        let m = if step == 1 { &self.0.sq1[i] } else { &self.0.sq2[i] };
        debug_assert_eq!((m.rows(), m.cols()), (target, source));
        m.clone()
    }

    /// Matrix of Sqⁱ for `i ∈ {1,2}`.
    pub fn sq(&self, i: u8, n: i32) -> BitMatrix {
        match i {
            1 => self.sq1(n),
            2 => self.sq2(n),
            _ => panic!("only Sq1 and Sq2 generate A(1)"),
        }
    }

    /// Matrix of the basis element `b` of A(1) acting out of degree `n`.
    pub fn basis_action(&self, b: usize, n: i32) -> BitMatrix {
        let mut m = BitMatrix::identity(self.dim(n));
        let mut deg = n;
        for &g in APPLICATION_ORDER[b] {
            m = self.sq(g, deg).mul(&m);
            deg += g as i32;
        }
        m
    }

    /// Matrix of an arbitrary homogeneous element of degree `d` acting out of degree `n`.
    pub fn elt_action(&self, e: A1Elt, d: i32, n: i32) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.dim(n + d), self.dim(n));
        for b in e.terms() {
            debug_assert_eq!(super::algebra::BASIS_DEGREES[b], d);
            m.add_assign(&self.basis_action(b, n));
        }
        m
    }

    /// Action of a basis element on a vector in degree `n`.
    pub fn act(&self, b: usize, n: i32, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        let mut deg = n;
        for &g in APPLICATION_ORDER[b] {
            v = self.sq(g, deg).mul_vec(&v);
            deg += g as i32;
        }
        v
    }

    /// Q₀ = Sq¹ out of degree `n`.
    pub fn q0(&self, n: i32) -> BitMatrix {
        self.sq1(n)
    }

    /// Q₁ = Sq¹Sq² + Sq²Sq¹ out of degree `n`.
    pub fn q1(&self, n: i32) -> BitMatrix {
        let a = self.sq1(n + 2).mul(&self.sq2(n));
        let b = self.sq2(n + 1).mul(&self.sq1(n));
        a.add(&b)
    }

    /// Whether Sq²Sq²Sq² acts trivially.
    pub fn is_reduced(&self) -> bool {
        self.degrees().all(|n| self.basis_action(super::algebra::TOP, n).is_zero())
    }

    /// The degree shift Σᵗ.
    pub fn suspend(&self, t: i32) -> Self {
        let mut d = (*self.0).clone();
        if !d.dims.is_empty() {
            d.lo += t;
        }
        d.window = d.window.map(|(a, b)| (a + t, b + t));
        if t != 0 {
            d.name = format!("S^{t}({})", self.name());
        }
        A1Module(Arc::new(d))
    }

    /// Direct sum with block-diagonal action (basis of `self` first in each degree).
    pub fn direct_sum(&self, other: &A1Module) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo().min(other.lo());
        let hi = self.hi().max(other.hi());
        let dims: Vec<usize> = (lo..=hi).map(|n| self.dim(n) + other.dim(n)).collect();
        let block = |a: BitMatrix, b: BitMatrix| {
            let mut m = BitMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            m.add_block(0, 0, &a);
            m.add_block(a.rows(), a.cols(), &b);
            m
        };
        let name = format!("{} + {}", self.name(), other.name());
        Self::from_fns(
            &name,
            lo,
            dims,
            |n| block(self.sq1(n), other.sq1(n)),
            |n| block(self.sq2(n), other.sq2(n)),
        )
        .expect("direct sum of valid modules is valid")
    }

    /// Direct sum of a list of modules.
    pub fn sum_of(parts: &[A1Module]) -> Self {
        parts.iter().fold(A1Module::zero(), |acc, m| acc.direct_sum(m))
    }

    /// The submodule generated by the given homogeneous elements, with its
    /// inclusion matrices (columns are the chosen basis, in echelon form).
    pub fn submodule_generated(&self, gens: &[(i32, BitVector)]) -> Submodule {
        let mut spaces: BTreeMap<i32, Subspace> = BTreeMap::new();
        for n in self.degrees() {
            spaces.insert(n, Subspace::zero(self.dim(n)));
        }
        for (n, v) in gens {
            if let Some(s) = spaces.get_mut(n) {
                s.insert(v);
            } else {
                assert!(v.is_zero(), "generator outside the support");
            }
        }
        // Close upward degree by degree: everything in degree n is final once
        // degrees n-1 and n-2 have been pushed forward.
        for n in self.degrees() {
            let basis: Vec<BitVector> = spaces[&n].basis().to_vec();
            for (step, op) in [(1, self.sq1(n)), (2, self.sq2(n))] {
                if self.dim(n + step) == 0 {
                    continue;
                }
                let target = spaces.get_mut(&(n + step)).unwrap();
                for b in &basis {
                    target.insert(&op.mul_vec(b));
                }
            }
        }
        Submodule::from_spaces(self, spaces)
    }

    /// The submodule with the given per-degree subspaces, which must be closed.
    pub fn submodule(&self, spaces: BTreeMap<i32, Subspace>) -> Submodule {
        Submodule::from_spaces(self, spaces)
    }

    /// Elements of degree `n` annihilated by Sq¹ and Sq² (the socle in degree `n`).
    pub fn socle(&self, n: i32) -> Vec<BitVector> {
        let m = self.sq1(n).vstack(&self.sq2(n));
        m.kernel_basis()
    }

    /// Total socle dimension per degree.
    pub fn socle_dims(&self) -> BTreeMap<i32, usize> {
        self.degrees().map(|n| (n, self.socle(n).len())).filter(|(_, d)| *d > 0).collect()
    }

    /// Subspace `A⁺M` in degree `n` spanned by images of Sq¹ and Sq².
    pub fn decomposables(&self, n: i32) -> Subspace {
        let mut s = Subspace::zero(self.dim(n));
        for (step, op) in [(1i32, self.sq1(n - 1)), (2, self.sq2(n - 2))] {
            let _ = step;
            for c in op.columns() {
                s.insert(&c);
            }
        }
        s
    }

    /// Minimal generators: for each degree, unit vectors at the non-pivot
    /// positions of `A⁺M` (lowest degree first, first pivot).
    pub fn minimal_generators(&self) -> Vec<(i32, BitVector)> {
        let mut out = Vec::new();
        for n in self.degrees() {
            let dec = self.decomposables(n);
            for p in dec.complement_positions() {
                out.push((n, BitVector::unit(self.dim(n), p)));
            }
        }
        out
    }

    /// Whether the action on an element vanishes under Sq¹ and Sq².
    pub fn is_primitive(&self, n: i32, v: &BitVector) -> bool {
        self.sq1(n).mul_vec(v).is_zero() && self.sq2(n).mul_vec(v).is_zero()
    }

    /// Every basis element acting on every degree, for brute-force checks.
    pub fn all_basis_actions(&self) -> Vec<(usize, i32, BitMatrix)> {
        let mut out = Vec::new();
        for b in 0..A1_DIM {
            for n in self.degrees() {
                out.push((b, n, self.basis_action(b, n)));
            }
        }
        out
    }

    /// Structural equality up to name and window metadata.
    pub fn same_structure(&self, other: &A1Module) -> bool {
        self.dims() == other.dims()
            && self.degrees().all(|n| self.sq1(n) == other.sq1(n) && self.sq2(n) == other.sq2(n))
    }
}

fn first_nonzero_column(m: &BitMatrix) -> Option<usize> {
    (0..m.cols()).find(|&c| !m.column(c).is_zero())
}

impl fmt::Debug for A1Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A1Module({}; dims {:?})", self.name(), self.dims())
    }
}

/// A submodule together with the data to move between it and the ambient module.
#[derive(Clone, Debug)]
pub struct Submodule {
    /// The submodule as a module in its own right.
    pub module: A1Module,
    /// The ambient module.
    pub ambient: A1Module,
    /// Per-degree subspaces of the ambient module.
    pub spaces: BTreeMap<i32, Subspace>,
}

impl Submodule {
    fn from_spaces(ambient: &A1Module, spaces: BTreeMap<i32, Subspace>) -> Self {
        let dims: BTreeMap<i32, usize> = spaces.iter().map(|(&n, s)| (n, s.dim())).collect();
        let mut m1 = BTreeMap::new();
        let mut m2 = BTreeMap::new();
        for (&n, s) in &spaces {
            for (step, op, store) in [(1, ambient.sq1(n), &mut m1), (2, ambient.sq2(n), &mut m2)] {
                let tdim = dims.get(&(n + step)).copied().unwrap_or(0);
                let mut mat = BitMatrix::zeros(tdim, s.dim());
                if tdim > 0 {
                    let tgt = &spaces[&(n + step)];
                    for (j, b) in s.basis().iter().enumerate() {
                        let img = op.mul_vec(b);
                        let c = tgt.coords(&img).expect("subspaces are not closed under the action");
                        for i in c.ones() {
                            mat.set(i, j, true);
                        }
                    }
                }
                store.insert(n, mat);
            }
        }
        let module = A1Module::from_maps(&format!("sub({})", ambient.name()), &dims, &m1, &m2)
            .expect("closed subspaces give a valid module");
        Submodule { module, ambient: ambient.clone(), spaces }
    }

    /// Inclusion matrix in degree `n` (ambient dim × sub dim).
    pub fn inclusion(&self, n: i32) -> BitMatrix {
        match self.spaces.get(&n) {
            Some(s) => s.basis_matrix(),
            None => BitMatrix::zeros(self.ambient.dim(n), 0),
        }
    }

    /// The quotient of the ambient module by this submodule.
    pub fn quotient(&self) -> Quotient {
        Quotient::new(&self.ambient, &self.spaces)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.dim()).sum()
    }
}

/// A quotient module `M / S` with the projection data.
///
/// The quotient basis in degree `n` is the set of unit vectors of `M^n` at
/// the non-pivot positions of `S^n`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: A1Module,
    pub ambient: A1Module,
    spaces: BTreeMap<i32, Subspace>,
    positions: BTreeMap<i32, Vec<usize>>,
}

impl Quotient {
    /// Quotient by closed per-degree subspaces.
    pub fn new(ambient: &A1Module, spaces: &BTreeMap<i32, Subspace>) -> Self {
        let mut positions = BTreeMap::new();
        let mut full = BTreeMap::new();
        for n in ambient.degrees() {
            let s = spaces.get(&n).cloned().unwrap_or_else(|| Subspace::zero(ambient.dim(n)));
            positions.insert(n, s.complement_positions());
            full.insert(n, s);
        }
        let mut q = Quotient { module: A1Module::zero(), ambient: ambient.clone(), spaces: full, positions };
        let dims: BTreeMap<i32, usize> = q.positions.iter().map(|(&n, p)| (n, p.len())).collect();
        let mut m1 = BTreeMap::new();
        let mut m2 = BTreeMap::new();
        for n in ambient.degrees() {
            for (step, store) in [(1, &mut m1), (2, &mut m2)] {
                let op = ambient.sq(step as u8, n);
                let proj = q.projection(n + step);
                let incl = q.section(n);
                store.insert(n, proj.mul(&op).mul(&incl));
            }
        }
        q.module = A1Module::from_maps(&format!("quot({})", ambient.name()), &dims, &m1, &m2)
            .expect("quotient by a closed submodule is a valid module");
        q
    }

    /// Projection matrix `M^n → (M/S)^n`.
    pub fn projection(&self, n: i32) -> BitMatrix {
        let Some(pos) = self.positions.get(&n) else {
            return BitMatrix::zeros(0, self.ambient.dim(n));
        };
        let s = &self.spaces[&n];
        let d = self.ambient.dim(n);
        let mut m = BitMatrix::zeros(pos.len(), d);
        for c in 0..d {
            let r = s.reduce(&BitVector::unit(d, c));
            for (i, &p) in pos.iter().enumerate() {
                if r.get(p) {
                    m.set(i, c, true);
                }
            }
        }
        m
    }

    /// The linear section `(M/S)^n → M^n` sending basis vectors to unit vectors.
    pub fn section(&self, n: i32) -> BitMatrix {
        let Some(pos) = self.positions.get(&n) else {
            return BitMatrix::zeros(self.ambient.dim(n), 0);
        };
        let d = self.ambient.dim(n);
        let mut m = BitMatrix::zeros(d, pos.len());
        for (i, &p) in pos.iter().enumerate() {
            m.set(p, i, true);
        }
        m
    }
}
