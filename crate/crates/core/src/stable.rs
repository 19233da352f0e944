//! Stable-module-category operations: tensor products, duality, syzygies,
//! hom and stable hom spaces, stable-isomorphism search and Picard elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::a1core::free::{free_map, ProjectiveCover};
use crate::a1core::margolis::{induced_map, margolis, MargolisData};
use crate::a1core::module::{A1Module, ModuleError};
use crate::a1core::morphism::Morphism;
use crate::a1core::reduce::reduce;
use crate::gf2::{BitMatrix, BitVector, Solver, Subspace};

/// Errors from stable-category operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StableError {
    /// Two truncated modules cannot be tensored: neither window is trustworthy
    /// in the product.
    #[error("incompatible windows: {0}")]
    IncompatibleWindows(String),
    /// A truncation window is too narrow to support the requested operation.
    #[error("window too small: {0}")]
    Window(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Margin by which syzygies shrink the trust window of a truncated module.
pub const WINDOW_MARGIN: i32 = 8;

// ---------------------------------------------------------------------------
// Tensor products
// ---------------------------------------------------------------------------

/// Basis bookkeeping for `a ⊗ b`: in degree `n` the basis is the list of pairs
/// `(x_i, y_j)` with `|x_i| = p` ascending, then `i`, then `j`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    /// `blocks[n]` = list of `(p, offset)` for the `(p, n-p)` block.
    blocks: BTreeMap<i32, Vec<(i32, usize)>>,
    a: A1Module,
    b: A1Module,
}

impl TensorLayout {
    pub fn new(a: &A1Module, b: &A1Module) -> Self {
        let mut blocks: BTreeMap<i32, Vec<(i32, usize)>> = BTreeMap::new();
        if !a.is_zero() && !b.is_zero() {
            for n in (a.lo() + b.lo())..=(a.hi() + b.hi()) {
                let mut off = 0;
                let mut v = Vec::new();
                for p in a.degrees() {
                    let (da, db) = (a.dim(p), b.dim(n - p));
                    if da > 0 && db > 0 {
                        v.push((p, off));
                        off += da * db;
                    }
                }
                blocks.insert(n, v);
            }
        }
        TensorLayout { blocks, a: a.clone(), b: b.clone() }
    }

    /// Dimension of `(a ⊗ b)^n`.
    pub fn dim(&self, n: i32) -> usize {
        self.blocks.get(&n).map_or(0, |v| v.iter().map(|&(p, _)| self.a.dim(p) * self.b.dim(n - p)).sum())
    }

    /// Offset of the `(p, n-p)` block in degree `n`, if present.
    pub fn offset(&self, n: i32, p: i32) -> Option<usize> {
        self.blocks.get(&n)?.iter().find(|&&(q, _)| q == p).map(|&(_, o)| o)
    }

    /// Index of `x_i ⊗ y_j` with `|x_i| = p`, `|y_j| = n - p`.
    pub fn index(&self, n: i32, p: i32, i: usize, j: usize) -> usize {
        self.offset(n, p).expect("nonempty tensor block") + i * self.b.dim(n - p) + j
    }

    /// The element `x ⊗ y` for homogeneous `x ∈ a^p`, `y ∈ b^q`.
    pub fn element(&self, p: i32, x: &BitVector, q: i32, y: &BitVector) -> (i32, BitVector) {
        let n = p + q;
        let mut v = BitVector::zeros(self.dim(n));
        if x.is_zero() || y.is_zero() {
            return (n, v);
        }
        for i in x.ones() {
            for j in y.ones() {
                v.flip(self.index(n, p, i, j));
            }
        }
        (n, v)
    }

    /// Matrix of `f ⊗ g : a^p ⊗ b^q → a^{p+s} ⊗ b^{q+r}` placed inside the full
    /// degree blocks, added into `out`.
    fn add_kron(&self, out: &mut BitMatrix, n: i32, p: i32, f: &BitMatrix, ds: i32, g: &BitMatrix, dr: i32) {
        if f.is_zero() || g.is_zero() {
            return;
        }
        let (Some(c0), Some(r0)) = (self.offset(n, p), self.offset(n + ds + dr, p + ds)) else {
            return;
        };
        out.add_block(r0, c0, &f.kron(g));
    }
}

/// The tensor product with the Cartan-formula action
/// `Sq¹(x⊗y) = Sq¹x⊗y + x⊗Sq¹y`, `Sq²(x⊗y) = Sq²x⊗y + Sq¹x⊗Sq¹y + x⊗Sq²y`.
pub fn tensor(a: &A1Module, b: &A1Module) -> Result<A1Module, StableError> {
    let window = match (a.window(), b.window()) {
        (Some(_), Some(_)) => {
            return Err(StableError::IncompatibleWindows(format!(
                "both {} and {} are truncations",
                a.name(),
                b.name()
            )))
        }
        (Some((lo, hi)), None) => Some((lo + b.lo(), hi + b.hi())),
        (None, Some((lo, hi))) => Some((lo + a.lo(), hi + a.hi())),
        (None, None) => None,
    };
    if a.is_zero() || b.is_zero() {
        return Ok(A1Module::zero());
    }
    let lay = TensorLayout::new(a, b);
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    let dims: Vec<usize> = (lo..=hi).map(|n| lay.dim(n)).collect();
    let sq1 = |n: i32| {
        let mut m = BitMatrix::zeros(lay.dim(n + 1), lay.dim(n));
        for p in a.degrees() {
            let q = n - p;
            if a.dim(p) == 0 || b.dim(q) == 0 {
                continue;
            }
            lay.add_kron(&mut m, n, p, &a.sq1(p), 1, &BitMatrix::identity(b.dim(q)), 0);
            lay.add_kron(&mut m, n, p, &BitMatrix::identity(a.dim(p)), 0, &b.sq1(q), 1);
        }
        m
    };
    let sq2 = |n: i32| {
        let mut m = BitMatrix::zeros(lay.dim(n + 2), lay.dim(n));
        for p in a.degrees() {
            let q = n - p;
            if a.dim(p) == 0 || b.dim(q) == 0 {
                continue;
            }
            lay.add_kron(&mut m, n, p, &a.sq2(p), 2, &BitMatrix::identity(b.dim(q)), 0);
            lay.add_kron(&mut m, n, p, &a.sq1(p), 1, &b.sq1(q), 1);
            lay.add_kron(&mut m, n, p, &BitMatrix::identity(a.dim(p)), 0, &b.sq2(q), 2);
        }
        m
    };
    let name = format!("({})⊗({})", a.name(), b.name());
    let m = A1Module::from_fns(&name, lo, dims, sq1, sq2)?;
    Ok(m.with_window(window)?)
}

/// Tensor product of morphisms `f ⊗ g`.
pub fn tensor_morphism(f: &Morphism, g: &Morphism) -> Result<Morphism, StableError> {
    let src = tensor(&f.source, &g.source)?;
    let dst = tensor(&f.target, &g.target)?;
    let ls = TensorLayout::new(&f.source, &g.source);
    let lt = TensorLayout::new(&f.target, &g.target);
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut m = BitMatrix::zeros(dst.dim(n), src.dim(n));
        for p in f.source.degrees() {
            let q = n - p;
            let (Some(c0), Some(r0)) = (ls.offset(n, p), lt.offset(n, p)) else {
                continue;
            };
            m.add_block(r0, c0, &f.at(p).kron(&g.at(q)));
        }
        maps.insert(n, m);
    }
    Ok(Morphism::new_unchecked(&src, &dst, maps)?)
}

/// The `n`-fold tensor power.
pub fn tensor_power(m: &A1Module, n: usize) -> Result<A1Module, StableError> {
    let mut acc = unit_module();
    for _ in 0..n {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

/// The trivial module 𝔽 in degree 0.
pub fn unit_module() -> A1Module {
    let mut dims = BTreeMap::new();
    dims.insert(0, 1);
    A1Module::from_maps("F", &dims, &BTreeMap::new(), &BTreeMap::new()).expect("F is valid")
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

/// The dual `(Dm)^n = (m^{-n})^*`; Sq¹ and Sq² act by transposes.
pub fn dual(m: &A1Module) -> A1Module {
    if m.is_zero() {
        return A1Module::zero();
    }
    let lo = -m.hi();
    let dims: Vec<usize> = (lo..=-m.lo()).map(|n| m.dim(-n)).collect();
    let name = format!("D({})", m.name());
    let d = A1Module::from_fns(&name, lo, dims, |n| m.sq1(-n - 1).transpose(), |n| m.sq2(-n - 2).transpose())
        .expect("the dual of a valid module is valid");
    d.with_window(m.window().map(|(a, b)| (-b, -a))).expect("negated window contains the negated support")
}

/// The dual of a morphism, `Df : D(target) → D(source)`.
pub fn dual_morphism(f: &Morphism) -> Morphism {
    f.dual(&dual(&f.source), &dual(&f.target))
}

// ---------------------------------------------------------------------------
// Syzygies
// ---------------------------------------------------------------------------

/// The reduced syzygy: kernel of the minimal projective cover of `m^red`.
pub fn omega_once(m: &A1Module) -> Result<A1Module, StableError> {
    let red = reduce(m)?.reduced;
    let window = shrink_window(m.window(), 0, 0)?;
    if red.is_zero() {
        return Ok(A1Module::zero());
    }
    let cover = ProjectiveCover::new(&red);
    let k = cover.map.kernel().module;
    let k = reduce(&k)?.reduced;
    Ok(k.with_name(&format!("Ω({})", m.name())).with_window(window.map(|(a, b)| (a.min(k.lo()), b.max(k.hi()))))?)
}

/// The reduced cosyzygy `Ω⁻¹m = D Ω D m`.
pub fn omega_inverse_once(m: &A1Module) -> Result<A1Module, StableError> {
    let r = dual(&omega_once(&dual(m))?);
    Ok(r.with_name(&format!("Ω^-1({})", m.name())))
}

fn shrink_window(w: Option<(i32, i32)>, _lo: i32, _hi: i32) -> Result<Option<(i32, i32)>, StableError> {
    match w {
        None => Ok(None),
        Some((a, b)) => {
            if b - a < 2 * WINDOW_MARGIN {
                Err(StableError::Window(format!(
                    "window [{a}, {b}] narrower than the required {} degrees",
                    2 * WINDOW_MARGIN
                )))
            } else {
                Ok(Some((a, b)))
            }
        }
    }
}

/// `Ωⁿm` for any integer `n` (reduced; `n = 0` gives `m^red`).
pub fn omega(m: &A1Module, n: i32) -> Result<A1Module, StableError> {
    let mut cur = reduce(m)?.reduced;
    for _ in 0..n.unsigned_abs() {
        cur = if n > 0 { omega_once(&cur)? } else { omega_inverse_once(&cur)? };
    }
    Ok(cur)
}

/// The trust region of a truncated module: degrees at distance at least
/// [`WINDOW_MARGIN`] from the edges of its window.
pub fn trust_region(m: &A1Module) -> Option<(i32, i32)> {
    m.window().map(|(a, b)| (a + WINDOW_MARGIN, b - WINDOW_MARGIN))
}

// ---------------------------------------------------------------------------
// Hom spaces
// ---------------------------------------------------------------------------

/// A presentation of a module: minimal cover plus generators of its kernel.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cover: ProjectiveCover,
    /// Kernel generators as elements of the cover, `(degree, vector)`.
    pub relations: Vec<(i32, BitVector)>,
    /// Per degree, a linear section `m^n → P^n` of the cover.
    pub sections: BTreeMap<i32, BitMatrix>,
}

impl Presentation {
    pub fn new(m: &A1Module) -> Self {
        let cover = ProjectiveCover::new(m);
        let kernel = cover.map.kernel();
        let relations = kernel
            .module
            .minimal_generators()
            .into_iter()
            .map(|(n, v)| (n, kernel.inclusion(n).mul_vec(&v)))
            .collect();
        let mut sections = BTreeMap::new();
        for n in m.degrees() {
            let solver = Solver::new(&cover.map.at(n));
            let cols: Vec<BitVector> = (0..m.dim(n))
                .map(|c| solver.solve(&BitVector::unit(m.dim(n), c)).expect("cover is surjective"))
                .collect();
            sections.insert(n, BitMatrix::from_columns(cover.module.dim(n), &cols));
        }
        Presentation { cover, relations, sections }
    }

    /// Constraint matrix whose kernel is hom(m, target), in the coordinates
    /// "images of the generators, concatenated".
    pub fn hom_constraints(&self, target: &A1Module) -> (BitMatrix, Vec<usize>) {
        let gens = self.cover.free.gens();
        let mut offsets = Vec::with_capacity(gens.len() + 1);
        let mut total = 0;
        for &d in gens {
            offsets.push(total);
            total += target.dim(d);
        }
        offsets.push(total);
        let mut rows: Vec<BitMatrix> = Vec::new();
        for (e, r) in &self.relations {
            if target.dim(*e) == 0 {
                continue;
            }
            let coeffs = self.cover.free.coefficients(*e, r);
            let mut block = BitMatrix::zeros(target.dim(*e), total);
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() || target.dim(gens[i]) == 0 {
                    continue;
                }
                block.add_block(0, offsets[i], &target.elt_action(*c, e - gens[i], gens[i]));
            }
            rows.push(block);
        }
        let mut m = BitMatrix::zeros(0, total);
        for r in rows {
            m = m.vstack(&r);
        }
        (m, offsets)
    }

    /// The morphism `m → target` with the given generator images.
    pub fn morphism(&self, source: &A1Module, target: &A1Module, images: &[BitVector]) -> Morphism {
        let p = free_map(&self.cover.free, &self.cover.module, target, images);
        let maps = source.degrees().map(|n| (n, p.at(n).mul(&self.sections[&n]))).collect();
        Morphism::new_unchecked(source, target, maps).expect("hom element has consistent shapes")
    }
}

/// A basis of hom_{A(1)}(a, b) (degree-preserving maps).
pub fn hom(a: &A1Module, b: &A1Module) -> Vec<Morphism> {
    if a.is_zero() || b.is_zero() {
        return Vec::new();
    }
    let pres = Presentation::new(a);
    hom_with(&pres, a, b)
}

/// Hom basis using a precomputed presentation of the source.
pub fn hom_with(pres: &Presentation, a: &A1Module, b: &A1Module) -> Vec<Morphism> {
    let (c, offsets) = pres.hom_constraints(b);
    let gens = pres.cover.free.gens();
    c.kernel_basis()
        .into_iter()
        .map(|sol| {
            let images: Vec<BitVector> =
                (0..gens.len()).map(|i| sol.slice(offsets[i], offsets[i + 1] - offsets[i])).collect();
            let f = pres.morphism(a, b, &images);
            debug_assert!(f.check_linear().is_ok());
            f
        })
        .collect()
}

/// A minimal injective (= free) hull `a ↪ I`, as `D` of the projective cover
/// of `Da`.
pub fn injective_hull(a: &A1Module) -> Morphism {
    let da = dual(a);
    let cover = ProjectiveCover::new(&da);
    let i = dual(&cover.module);
    let d = cover.map.dual(&i, &dual(&da));
    Morphism::new_unchecked(a, &i, d.blocks().clone()).expect("dual-of-cover embedding has consistent shapes")
}

/// Hom space modulo maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub hom_basis: Vec<Morphism>,
    /// Basis of the subspace of maps factoring through a projective.
    pub proj_subspace_basis: Vec<Morphism>,
    /// Hom elements whose classes form a basis of the stable hom space.
    pub stable_basis: Vec<Morphism>,
    pub stable_dim: usize,
}

/// The stable hom space `[a, b]`.
pub fn stable_hom(a: &A1Module, b: &A1Module) -> StableHom {
    let hom_basis = hom(a, b);
    if hom_basis.is_empty() {
        return StableHom { hom_basis, proj_subspace_basis: vec![], stable_basis: vec![], stable_dim: 0 };
    }
    let iota = injective_hull(a);
    let through = hom(&iota.target, b);
    let ambient = hom_basis[0].to_vector().len();
    let mut proj = Subspace::zero(ambient);
    let mut proj_subspace_basis = Vec::new();
    for g in &through {
        let f = iota.then(g);
        if proj.insert(&f.to_vector()) {
            proj_subspace_basis.push(f);
        }
    }
    let mut span = proj.clone();
    let mut stable_basis = Vec::new();
    for f in &hom_basis {
        if span.insert(&f.to_vector()) {
            stable_basis.push(f.clone());
        }
    }
    let stable_dim = stable_basis.len();
    StableHom { hom_basis, proj_subspace_basis, stable_basis, stable_dim }
}

/// Whether a map factors through a projective.
pub fn factors_through_projective(f: &Morphism) -> bool {
    let iota = injective_hull(&f.source);
    let through = hom(&iota.target, &f.target);
    let cols: Vec<BitVector> = through.iter().map(|g| iota.then(g).to_vector()).collect();
    Subspace::from_vectors(f.to_vector().len(), &cols).contains(&f.to_vector())
}

// ---------------------------------------------------------------------------
// Stable isomorphism
// ---------------------------------------------------------------------------

/// Search parameters for [`is_stably_iso`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Exhaustive search when the space of induced Margolis maps has
    /// dimension at most this (so at most `2^cap` candidates).
    pub cap: u32,
    /// Seed of the sampling phase.
    pub seed: u64,
    /// Number of random candidates in the sampling phase.
    pub samples: usize,
}

/// Default seed of the sampling phase of the stable-iso search.
pub const DEFAULT_SEED: u64 = 0x00A1_5EED;

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { cap: 20, seed: DEFAULT_SEED, samples: 1 << 16 }
    }
}

/// Outcome of a stable-isomorphism search.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// A stable isomorphism `a → b`.
    Yes(Morphism),
    /// Definitely not stably isomorphic.
    No(String),
    /// Random search failed; the space was too large to enumerate.
    Inconclusive { dim: usize, seed: u64, samples: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn witness(&self) -> Option<&Morphism> {
        match self {
            Verdict::Yes(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes(w) => write!(f, "YES (witness of rank {})", w.rank()),
            Verdict::No(r) => write!(f, "NO ({r})"),
            Verdict::Inconclusive { dim, seed, samples } => {
                write!(f, "INCONCLUSIVE (search dimension {dim}, seed {seed:#x}, {samples} samples)")
            }
        }
    }
}

/// Outcome of searching a hom space for Margolis-invertible maps.
enum Search {
    Found(Morphism),
    /// Margolis-invertible maps exist but none passed the acceptance test.
    Rejected,
    /// Exhaustive search found no Margolis-invertible map.
    Empty(usize),
    Inconclusive(usize),
}

/// Margolis cells `(j, n)` of `d`, optionally restricted to a degree range.
fn margolis_cells(d: &MargolisData, range: Option<(i32, i32)>) -> Vec<(usize, i32)> {
    let mut cells = Vec::new();
    for j in 0..2 {
        for n in d.degrees(j) {
            if range.is_none_or(|(lo, hi)| lo <= n && n <= hi) {
                cells.push((j, n));
            }
        }
    }
    cells
}

/// Searches the image of `homs` in ⊕ End H^n(−, Q_j) over `cells` for an
/// element invertible in every cell whose lift passes `accept`.
///
/// The search runs over the image space (not the hom space itself): it is
/// exhaustive, in Gray-code order, when the image has dimension at most
/// `budget.cap`, and samples seeded random combinations otherwise.
fn search_invertible(
    homs: &[Morphism],
    da: &MargolisData,
    db: &MargolisData,
    cells: &[(usize, i32)],
    budget: SearchBudget,
    accept: &dyn Fn(&Morphism) -> bool,
) -> Search {
    let shapes: Vec<usize> = cells.iter().map(|&(j, n)| da.reps(j, n).len()).collect();
    let flatten = |f: &Morphism| -> BitVector {
        let mut bits = Vec::new();
        for &(j, n) in cells {
            let m = induced_map(f, da, db, j, n);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    bits.push(m.get(r, c));
                }
            }
        }
        BitVector::from_bools(&bits)
    };
    let mut span = Subspace::zero(shapes.iter().map(|s| s * s).sum());
    let mut gens: Vec<(Morphism, BitVector)> = Vec::new();
    for f in homs {
        let v = flatten(f);
        if span.insert(&v) {
            gens.push((f.clone(), v));
        }
    }
    let r = gens.len();
    let invertible = |v: &BitVector| -> bool {
        let mut off = 0;
        for &s in &shapes {
            let m = BitMatrix::from_fn(s, s, |i, j| v.get(off + i * s + j));
            off += s * s;
            if !m.is_invertible() {
                return false;
            }
        }
        true
    };
    let lift = |mask: &[bool]| -> Morphism {
        let mut f: Option<Morphism> = None;
        for (k, (g, _)) in gens.iter().enumerate() {
            if mask[k] {
                f = Some(match f {
                    None => g.clone(),
                    Some(h) => h.add(g),
                });
            }
        }
        f.expect("nonempty combination")
    };
    let mut rejected = false;
    if r as u32 <= budget.cap {
        let mut mask = vec![false; r];
        let mut v = BitVector::zeros(span.ambient());
        for code in 1u64..(1u64 << r) {
            let bit = code.trailing_zeros() as usize;
            mask[bit] = !mask[bit];
            v.add_assign(&gens[bit].1);
            if invertible(&v) {
                let f = lift(&mask);
                if accept(&f) {
                    return Search::Found(f);
                }
                rejected = true;
            }
        }
        return if rejected { Search::Rejected } else { Search::Empty(r) };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let mask: Vec<bool> = (0..r).map(|_| rng.gen::<bool>()).collect();
        let mut v = BitVector::zeros(span.ambient());
        for (k, (_, gv)) in gens.iter().enumerate() {
            if mask[k] {
                v.add_assign(gv);
            }
        }
        if mask.iter().any(|&b| b) && invertible(&v) {
            let f = lift(&mask);
            if accept(&f) {
                return Search::Found(f);
            }
        }
    }
    Search::Inconclusive(r)
}

/// A stable isomorphism between reduced modules, if one exists.
///
/// Both modules must be reduced.  A stable isomorphism between reduced
/// modules is an isomorphism of modules; the returned witness is checked to
/// be one.
pub fn find_iso_reduced(a: &A1Module, b: &A1Module, budget: SearchBudget) -> Verdict {
    if a.dims() != b.dims() {
        return Verdict::No(format!("reduced dimensions differ: {:?} vs {:?}", a.dims(), b.dims()));
    }
    let pa = margolis(a);
    let pb = margolis(b);
    if pa != pb {
        return Verdict::No(format!("Margolis profiles differ: {pa:?} vs {pb:?}"));
    }
    if a.is_zero() {
        return Verdict::Yes(Morphism::zero(a, b));
    }
    if pa.total(0) + pa.total(1) == 0 {
        // Reduced and Margolis-acyclic means zero; dims already agree.
        return Verdict::No("reduced modules are not Margolis-visible".into());
    }
    let homs = hom(a, b);
    if homs.is_empty() {
        return Verdict::No("hom space is zero".into());
    }
    let da = MargolisData::new(a);
    let db = MargolisData::new(b);
    let cells = margolis_cells(&da, None);
    // Over reduced modules every Margolis-invertible map is an isomorphism;
    // a counterexample is reported rather than silently skipped.
    match search_invertible(&homs, &da, &db, &cells, budget, &|f| f.is_isomorphism()) {
        Search::Found(f) => Verdict::Yes(f),
        Search::Rejected => Verdict::No("Margolis-invertible maps exist but none is bijective".into()),
        Search::Empty(r) => Verdict::No(format!("no map in the {r}-dimensional Margolis image is invertible")),
        Search::Inconclusive(r) => Verdict::Inconclusive { dim: r, seed: budget.seed, samples: budget.samples },
    }
}

/// A module isomorphism `a → b`, searched over the whole hom space.
///
/// Meant for small, possibly non-reduced modules; the search is exhaustive
/// when `dim hom(a, b) ≤ budget.cap` and sampled otherwise.
pub fn find_module_iso(a: &A1Module, b: &A1Module, budget: SearchBudget) -> Verdict {
    if a.dims() != b.dims() {
        return Verdict::No(format!("dimensions differ: {:?} vs {:?}", a.dims(), b.dims()));
    }
    if a.is_zero() {
        return Verdict::Yes(Morphism::zero(a, b));
    }
    let homs = hom(a, b);
    let r = homs.len();
    if r == 0 {
        return Verdict::No("hom space is zero".into());
    }
    if r as u32 <= budget.cap {
        let mut f = Morphism::zero(a, b);
        for code in 1u64..(1u64 << r) {
            f = f.add(&homs[code.trailing_zeros() as usize]);
            if f.is_isomorphism() {
                return Verdict::Yes(f);
            }
        }
        return Verdict::No(format!("no element of the {r}-dimensional hom space is bijective"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let mut f = Morphism::zero(a, b);
        for g in &homs {
            if rng.gen::<bool>() {
                f = f.add(g);
            }
        }
        if f.is_isomorphism() {
            return Verdict::Yes(f);
        }
    }
    Verdict::Inconclusive { dim: r, seed: budget.seed, samples: budget.samples }
}

/// Stable comparison of truncations: searches for a map `a → b` inducing
/// isomorphisms on every Margolis group in degrees `[lo, hi]`.
///
/// Meant for windowed modules, where only a band of degrees is trustworthy;
/// the witness is not required to be bijective.
pub fn find_margolis_iso_in(a: &A1Module, b: &A1Module, lo: i32, hi: i32, budget: SearchBudget) -> Verdict {
    let (pa, pb) = (margolis(a).restricted(lo, hi), margolis(b).restricted(lo, hi));
    if pa != pb {
        return Verdict::No(format!("Margolis profiles in [{lo}, {hi}] differ: {pa:?} vs {pb:?}"));
    }
    let homs = hom(a, b);
    let da = MargolisData::new(a);
    let db = MargolisData::new(b);
    let cells = margolis_cells(&da, Some((lo, hi)));
    if cells.is_empty() {
        return Verdict::Yes(Morphism::zero(a, b));
    }
    match search_invertible(&homs, &da, &db, &cells, budget, &|_| true) {
        Search::Found(f) => Verdict::Yes(f),
        Search::Rejected | Search::Empty(_) => {
            Verdict::No(format!("no map induces Margolis isomorphisms in [{lo}, {hi}]"))
        }
        Search::Inconclusive(r) => Verdict::Inconclusive { dim: r, seed: budget.seed, samples: budget.samples },
    }
}

/// Whether `f` induces isomorphisms on the Margolis groups in degrees `[lo, hi]`.
pub fn induces_margolis_iso_in(f: &Morphism, lo: i32, hi: i32) -> bool {
    let a = MargolisData::new(&f.source);
    let b = MargolisData::new(&f.target);
    for j in 0..2 {
        for n in lo..=hi {
            let m = induced_map(f, &a, &b, j, n);
            if m.rows() != m.cols() || !m.is_invertible() {
                return false;
            }
        }
    }
    true
}

/// Adams–Margolis search for a stable isomorphism `a ≃ b`.
///
/// Reduces both sides, compares Margolis profiles, then searches the image of
/// the hom space in the Margolis endomorphism spaces for an invertible
/// element.  The witness is a map `a → b` inducing Margolis isomorphisms.
pub fn is_stably_iso(a: &A1Module, b: &A1Module, budget: SearchBudget) -> Verdict {
    let (ra, rb) = match (reduce(a), reduce(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Verdict::No(format!("cannot reduce: {e}")),
    };
    match find_iso_reduced(&ra.reduced, &rb.reduced, budget) {
        Verdict::Yes(f) => {
            let w = ra.retraction.then(&f).then(&rb.inclusion);
            Verdict::Yes(w)
        }
        other => other,
    }
}

/// Convenience wrapper with the default budget.
pub fn stably_iso(a: &A1Module, b: &A1Module) -> Verdict {
    is_stably_iso(a, b, SearchBudget::default())
}

// ---------------------------------------------------------------------------
// Picard group
// ---------------------------------------------------------------------------

/// An element `Ω^{-s} Σ^t J^{⊗ε}` of the Picard group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicardIndex {
    pub s: i32,
    pub t: i32,
    pub eps: u8,
}

impl PicardIndex {
    pub fn new(s: i32, t: i32, eps: u8) -> Self {
        assert!(eps <= 1, "eps is 0 or 1");
        PicardIndex { s, t, eps }
    }

    /// The group law.
    pub fn plus(self, o: PicardIndex) -> PicardIndex {
        PicardIndex { s: self.s + o.s, t: self.t + o.t, eps: self.eps ^ o.eps }
    }

    /// Degree of the Q₀ Margolis class.
    pub fn q0_degree(self) -> i32 {
        self.t - self.s
    }

    /// Degree of the Q₁ Margolis class.
    pub fn q1_degree(self) -> i32 {
        self.t - 3 * self.s
    }
}

impl fmt::Display for PicardIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.t, self.eps)
    }
}

/// The Joker: five classes x(−2), y(−1), z(0), w(1), v(2) with
/// Sq¹x = y, Sq²x = z, Sq²y = w, Sq²z = v, Sq¹w = v.
pub fn joker() -> A1Module {
    let mut dims = BTreeMap::new();
    for n in -2..=2 {
        dims.insert(n, 1);
    }
    let one = || BitMatrix::from_strs(&["1"]);
    let mut s1 = BTreeMap::new();
    s1.insert(-2, one());
    s1.insert(1, one());
    let mut s2 = BTreeMap::new();
    s2.insert(-2, one());
    s2.insert(-1, one());
    s2.insert(0, one());
    A1Module::from_maps("J", &dims, &s1, &s2).expect("J is valid")
}

fn omega_power_cache() -> &'static Mutex<HashMap<(i32, u8), A1Module>> {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<(i32, u8), A1Module>>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Ωⁿ J^{⊗ε}` (reduced), memoized.
pub fn omega_power(n: i32, eps: u8) -> A1Module {
    if let Some(m) = omega_power_cache().lock().expect("cache lock").get(&(n, eps)) {
        return m.clone();
    }
    let m = if n == 0 {
        if eps == 0 {
            unit_module()
        } else {
            joker()
        }
    } else if n > 0 {
        omega_once(&omega_power(n - 1, eps)).expect("finite modules have syzygies")
    } else {
        omega_inverse_once(&omega_power(n + 1, eps)).expect("finite modules have cosyzygies")
    };
    let name = match (n, eps) {
        (0, 0) => "F".to_string(),
        (0, 1) => "J".to_string(),
        (n, 0) => format!("Ω^{n}F"),
        (n, _) => format!("Ω^{n}J"),
    };
    let m = m.with_name(&name);
    omega_power_cache().lock().expect("cache lock").insert((n, eps), m.clone());
    m
}

/// The reduced module `Ω^{-s} Σ^t J^{⊗ε}`.
pub fn picard_element(idx: PicardIndex) -> A1Module {
    let m = omega_power(-idx.s, idx.eps).suspend(idx.t);
    m.with_name(&format!("Pic{idx}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::a1core::free::a1_regular;

    #[test]
    fn tensor_unit_and_dims() {
        let j = joker();
        let f = unit_module();
        assert!(tensor(&f, &j).unwrap().same_structure(&j));
        let jj = tensor(&j, &j).unwrap();
        assert_eq!(jj.total_dim(), 25);
    }

    #[test]
    fn dual_involution_and_joker_self_dual() {
        let j = joker();
        assert!(dual(&dual(&j)).same_structure(&j));
        assert!(dual(&j).same_structure(&j));
    }

    #[test]
    fn omega_of_unit_is_augmentation_ideal() {
        let o = omega(&unit_module(), 1).unwrap();
        assert_eq!(o.total_dim(), 7);
        let back = omega(&o, -1).unwrap();
        assert!(back.same_structure(&unit_module()));
    }

    #[test]
    fn hom_spaces() {
        let f = unit_module();
        let j = joker();
        assert_eq!(stable_hom(&f, &j).stable_dim, 0);
        assert_eq!(stable_hom(&j, &f).stable_dim, 0);
        assert_eq!(stable_hom(&j, &j).stable_dim, 1);
        let a = a1_regular();
        assert_eq!(hom(&a, &j).len(), 1);
        assert_eq!(stable_hom(&a, &j).stable_dim, 0);
    }

    #[test]
    fn question_mark_has_three_classes() {
        let q = picard_element(PicardIndex::new(1, 3, 1));
        assert_eq!(q.total_dim(), 3);
    }

    #[test]
    fn joker_squared_is_unit() {
        let jj = tensor(&joker(), &joker()).unwrap();
        assert!(stably_iso(&jj, &unit_module()).is_yes());
        assert!(stably_iso(&joker(), &unit_module()).is_no());
    }
}
