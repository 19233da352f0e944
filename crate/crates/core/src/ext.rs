//! Ext over A(1): minimal resolutions, the cochain computation of
//! `Ext^{s,t}(F, N)`, and the Picard-graded stable groups
//! `𝓔xt^{s,t,ε}(F, N) = [F, Σ^t Ω^{−s} J^{⊗ε} ⊗ N]`.
//!
//! Two independent engines are provided:
//!
//! - the cochain engine resolves `F` minimally and takes cohomology of
//!   `Hom(P_•, Σ^t N)`; products by `h₀`, `h₁` are computed from chain lifts
//!   (Yoneda composition);
//! - the socle engine reads `[F, Y]` off the socle of the reduced module `Y`
//!   (a map out of `F` hits the socle, and for reduced `Y` no nonzero such map
//!   factors through a projective), and computes products by tensoring with a
//!   representing class of the generator and projecting back with the
//!   reduction retraction.
//!
//! In positive filtration the two engines compute the same groups; the chart
//! builder cross-checks them at `s = 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::a1core::free::{free_map, FreeModule, ProjectiveCover};
use crate::a1core::margolis::margolis;
use crate::a1core::module::{A1Module, ModuleError};
use crate::a1core::morphism::Morphism;
use crate::a1core::reduce::reduce;
use crate::families::{make_a, FamilyError};
use crate::gf2::{BitMatrix, BitVector, Solver, Subspace};
use crate::stable::{
    find_iso_reduced, joker, omega_inverse_once, omega_once, omega_power, stable_hom, tensor, unit_module,
    SearchBudget, StableError, TensorLayout, Verdict,
};

/// Errors raised by the Ext engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("invalid range: {0}")]
    Range(String),
    /// Stable Ext is only computed for finite (unwindowed) coefficients.
    #[error("coefficient module `{0}` is a truncation; stable Ext needs a finite module")]
    Windowed(String),
    /// The two engines, or two models of the same group, disagree.
    #[error("consistency failure: {0}")]
    Consistency(String),
    /// A named class was requested in a cell that is not one-dimensional.
    #[error("class `{name}` is not determined: cell {cell} has dimension {dim}")]
    NotUnique { name: String, cell: String, dim: usize },
    #[error("isomorphism search between models was inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Stable(#[from] StableError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

// ---------------------------------------------------------------------------
// Minimal resolutions
// ---------------------------------------------------------------------------

/// One stage `P_s` of a resolution with its differential.
#[derive(Clone, Debug)]
pub struct Stage {
    pub free: FreeModule,
    /// `free` as a module.
    pub module: A1Module,
    /// `P_s → P_{s−1}` (for `s = 0`, the augmentation `P_0 → M`).
    pub d: Morphism,
    /// Images of the generators under `d`, in the target's degree `|g|`.
    pub gen_images: Vec<BitVector>,
}

/// A minimal free resolution `⋯ → P_1 → P_0 → M`.
///
/// Each `P_s` is the minimal projective cover of the kernel of the previous
/// differential, so all differentials have coefficients in the augmentation
/// ideal.  For finite `M` every stage is finite and the construction is
/// exact by construction; [`Resolution::check`] re-verifies both properties.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: A1Module,
    pub stages: Vec<Stage>,
    /// Kernel of the last differential (the next module to cover).
    pending: A1Module,
    pending_inclusion: Morphism,
}

impl Resolution {
    /// Resolves `m` through homological degree `smax`.
    pub fn new(m: &A1Module, smax: usize) -> Self {
        let mut r = Resolution {
            target: m.clone(),
            stages: Vec::new(),
            pending: m.clone(),
            pending_inclusion: Morphism::identity(m),
        };
        r.extend_to(smax);
        r
    }

    /// Extends the resolution through degree `smax`.
    pub fn extend_to(&mut self, smax: usize) {
        while self.stages.len() <= smax {
            let cover = ProjectiveCover::new(&self.pending);
            let d = cover.map.then(&self.pending_inclusion);
            let gen_images: Vec<BitVector> = (0..cover.free.rank())
                .map(|g| {
                    let e = cover.free.gens()[g];
                    let u = BitVector::unit(cover.free.dim(e), cover.free.index(e, g, 0));
                    d.apply(e, &u)
                })
                .collect();
            let kernel = d.kernel();
            self.pending_inclusion = kernel.inclusion_map();
            self.pending = kernel.module;
            self.stages.push(Stage { free: cover.free, module: cover.module, d, gen_images });
        }
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Generator degrees of `P_s`.
    pub fn gens(&self, s: usize) -> &[i32] {
        self.stages[s].free.gens()
    }

    /// Minimality (no unit coefficients in the differentials) and exactness
    /// (`im d_{s+1} = ker d_s`, augmentation surjective).
    pub fn check(&self) -> Result<(), ExtError> {
        let Some(first) = self.stages.first() else {
            return Ok(());
        };
        if !first.d.is_surjective() {
            return Err(ExtError::Consistency("augmentation is not surjective".into()));
        }
        for s in 1..self.stages.len() {
            let st = &self.stages[s];
            let below = &self.stages[s - 1];
            for (g, img) in st.gen_images.iter().enumerate() {
                let e = st.free.gens()[g];
                for c in below.free.coefficients(e, img) {
                    if c.is_unit() {
                        return Err(ExtError::Consistency(format!("unit coefficient in d_{s}")));
                    }
                }
            }
            let comp = st.d.then(&below.d);
            if !comp.is_zero() {
                return Err(ExtError::Consistency(format!("d_{}∘d_{s} ≠ 0", s - 1)));
            }
            for n in below.module.degrees() {
                let k = below.d.at(n).kernel_basis().len();
                let im = st.d.at(n).rank();
                if k != im {
                    return Err(ExtError::Consistency(format!("not exact at P_{} in degree {n}", s - 1)));
                }
            }
        }
        Ok(())
    }
}

/// The minimal resolution of `F`, shared and extended on demand.
pub fn resolution_of_unit(smax: usize) -> Resolution {
    static CACHE: OnceLock<Mutex<Option<Resolution>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cache.lock().expect("resolution cache lock");
    let res = guard.get_or_insert_with(|| Resolution::new(&unit_module(), 0));
    res.extend_to(smax);
    res.clone()
}

// ---------------------------------------------------------------------------
// The cochain engine
// ---------------------------------------------------------------------------

/// Offsets of the generator blocks of `Hom(P_s, Σ^t N) = ⊕_g N^{|g|−t}`.
fn cochain_offsets(res: &Resolution, n: &A1Module, s: usize, t: i32) -> (Vec<usize>, usize) {
    let mut offs = Vec::new();
    let mut total = 0;
    for &g in res.gens(s) {
        offs.push(total);
        total += n.dim(g - t);
    }
    (offs, total)
}

/// Evaluates a cochain `x ∈ Hom(P_s, Σ^t N)` on a degree-`deg` element of
/// `P_s`, giving an element of `N^{deg−t}`.
fn evaluate(res: &Resolution, n: &A1Module, s: usize, t: i32, x: &BitVector, deg: i32, v: &BitVector) -> BitVector {
    let (offs, _) = cochain_offsets(res, n, s, t);
    let free = &res.stages[s].free;
    let mut out = BitVector::zeros(n.dim(deg - t));
    for (g, c) in free.coefficients(deg, v).into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let gd = free.gens()[g];
        let xg = x.slice(offs[g], n.dim(gd - t));
        if xg.is_zero() {
            continue;
        }
        out.add_assign(&n.elt_action(c, deg - gd, gd - t).mul_vec(&xg));
    }
    out
}

/// The coboundary `δ : Hom(P_s, Σ^t N) → Hom(P_{s+1}, Σ^t N)`, `δx = x∘d`.
pub fn coboundary(res: &Resolution, n: &A1Module, s: usize, t: i32) -> BitMatrix {
    let (src_offs, src_dim) = cochain_offsets(res, n, s, t);
    let (dst_offs, dst_dim) = cochain_offsets(res, n, s + 1, t);
    let mut m = BitMatrix::zeros(dst_dim, src_dim);
    let upper = &res.stages[s + 1];
    let free = &res.stages[s].free;
    for (gp, img) in upper.gen_images.iter().enumerate() {
        let e = upper.free.gens()[gp];
        for (g, c) in free.coefficients(e, img).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let gd = free.gens()[g];
            let block = n.elt_action(c, e - gd, gd - t);
            m.add_block(dst_offs[gp], src_offs[g], &block);
        }
    }
    m
}

/// `Ext^{s,t}(F, N)` with chosen representing cocycles.
#[derive(Clone, Debug)]
pub struct ExtCell {
    pub s: usize,
    pub t: i32,
    pub dim: usize,
    /// Representing cocycles of a basis.
    pub reps: Vec<BitVector>,
    boundaries: usize,
    solver: Solver,
}

impl ExtCell {
    /// Coordinates of the class of a cocycle in the basis [`ExtCell::reps`].
    pub fn coords(&self, v: &BitVector) -> Option<BitVector> {
        let full = self.solver.solve(v)?;
        Some(full.slice(self.boundaries, self.dim))
    }
}

/// Computes `Ext^{s,t}(F, N)` from a resolution of `F` reaching `s + 1`.
pub fn ext_cell(res: &Resolution, n: &A1Module, s: usize, t: i32) -> ExtCell {
    let (_, cdim) = cochain_offsets(res, n, s, t);
    let cocycles = coboundary(res, n, s, t).kernel_basis();
    let bounds = if s == 0 {
        Subspace::zero(cdim)
    } else {
        coboundary(res, n, s - 1, t).column_space()
    };
    let mut span = bounds.clone();
    let mut reps = Vec::new();
    for z in cocycles {
        if span.insert(&z) {
            reps.push(z);
        }
    }
    let mut cols: Vec<BitVector> = bounds.basis().to_vec();
    cols.extend(reps.iter().cloned());
    let solver = Solver::new(&BitMatrix::from_columns(cdim, &cols));
    ExtCell { s, t, dim: reps.len(), reps, boundaries: bounds.dim(), solver }
}

/// Dimension of `Ext^{s,t}(F, N)`.
pub fn ext_dim(n: &A1Module, s: usize, t: i32) -> usize {
    let res = resolution_of_unit(s + 1);
    ext_cell(&res, n, s, t).dim
}

/// Chain lift of the class in `Ext^{1,t_h}(F, F)` dual to a generator of
/// `P_1`: maps `f_k : P_{k+1} → Σ^{t_h} P_k` with `d f_k = f_{k−1} d`.
#[derive(Clone, Debug)]
pub struct ChainLift {
    pub t_h: i32,
    pub maps: Vec<Morphism>,
}

/// Lifts the generator `gen` of `P_1` (in the resolution of `F`) to a chain
/// map through `P_{smax+1}`.
pub fn chain_lift(res: &Resolution, gen: usize, smax: usize) -> Result<ChainLift, ExtError> {
    if res.len() < smax + 2 {
        return Err(ExtError::Range(format!("resolution too short for a lift through {smax}")));
    }
    let t_h = res.gens(1)[gen];
    let mut maps: Vec<Morphism> = Vec::new();
    // f_0 : P_1 → Σ^{t_h} P_0 sends the chosen generator to the unit.
    let p0 = res.stages[0].module.suspend(t_h);
    let images: Vec<BitVector> = (0..res.gens(1).len())
        .map(|g| {
            let e = res.gens(1)[g];
            let mut v = BitVector::zeros(p0.dim(e));
            if g == gen {
                v.set(res.stages[0].free.index(0, 0, 0), true);
            }
            v
        })
        .collect();
    maps.push(free_map(&res.stages[1].free, &res.stages[1].module, &p0, &images));
    for k in 1..=smax {
        let up = &res.stages[k + 1];
        let target = res.stages[k].module.suspend(t_h);
        let dk = &res.stages[k].d;
        let prev = &maps[k - 1];
        let mut images = Vec::new();
        for (g, img) in up.gen_images.iter().enumerate() {
            let e = up.free.gens()[g];
            let rhs = prev.apply(e, img);
            let solver = Solver::new(&dk.at(e - t_h));
            let y = solver
                .solve(&rhs)
                .ok_or_else(|| ExtError::Consistency(format!("chain lift fails at stage {k}")))?;
            images.push(y);
        }
        maps.push(free_map(&up.free, &up.module, &target, &images));
    }
    Ok(ChainLift { t_h, maps })
}

/// Yoneda product `h·x = x ∘ f_s` on a cocycle `x ∈ Hom(P_s, Σ^t N)`.
pub fn yoneda_product(res: &Resolution, lift: &ChainLift, n: &A1Module, s: usize, t: i32, x: &BitVector) -> BitVector {
    let up = &res.stages[s + 1];
    let (offs, dim) = cochain_offsets(res, n, s + 1, t + lift.t_h);
    let mut out = BitVector::zeros(dim);
    for (g, &e) in up.free.gens().iter().enumerate() {
        let u = BitVector::unit(up.free.dim(e), up.free.index(e, g, 0));
        let fy = lift.maps[s].apply(e, &u);
        let val = evaluate(res, n, s, t, x, e - lift.t_h, &fy);
        out.write_slice(offs[g], &val);
    }
    out
}

/// Index of the generator of `P_1` (resolution of `F`) in degree `t`.
pub fn p1_generator(res: &Resolution, t: i32) -> Option<usize> {
    res.gens(1).iter().position(|&d| d == t)
}

// ---------------------------------------------------------------------------
// Generators of the Picard-graded Ext of F
// ---------------------------------------------------------------------------

/// The named generators of `𝓔xt(F, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtGen {
    H0,
    H1,
    Kappa,
    Alpha,
    A,
    B,
}

impl ExtGen {
    pub const ALL: [ExtGen; 6] = [ExtGen::H0, ExtGen::H1, ExtGen::Kappa, ExtGen::Alpha, ExtGen::A, ExtGen::B];

    /// Picard index `(s, t, ε)`.
    pub fn index(self) -> (i32, i32, u8) {
        match self {
            ExtGen::H0 => (1, 1, 0),
            ExtGen::H1 => (1, 2, 0),
            ExtGen::Kappa => (1, 1, 1),
            ExtGen::Alpha => (2, 6, 1),
            ExtGen::A => (3, 7, 0),
            ExtGen::B => (4, 12, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtGen::H0 => "h0",
            ExtGen::H1 => "h1",
            ExtGen::Kappa => "kappa",
            ExtGen::Alpha => "alpha",
            ExtGen::A => "a",
            ExtGen::B => "b",
        }
    }

    pub fn from_name(s: &str) -> Option<ExtGen> {
        ExtGen::ALL.into_iter().find(|g| g.name() == s)
    }
}

/// A class of `𝓔xt^{s,t,ε}(F, N)`, represented by a socle vector of a
/// reduced model `Y ≃ Ω^{−s} J^{⊗ε} ⊗ N` in degree `−t`.
#[derive(Clone, Debug)]
pub struct StextClass {
    pub s: i32,
    pub t: i32,
    pub eps: u8,
    pub model: A1Module,
    pub vector: BitVector,
}

impl StextClass {
    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }

    /// Adams coordinates `(t − s, s)`.
    pub fn adams(&self) -> (i32, i32) {
        (self.t - self.s, self.s)
    }

    /// Dimension of the cell containing the class.
    pub fn cell_dim(&self) -> usize {
        self.model.socle(-self.t).len()
    }

    pub fn cell(&self) -> String {
        format!("(s={}, t={}, eps={})", self.s, self.t, self.eps)
    }
}

/// The reduced model `Ω^{−s} J^{⊗ε}` of a generator, with its class.
pub fn generator_class(g: ExtGen) -> Result<StextClass, ExtError> {
    static CACHE: OnceLock<Mutex<HashMap<ExtGen, StextClass>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("generator cache lock").get(&g) {
        return Ok(c.clone());
    }
    let (s, t, eps) = g.index();
    let model = omega_power(-s, eps);
    let socle = model.socle(-t);
    if socle.len() != 1 {
        return Err(ExtError::NotUnique { name: g.name().into(), cell: format!("({s},{t},{eps})"), dim: socle.len() });
    }
    let c = StextClass { s, t, eps, model, vector: socle[0].clone() };
    cache.lock().expect("generator cache lock").insert(g, c.clone());
    Ok(c)
}

/// The unit class `1 ∈ [F, N]` for a module `N` with `N^0` one-dimensional
/// socle (used for `N = F`).
pub fn unit_class() -> StextClass {
    let f = unit_module();
    StextClass { s: 0, t: 0, eps: 0, vector: BitVector::unit(1, 0), model: f }
}

/// The product of two classes: `x ⊗ y` in the tensor product of the models,
/// projected to the reduced part.
pub fn product(x: &StextClass, y: &StextClass) -> Result<StextClass, ExtError> {
    let t = tensor(&x.model, &y.model)?;
    let layout = TensorLayout::new(&x.model, &y.model);
    let (deg, v) = layout.element(-x.t, &x.vector, -y.t, &y.vector);
    let red = reduce(&t)?;
    let w = red.retraction.apply(deg, &v);
    Ok(StextClass { s: x.s + y.s, t: x.t + y.t, eps: (x.eps + y.eps) % 2, model: red.reduced, vector: w })
}

/// `g·x` for a generator `g`.
pub fn multiply(g: ExtGen, x: &StextClass) -> Result<StextClass, ExtError> {
    product(&generator_class(g)?, x)
}

/// `g^n·x`.
pub fn multiply_power(g: ExtGen, n: usize, x: &StextClass) -> Result<StextClass, ExtError> {
    let mut cur = x.clone();
    for _ in 0..n {
        cur = multiply(g, &cur)?;
    }
    Ok(cur)
}

/// Applies a word of generators, rightmost first.
pub fn multiply_word(word: &[ExtGen], x: &StextClass) -> Result<StextClass, ExtError> {
    let mut cur = x.clone();
    for &g in word.iter().rev() {
        cur = multiply(g, &cur)?;
    }
    Ok(cur)
}

/// Whether two classes in the same cell are equal.
///
/// Zero-ness is model independent.  Two nonzero classes in a one-dimensional
/// cell are equal; otherwise the models are identified by an isomorphism,
/// which is canonical on `[F, −]` when the model has one-dimensional stable
/// endomorphisms.  `None` when neither criterion applies.
pub fn classes_equal(x: &StextClass, y: &StextClass, budget: SearchBudget) -> Result<Option<bool>, ExtError> {
    if (x.s, x.t, x.eps) != (y.s, y.t, y.eps) {
        return Err(ExtError::Range(format!("classes lie in different cells {} and {}", x.cell(), y.cell())));
    }
    match (x.is_zero(), y.is_zero()) {
        (true, true) => return Ok(Some(true)),
        (true, false) | (false, true) => return Ok(Some(false)),
        _ => {}
    }
    if x.cell_dim() == 1 {
        return Ok(Some(true));
    }
    match find_iso_reduced(&x.model, &y.model, budget) {
        Verdict::Yes(phi) => {
            if stable_hom(&y.model, &y.model).stable_dim != 1 {
                return Ok(None);
            }
            Ok(Some(phi.apply(-x.t, &x.vector) == y.vector))
        }
        Verdict::No(why) => Err(ExtError::Consistency(format!("models of one cell are not isomorphic: {why}"))),
        Verdict::Inconclusive { .. } => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// Models of the stable groups
// ---------------------------------------------------------------------------

/// The reduced models `Y_{s,ε} = (Ω^{−s} J^{⊗ε} ⊗ N)^red`, built by
/// successive (co)syzygies from `s = 0`.
#[derive(Clone, Debug)]
pub struct StextModels {
    base: A1Module,
    models: BTreeMap<(i32, u8), A1Module>,
}

impl StextModels {
    pub fn new(n: &A1Module) -> Result<Self, ExtError> {
        if n.window().is_some() {
            return Err(ExtError::Windowed(n.name().to_string()));
        }
        let mut models = BTreeMap::new();
        models.insert((0, 0), reduce(n)?.reduced);
        models.insert((0, 1), reduce(&tensor(&joker(), n)?)?.reduced);
        Ok(StextModels { base: n.clone(), models })
    }

    pub fn base(&self) -> &A1Module {
        &self.base
    }

    /// The model `Y_{s,ε}`.
    pub fn model(&mut self, s: i32, eps: u8) -> Result<A1Module, ExtError> {
        if let Some(m) = self.models.get(&(s, eps)) {
            return Ok(m.clone());
        }
        let m = if s > 0 {
            omega_inverse_once(&self.model(s - 1, eps)?)?
        } else {
            omega_once(&self.model(s + 1, eps)?)?
        };
        self.models.insert((s, eps), m.clone());
        Ok(m)
    }

    /// Dimension of `𝓔xt^{s,t,ε}(F, N)`.
    pub fn dim(&mut self, s: i32, t: i32, eps: u8) -> Result<usize, ExtError> {
        Ok(self.model(s, eps)?.socle(-t).len())
    }

    /// Echelon basis of the cell, as socle vectors of the model.
    pub fn cell_basis(&mut self, s: i32, t: i32, eps: u8) -> Result<Subspace, ExtError> {
        let m = self.model(s, eps)?;
        Ok(Subspace::from_vectors(m.dim(-t), &m.socle(-t)))
    }

    /// The classes of the cell basis.
    pub fn cell_classes(&mut self, s: i32, t: i32, eps: u8) -> Result<Vec<StextClass>, ExtError> {
        let m = self.model(s, eps)?;
        let b = self.cell_basis(s, t, eps)?;
        Ok(b.basis().iter().map(|v| StextClass { s, t, eps, model: m.clone(), vector: v.clone() }).collect())
    }

    /// The map `𝓔xt^{s,·,ε} → 𝓔xt^{s+s_g,·+t_g,ε+ε_g}` given by a generator,
    /// as a module map `P_g ⊗ Y_{s,ε} → Y_{s+s_g, ε+ε_g}` (retraction
    /// followed by an identification of the reduced part with the model).
    fn action_map(&mut self, g: ExtGen, s: i32, eps: u8, budget: SearchBudget) -> Result<GenAction, ExtError> {
        let gc = generator_class(g)?;
        let y = self.model(s, eps)?;
        let target = self.model(s + gc.s, (eps + gc.eps) % 2)?;
        let t = tensor(&gc.model, &y)?;
        let red = reduce(&t)?;
        let phi = match find_iso_reduced(&red.reduced, &target, budget) {
            Verdict::Yes(f) => f,
            Verdict::No(why) => {
                return Err(ExtError::Consistency(format!("{} times model ({s},{eps}) is not the expected model: {why}", g.name())))
            }
            Verdict::Inconclusive { dim, .. } => {
                return Err(ExtError::Inconclusive(format!("{}: {dim}-dimensional search", g.name())))
            }
        };
        Ok(GenAction { layout: TensorLayout::new(&gc.model, &y), gen: gc, map: red.retraction.then(&phi) })
    }

    /// Matrix of multiplication by `g` from cell `(s,t,ε)` to its target
    /// cell, in the echelon cell bases.
    pub fn action_matrix(&mut self, g: ExtGen, s: i32, t: i32, eps: u8, budget: SearchBudget) -> Result<BitMatrix, ExtError> {
        let act = self.action_map(g, s, eps, budget)?;
        self.apply_action(&act, s, t, eps)
    }

    fn apply_action(&mut self, act: &GenAction, s: i32, t: i32, eps: u8) -> Result<BitMatrix, ExtError> {
        let src = self.cell_basis(s, t, eps)?;
        let (ts, tt, te) = (s + act.gen.s, t + act.gen.t, (eps + act.gen.eps) % 2);
        let dst = self.cell_basis(ts, tt, te)?;
        let mut m = BitMatrix::zeros(dst.dim(), src.dim());
        for (c, v) in src.basis().iter().enumerate() {
            let (deg, w) = act.layout.element(-act.gen.t, &act.gen.vector, -t, v);
            let img = act.map.apply(deg, &w);
            let coords = dst
                .coords(&img)
                .ok_or_else(|| ExtError::Consistency("product left the socle".into()))?;
            for r in coords.ones() {
                m.set(r, c, true);
            }
        }
        Ok(m)
    }
}

struct GenAction {
    gen: StextClass,
    layout: TensorLayout,
    map: Morphism,
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

/// A rectangle of Adams coordinates `x = t − s`, `y = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartWindow {
    pub s: (i32, i32),
    pub x: (i32, i32),
    pub eps: Vec<u8>,
}

impl ChartWindow {
    pub fn new(s: (i32, i32), x: (i32, i32)) -> Self {
        ChartWindow { s, x, eps: vec![0, 1] }
    }

    fn validate(&self) -> Result<(), ExtError> {
        if self.s.0 > self.s.1 || self.x.0 > self.x.1 {
            return Err(ExtError::Range(format!("empty window s={:?} x={:?}", self.s, self.x)));
        }
        if self.eps.iter().any(|&e| e > 1) {
            return Err(ExtError::Range("eps must be 0 or 1".into()));
        }
        Ok(())
    }

    fn cells(&self) -> impl Iterator<Item = (i32, i32, u8)> + '_ {
        self.eps.iter().flat_map(move |&e| {
            (self.s.0..=self.s.1).flat_map(move |s| (self.x.0..=self.x.1).map(move |x| (s, x + s, e)))
        })
    }
}

/// Cell dimensions and `h₀`, `h₁` multiplications over a window.
///
/// Keys are `(s, t, ε)`; only nonzero cells are stored.  `h0[(s,t,ε)]` is the
/// matrix from that cell to `(s+1, t+1, ε)`, `h1` to `(s+1, t+2, ε)`, both in
/// the cell bases of the engine that produced the chart; zero matrices are
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtChart {
    pub name: String,
    pub window: Option<ChartWindow>,
    pub dims: BTreeMap<(i32, i32, u8), usize>,
    pub h0: BTreeMap<(i32, i32, u8), BitMatrix>,
    pub h1: BTreeMap<(i32, i32, u8), BitMatrix>,
}

impl ExtChart {
    pub fn dim(&self, s: i32, t: i32, eps: u8) -> usize {
        self.dims.get(&(s, t, eps)).copied().unwrap_or(0)
    }

    /// Dimension at Adams coordinates `(x, y)`.
    pub fn dim_adams(&self, x: i32, y: i32, eps: u8) -> usize {
        self.dim(y, x + y, eps)
    }

    /// Rank of `h₀` (`which = 0`) or `h₁` (`which = 1`) out of a cell.
    pub fn h_rank(&self, which: usize, s: i32, t: i32, eps: u8) -> usize {
        let m = if which == 0 { &self.h0 } else { &self.h1 };
        m.get(&(s, t, eps)).map(|m| m.rank()).unwrap_or(0)
    }

    /// Cell dimensions as a map from Adams coordinates, for one `ε`.
    pub fn adams_dims(&self, eps: u8) -> BTreeMap<(i32, i32), usize> {
        self.dims
            .iter()
            .filter(|((_, _, e), _)| *e == eps)
            .map(|(&(s, t, _), &d)| ((t - s, s), d))
            .collect()
    }
}

/// Chart of `Ext^{s,t}(F, J^{⊗ε} ⊗ N)` for `s ≥ 0` by the cochain engine,
/// with `h₀`, `h₁` by Yoneda composition.
pub fn ext_chart(n: &A1Module, window: &ChartWindow) -> Result<ExtChart, ExtError> {
    window.validate()?;
    if window.s.0 < 0 {
        return Err(ExtError::Range("the cochain engine needs s ≥ 0".into()));
    }
    if n.window().is_some() {
        return Err(ExtError::Windowed(n.name().to_string()));
    }
    let smax = window.s.1 as usize;
    let res = resolution_of_unit(smax + 2);
    let lifts = [
        chain_lift(&res, p1_generator(&res, 1).expect("h0 generator"), smax)?,
        chain_lift(&res, p1_generator(&res, 2).expect("h1 generator"), smax)?,
    ];
    let coeff = [n.clone(), tensor(&joker(), n)?];
    let mut chart = ExtChart { name: n.name().to_string(), window: Some(window.clone()), ..Default::default() };
    let mut cells: HashMap<(usize, i32, u8), ExtCell> = HashMap::new();
    let mut cell = |s: usize, t: i32, e: u8| -> ExtCell {
        cells.entry((s, t, e)).or_insert_with(|| ext_cell(&res, &coeff[e as usize], s, t)).clone()
    };
    for (s, t, e) in window.cells() {
        let c = cell(s as usize, t, e);
        if c.dim == 0 {
            continue;
        }
        chart.dims.insert((s, t, e), c.dim);
        for (which, lift) in lifts.iter().enumerate() {
            let tgt = cell(s as usize + 1, t + lift.t_h, e);
            if tgt.dim == 0 {
                continue;
            }
            let mut m = BitMatrix::zeros(tgt.dim, c.dim);
            for (col, x) in c.reps.iter().enumerate() {
                let y = yoneda_product(&res, lift, &coeff[e as usize], s as usize, t, x);
                let coords = tgt
                    .coords(&y)
                    .ok_or_else(|| ExtError::Consistency("Yoneda product is not a cocycle".into()))?;
                for r in coords.ones() {
                    m.set(r, col, true);
                }
            }
            if !m.is_zero() {
                if which == 0 { &mut chart.h0 } else { &mut chart.h1 }.insert((s, t, e), m);
            }
        }
    }
    Ok(chart)
}

/// Chart of `𝓔xt^{s,t,ε}(F, N)` (all `s`) by the socle engine, with `h₀`,
/// `h₁` by tensor products.
///
/// When the window meets `s = 1` the cell dimensions there are recomputed
/// by the cochain engine and must agree.
pub fn stext_chart(n: &A1Module, window: &ChartWindow, budget: SearchBudget) -> Result<ExtChart, ExtError> {
    window.validate()?;
    let mut models = StextModels::new(n)?;
    let mut chart = ExtChart { name: n.name().to_string(), window: Some(window.clone()), ..Default::default() };
    for &e in &window.eps {
        for s in window.s.0..=window.s.1 {
            let mut actions: Vec<Option<GenAction>> = vec![None, None];
            for x in window.x.0..=window.x.1 {
                let t = x + s;
                let d = models.dim(s, t, e)?;
                if d == 0 {
                    continue;
                }
                chart.dims.insert((s, t, e), d);
                for (which, g) in [ExtGen::H0, ExtGen::H1].into_iter().enumerate() {
                    let (gs, gt, _) = g.index();
                    if models.dim(s + gs, t + gt, e)? == 0 {
                        continue;
                    }
                    if actions[which].is_none() {
                        actions[which] = Some(models.action_map(g, s, e, budget)?);
                    }
                    let m = models.apply_action(actions[which].as_ref().expect("just built"), s, t, e)?;
                    if !m.is_zero() {
                        if which == 0 { &mut chart.h0 } else { &mut chart.h1 }.insert((s, t, e), m);
                    }
                }
            }
        }
    }
    if window.s.0 <= 1 && 1 <= window.s.1 {
        let res = resolution_of_unit(2);
        let coeff = [n.clone(), tensor(&joker(), n)?];
        for &e in &window.eps {
            for x in window.x.0..=window.x.1 {
                let t = x + 1;
                let a = chart.dim(1, t, e);
                let b = ext_cell(&res, &coeff[e as usize], 1, t).dim;
                if a != b {
                    return Err(ExtError::Consistency(format!(
                        "engines disagree at (s=1, t={t}, eps={e}): socle {a}, cochain {b}"
                    )));
                }
            }
        }
    }
    Ok(chart)
}

/// Cells `(x, y)` of one `ε`-slice whose dimension differs from that of the
/// rotated cell `(c_x − x, c_y − y)`, among pairs with both ends in the
/// window.
pub fn rotation_mismatches(chart: &ExtChart, eps: u8, center: (i32, i32)) -> Vec<((i32, i32), usize, usize)> {
    let Some(w) = &chart.window else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for y in w.s.0..=w.s.1 {
        for x in w.x.0..=w.x.1 {
            let (rx, ry) = (center.0 - x, center.1 - y);
            if !(w.s.0..=w.s.1).contains(&ry) || !(w.x.0..=w.x.1).contains(&rx) {
                continue;
            }
            let a = chart.dim_adams(x, y, eps);
            let b = chart.dim_adams(rx, ry, eps);
            if a != b {
                out.push(((x, y), a, b));
            }
        }
    }
    out
}

/// Support of the `Q₁` Margolis homology of a `Q₀`-acyclic module, if any.
pub fn q1_support(n: &A1Module) -> Option<(i32, i32)> {
    let p = margolis(n);
    if !p.is_q0_acyclic() {
        return None;
    }
    let lo = *p.q1.keys().next()?;
    let hi = *p.q1.keys().next_back()?;
    Some((lo, hi))
}

/// Whether `(s, t)` lies outside the band where `𝓔xt^{s,t}(F, N)` can be
/// nonzero for `Q₀`-acyclic `N` with `Q₁` support in `[d1, d2]`.
pub fn outside_vanishing_band(s: i32, t: i32, d1: i32, d2: i32) -> bool {
    let x = t - s;
    x < 2 * s - d2 - 3 || x > 2 * s - d1
}

/// Nonzero cells of a chart lying outside the vanishing band of `n`.
pub fn vanishing_violations(n: &A1Module, chart: &ExtChart) -> Result<Vec<(i32, i32, u8)>, ExtError> {
    let (d1, d2) = q1_support(n).ok_or_else(|| ExtError::Range(format!("`{}` is not Q0-acyclic with Q1 homology", n.name())))?;
    Ok(chart.dims.keys().copied().filter(|&(s, t, _)| outside_vanishing_band(s, t, d1, d2)).collect())
}

/// Cells of the window where multiplication by `b` is not an isomorphism.
pub fn b_periodicity_failures(n: &A1Module, window: &ChartWindow, budget: SearchBudget) -> Result<Vec<(i32, i32, u8)>, ExtError> {
    window.validate()?;
    let mut models = StextModels::new(n)?;
    let (bs, bt, _) = ExtGen::B.index();
    let mut out = Vec::new();
    for &e in &window.eps {
        for s in window.s.0..=window.s.1 {
            let act = models.action_map(ExtGen::B, s, e, budget)?;
            for x in window.x.0..=window.x.1 {
                let t = x + s;
                let d = models.dim(s, t, e)?;
                let d2 = models.dim(s + bs, t + bt, e)?;
                if d != d2 || (d > 0 && models.apply_action(&act, s, t, e)?.rank() != d) {
                    out.push((s, t, e));
                }
            }
        }
    }
    Ok(out)
}

/// `dim [src, Σ^t Ω^{−s} J^{⊗ε} ⊗ N]` for an arbitrary finite source.
pub fn stable_cell_from(src: &A1Module, models: &mut StextModels, s: i32, t: i32, eps: u8) -> Result<usize, ExtError> {
    let y = models.model(s, eps)?.suspend(t);
    Ok(stable_hom(src, &y).stable_dim)
}

// ---------------------------------------------------------------------------
// Named classes of the A-family
// ---------------------------------------------------------------------------

/// The distinguished classes of `𝓔xt(F, A_{k,ε})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedClass {
    /// `μ_{k,ε} ∈ 𝓔xt^{1,0,0}(F, A_{k,ε})`.
    Mu { k: u32, eps: u8 },
    /// `λ_k ∈ 𝓔xt^{k,k−3,0}(F, A_{k,1})`.
    Lambda { k: u32 },
    /// `ν_k ∈ 𝓔xt^{k+2,k+3,0}(F, A_{k,0})`.
    Nu { k: u32 },
}

impl NamedClass {
    pub fn name(self) -> String {
        match self {
            NamedClass::Mu { k, eps } => format!("mu_{k},{eps}"),
            NamedClass::Lambda { k } => format!("lambda_{k}"),
            NamedClass::Nu { k } => format!("nu_{k}"),
        }
    }

    /// `(k, ε)` of the coefficient module and the cell `(s, t, ε)`.
    pub fn location(self) -> ((u32, u8), (i32, i32, u8)) {
        match self {
            NamedClass::Mu { k, eps } => ((k, eps), (1, 0, 0)),
            NamedClass::Lambda { k } => ((k, 1), (k as i32, k as i32 - 3, 0)),
            NamedClass::Nu { k } => ((k, 0), (k as i32 + 2, k as i32 + 3, 0)),
        }
    }
}

/// The inclusion `A_{k,ε} → N_{k,ε} = Σ^{−(k+1)} Ω^{k+1} J^{⊗ε}` of the
/// defining extension (`k ≥ 1`).
pub fn a_inclusion(k: u32, eps: u8) -> Result<Morphism, ExtError> {
    let n = crate::families::make_n(k, eps);
    let homs = crate::stable::hom(&n, &unit_module());
    let [p] = homs.as_slice() else {
        return Err(ExtError::NotUnique { name: "N → F".into(), cell: format!("k={k} eps={eps}"), dim: homs.len() });
    };
    let a = make_a(k, eps)?;
    let incl = p.kernel().inclusion_map();
    if !incl.source.same_structure(&a) {
        return Err(ExtError::Consistency(format!("kernel of N → F is not A_{k},{eps}")));
    }
    Ok(Morphism::new(&a, &n, incl.blocks().clone())?)
}

/// A cell basis of `𝓔xt^{s,t,ε}(F, M)` and the matrix of the map induced by
/// `f : M → M'` into a basis of the corresponding cell for `M'`.
///
/// Both sides are modelled as `(P ⊗ −)^red` with `P = Ω^{−s} J^{⊗ε}`, so
/// that `f` acts as `id ⊗ f`.
pub fn induced_cell_map(f: &Morphism, s: i32, t: i32, eps: u8) -> Result<(Vec<StextClass>, Vec<StextClass>, BitMatrix), ExtError> {
    let p = omega_power(-s, eps);
    let src = reduce(&tensor(&p, &f.source)?)?;
    let dst = reduce(&tensor(&p, &f.target)?)?;
    let pf = crate::stable::tensor_morphism(&Morphism::identity(&p), f)?;
    let map = src.inclusion.then(&pf).then(&dst.retraction);
    let class = |m: &A1Module, v: &BitVector| StextClass { s, t, eps, model: m.clone(), vector: v.clone() };
    let sb = Subspace::from_vectors(src.reduced.dim(-t), &src.reduced.socle(-t));
    let db = Subspace::from_vectors(dst.reduced.dim(-t), &dst.reduced.socle(-t));
    let mut m = BitMatrix::zeros(db.dim(), sb.dim());
    for (c, v) in sb.basis().iter().enumerate() {
        let coords = db
            .coords(&map.apply(-t, v))
            .ok_or_else(|| ExtError::Consistency("induced map left the socle".into()))?;
        for r in coords.ones() {
            m.set(r, c, true);
        }
    }
    let sources = sb.basis().iter().map(|v| class(&src.reduced, v)).collect();
    let targets = db.basis().iter().map(|v| class(&dst.reduced, v)).collect();
    Ok((sources, targets, m))
}

/// The named class.
///
/// `μ` and `λ` are the unique nonzero classes of their cells.  `ν_k` is a
/// pre-image of the generator of the (one-dimensional) target cell under
/// `A_{k,0} → N_{k,0}`; when the kernel meets the cell (it does for `k = 1`,
/// where it contains `h₁²μ`) the pre-image is the solution returned by
/// elimination, and the result is determined modulo that kernel.
pub fn named_class(c: NamedClass) -> Result<StextClass, ExtError> {
    let ((k, eps), (s, t, e)) = c.location();
    if k == 0 {
        return Err(ExtError::Range("named classes need k ≥ 1".into()));
    }
    if let NamedClass::Nu { .. } = c {
        let (sources, targets, m) = induced_cell_map(&a_inclusion(k, 0)?, s, t, e)?;
        if targets.len() != 1 {
            return Err(ExtError::NotUnique { name: c.name(), cell: format!("target ({s},{t},{e})"), dim: targets.len() });
        }
        let x = Solver::new(&m)
            .solve(&BitVector::unit(1, 0))
            .ok_or_else(|| ExtError::Consistency(format!("{} has no pre-image", c.name())))?;
        let mut v = BitVector::zeros(sources[0].vector.len());
        for i in x.ones() {
            v.add_assign(&sources[i].vector);
        }
        return Ok(StextClass { vector: v, ..sources[0].clone() });
    }
    let a = make_a(k, eps)?;
    let mut models = StextModels::new(&a)?;
    let classes = models.cell_classes(s, t, e)?;
    if classes.len() != 1 {
        return Err(ExtError::NotUnique { name: c.name(), cell: format!("({s},{t},{e})"), dim: classes.len() });
    }
    Ok(classes.into_iter().next().expect("one class"))
}

/// Checks the defining property of `λ_k`: `bλ_k` maps to a nonzero class
/// (the class `αh₁`) under `A_{k,1} → N_{k,1}`, and the induced map is
/// injective on that cell so the pre-image is unique.
pub fn lambda_is_preimage(k: u32) -> Result<bool, ExtError> {
    let lambda = named_class(NamedClass::Lambda { k })?;
    let bl = multiply(ExtGen::B, &lambda)?;
    let (_, targets, m) = induced_cell_map(&a_inclusion(k, 1)?, bl.s, bl.t, bl.eps)?;
    Ok(!bl.is_zero() && targets.len() == 1 && m.rank() == m.cols() && m.rank() == 1)
}

/// The connecting map `ΩF → A_{k,ε}` of the extension `A_{k,ε} → N → F`
/// defining `A_{k,ε}` (for `(k,ε) ≠ (0,1)`), and whether it is stably
/// nonzero.  Its class is `μ_{k,ε}`.
pub fn connecting_map(k: u32, eps: u8) -> Result<(Morphism, bool), ExtError> {
    let n = crate::families::make_n(k, eps);
    let homs = crate::stable::hom(&n, &unit_module());
    let [p] = homs.as_slice() else {
        return Err(ExtError::NotUnique { name: "N → F".into(), cell: format!("k={k} eps={eps}"), dim: homs.len() });
    };
    let kernel = p.kernel();
    // Lift the generator of A(1) → F through p.
    let one = Solver::new(&p.at(0))
        .solve(&BitVector::unit(1, 0))
        .ok_or_else(|| ExtError::Consistency("N → F is not surjective".into()))?;
    let res = resolution_of_unit(1);
    let p0 = &res.stages[0];
    let lift = free_map(&p0.free, &p0.module, &n, &[one]);
    let omega_f = res.stages[1].d.image();
    let restricted = omega_f.inclusion_map().then(&lift);
    // The restriction lands in ker p = A_{k,ε}.
    let mut maps = BTreeMap::new();
    for d in omega_f.module.degrees() {
        let m = restricted.at(d);
        let space = kernel.spaces.get(&d).cloned().unwrap_or_else(|| Subspace::zero(n.dim(d)));
        let mut out = BitMatrix::zeros(space.dim(), m.cols());
        for c in 0..m.cols() {
            let coords = space
                .coords(&m.column(c))
                .ok_or_else(|| ExtError::Consistency("connecting map leaves the kernel".into()))?;
            for r in coords.ones() {
                out.set(r, c, true);
            }
        }
        maps.insert(d, out);
    }
    let delta = Morphism::new(&omega_f.module, &kernel.module, maps)?;
    let nonzero = !crate::stable::factors_through_projective(&delta);
    Ok((delta, nonzero))
}

// ---------------------------------------------------------------------------
// Relations in the stable Ext of the A-family
// ---------------------------------------------------------------------------

/// One checked relation: a label and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub label: String,
    pub holds: bool,
}

impl ExtChart {
    /// Rank of `h₀ⁿ` out of the cell `(s, t, ε)`; zero if any intermediate
    /// cell is missing from the chart.
    pub fn h0_power_rank(&self, n: usize, s: i32, t: i32, eps: u8) -> usize {
        let mut m: Option<BitMatrix> = None;
        for i in 0..n as i32 {
            let Some(step) = self.h0.get(&(s + i, t + i, eps)) else {
                return 0;
            };
            m = Some(match m {
                None => step.clone(),
                Some(prev) => step.mul(&prev),
            });
        }
        m.map(|m| m.rank()).unwrap_or(0)
    }
}

/// The relations satisfied by the named classes of `𝓔xt(F, A_{k,1})` and
/// `𝓔xt(F, A_{k,0})`, with the sharpness of the `h₀`-annihilation exponents.
pub fn ake_relations(k: u32, budget: SearchBudget) -> Result<Vec<RelationCheck>, ExtError> {
    use ExtGen::*;
    let ku = k as usize;
    let mut out = Vec::new();
    let mut push = |label: String, holds: bool| out.push(RelationCheck { label, holds });
    let eq = |x: &StextClass, y: &StextClass| -> Result<bool, ExtError> { Ok(classes_equal(x, y, budget)? == Some(true)) };

    // ε = 1.
    let lambda = named_class(NamedClass::Lambda { k })?;
    let mu = named_class(NamedClass::Mu { k, eps: 1 })?;
    for g in [A, Kappa, H0] {
        push(format!("{}·λ = 0", g.name()), multiply(g, &lambda)?.is_zero());
    }
    let lhs = multiply_power(H1, 2, &lambda)?;
    let rhs = multiply_power(H0, ku + 1, &mu)?;
    push(format!("h0^{}·μ ≠ 0 (eps=1)", k + 1), !rhs.is_zero());
    push(format!("h1²·λ = h0^{}·μ", k + 1), eq(&lhs, &rhs)?);
    push(format!("h0^{}·κ·μ = 0 (eps=1)", k), multiply_power(H0, ku, &multiply(Kappa, &mu)?)?.is_zero());
    let a = make_a(k, 1)?;
    let w = ChartWindow { s: (-3, 3 + k as i32 + 4), x: (-4, 11), eps: vec![0, 1] };
    let c = stext_chart(&a, &w, budget)?;
    let annihilated = c
        .dims
        .keys()
        .filter(|&&(s, _, _)| s + k as i32 + 2 <= w.s.1)
        .all(|&(s, t, e)| c.h0_power_rank(ku + 2, s, t, e) == 0);
    push(format!("h0^{} annihilates the chart window (eps=1)", k + 2), annihilated);

    // ε = 0.
    let nu = named_class(NamedClass::Nu { k })?;
    let mu = named_class(NamedClass::Mu { k, eps: 0 })?;
    for g in [A, Kappa, H0] {
        push(format!("{}·ν = 0", g.name()), multiply(g, &nu)?.is_zero());
    }
    let lhs = multiply_power(H1, 2, &nu)?;
    let rhs = multiply_power(H0, ku, &multiply(A, &mu)?)?;
    push(format!("h0^{}·a·μ ≠ 0", k), !rhs.is_zero());
    push(format!("h1²·ν = h0^{}·a·μ", k), eq(&lhs, &rhs)?);
    push(format!("h0^{}·μ = 0 (eps=0)", k + 1), multiply_power(H0, ku + 1, &mu)?.is_zero());
    push(format!("h0^{}·μ ≠ 0 (eps=0)", k), !multiply_power(H0, ku, &mu)?.is_zero());
    Ok(out)
}

/// Cells `(s, t, ε)` where two charts differ.
pub type CellList = Vec<(i32, i32, u8)>;

/// Compares `𝓔xt^{s,t}(K_n, N)` with `𝓔xt^{s+n,t+n}(F, N)` over a window,
/// where `K_n` is the `n`-th Toda splice module.
///
/// In the grading used here (`𝓔xt^{s,t}(X, N) = [X, Σᵗ Ω^{−s} N]`) the
/// connecting morphisms of the Toda sequence raise `s` by one for each stage,
/// and `κ_n ≅ ΣⁿK_n` accounts for the shift of `t`. Returns the cells where
/// the dimensions differ and the number of nonzero cells compared.
pub fn toda_reindex_mismatches(n: &A1Module, stage: u32, window: &ChartWindow) -> Result<(CellList, usize), ExtError> {
    window.validate()?;
    let k = crate::families::toda_k(stage);
    let mut models = StextModels::new(n)?;
    let d = stage as i32;
    let mut bad = Vec::new();
    let mut nonzero = 0;
    for &e in &window.eps {
        for s in window.s.0..=window.s.1 {
            for x in window.x.0..=window.x.1 {
                let t = x + s;
                let lhs = stable_cell_from(&k, &mut models, s, t, e)?;
                nonzero += usize::from(lhs > 0);
                if lhs != models.dim(s + d, t + d, e)? {
                    bad.push((s, t, e));
                }
            }
        }
    }
    Ok((bad, nonzero))
}
