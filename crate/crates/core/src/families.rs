//! Constructors for the named module families: the small literal modules,
//! truncated projective spaces and their duals, the filtration pieces `f_iR`,
//! the normalized modules `A_{k,ε}`, Brown–Gitler modules, the Toda complex,
//! the bottom-class killing constructions and the `D₈` action on orbits.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::a1core::algebra::TOP;
use crate::a1core::free::a1_regular;
use crate::a1core::margolis::{margolis, MargolisProfile};
use crate::a1core::module::{A1Module, ModuleError};
use crate::a1core::morphism::Morphism;
use crate::a1core::reduce::reduce;
use crate::gf2::{BitMatrix, BitVector, Subspace};
use crate::stable::{
    dual, find_module_iso, hom, is_stably_iso, joker, omega, picard_element, tensor,
    unit_module, PicardIndex, SearchBudget, StableError, Verdict, WINDOW_MARGIN,
};

/// Errors raised by the family constructors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    UnknownKind(String),
    #[error("family `{kind}` takes {expected} parameter(s), got {got}")]
    Arity { kind: String, expected: String, got: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    /// An internal cross-check failed; this signals a construction bug or a
    /// counterexample to an expected structural property.
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("no embedding: {0}")]
    NoEmbedding(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Stable(#[from] StableError),
}

// ---------------------------------------------------------------------------
// Family specifications
// ---------------------------------------------------------------------------

/// The named families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    F,
    J,
    QuestionMark,
    Z,
    A1ModA0,
    A1,
    FiR,
    A,
    N,
    TruncProjective,
    BgT,
    BgT0,
    P0Trunc,
    RTrunc,
    Dp0Trunc,
    DrTrunc,
    TodaC,
    TodaK,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 18] = [
        FamilyKind::F,
        FamilyKind::J,
        FamilyKind::QuestionMark,
        FamilyKind::Z,
        FamilyKind::A1ModA0,
        FamilyKind::A1,
        FamilyKind::FiR,
        FamilyKind::A,
        FamilyKind::N,
        FamilyKind::TruncProjective,
        FamilyKind::BgT,
        FamilyKind::BgT0,
        FamilyKind::P0Trunc,
        FamilyKind::RTrunc,
        FamilyKind::Dp0Trunc,
        FamilyKind::DrTrunc,
        FamilyKind::TodaC,
        FamilyKind::TodaK,
    ];

    /// The name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::F => "F",
            FamilyKind::J => "J",
            FamilyKind::QuestionMark => "question_mark",
            FamilyKind::Z => "Z",
            FamilyKind::A1ModA0 => "A1_mod_A0",
            FamilyKind::A1 => "A1",
            FamilyKind::FiR => "fiR",
            FamilyKind::A => "A",
            FamilyKind::N => "N",
            FamilyKind::TruncProjective => "trunc_projective",
            FamilyKind::BgT => "BG_T",
            FamilyKind::BgT0 => "BG_T0",
            FamilyKind::P0Trunc => "P0_trunc",
            FamilyKind::RTrunc => "R_trunc",
            FamilyKind::Dp0Trunc => "DP0_trunc",
            FamilyKind::DrTrunc => "DR_trunc",
            FamilyKind::TodaC => "toda_C",
            FamilyKind::TodaK => "toda_K",
        }
    }

    pub fn from_name(s: &str) -> Result<Self, FamilyError> {
        Self::ALL.iter().copied().find(|k| k.name() == s).ok_or_else(|| FamilyError::UnknownKind(s.into()))
    }

    /// Allowed numbers of parameters, and their meaning.
    pub fn arity(self) -> (&'static [usize], &'static str) {
        match self {
            FamilyKind::F
            | FamilyKind::J
            | FamilyKind::QuestionMark
            | FamilyKind::Z
            | FamilyKind::A1ModA0
            | FamilyKind::A1 => (&[0], ""),
            FamilyKind::FiR => (&[1], "i"),
            FamilyKind::A | FamilyKind::N => (&[2], "k eps"),
            FamilyKind::TruncProjective => (&[2], "a b"),
            FamilyKind::BgT | FamilyKind::BgT0 => (&[1], "weight"),
            FamilyKind::P0Trunc | FamilyKind::RTrunc | FamilyKind::Dp0Trunc | FamilyKind::DrTrunc => {
                (&[0, 1], "[depth]")
            }
            FamilyKind::TodaC | FamilyKind::TodaK => (&[1], "n"),
        }
    }
}

/// A family member: kind, integer parameters, optional truncation window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Vec<i32>,
    pub window: Option<(i32, i32)>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, params: &[i32]) -> Self {
        FamilySpec { kind, params: params.to_vec(), window: None }
    }
}

/// Default depth of the truncated infinite modules.
pub const DEFAULT_DEPTH: i32 = 24;

/// Builds a family member.
pub fn build(spec: &FamilySpec) -> Result<A1Module, FamilyError> {
    let (arities, usage) = spec.kind.arity();
    if !arities.contains(&spec.params.len()) {
        return Err(FamilyError::Arity {
            kind: spec.kind.name().into(),
            expected: if usage.is_empty() { "no".into() } else { usage.into() },
            got: spec.params.len(),
        });
    }
    let p = &spec.params;
    let eps = |x: i32| -> Result<u8, FamilyError> {
        match x {
            0 | 1 => Ok(x as u8),
            _ => Err(FamilyError::Param(format!("eps must be 0 or 1, got {x}"))),
        }
    };
    let k_of = |x: i32| -> Result<u32, FamilyError> {
        if x >= 1 {
            Ok(x as u32)
        } else {
            Err(FamilyError::Param(format!("k must be at least 1, got {x}")))
        }
    };
    let nonneg = |x: i32, what: &str| -> Result<u32, FamilyError> {
        u32::try_from(x).map_err(|_| FamilyError::Param(format!("{what} must be nonnegative, got {x}")))
    };
    let depth = || -> Result<i32, FamilyError> {
        match (p.first(), spec.window) {
            (Some(&d), _) => Ok(d),
            (None, Some((lo, hi))) => {
                let forced_lo = match spec.kind {
                    FamilyKind::P0Trunc | FamilyKind::RTrunc => Some(-1),
                    _ => None,
                };
                let forced_hi = match spec.kind {
                    FamilyKind::Dp0Trunc | FamilyKind::DrTrunc => Some(1),
                    _ => None,
                };
                if forced_lo.is_some_and(|l| l != lo) || forced_hi.is_some_and(|h| h != hi) {
                    return Err(FamilyError::Param(format!(
                        "window [{lo}, {hi}] violates the support of {}",
                        spec.kind.name()
                    )));
                }
                Ok(if forced_lo.is_some() { hi } else { -lo })
            }
            (None, None) => Ok(DEFAULT_DEPTH),
        }
    };
    match spec.kind {
        FamilyKind::F => Ok(unit_module()),
        FamilyKind::J => Ok(joker()),
        FamilyKind::QuestionMark => Ok(question_mark()),
        FamilyKind::Z => Ok(z_module()),
        FamilyKind::A1ModA0 => Ok(a1_mod_a0()),
        FamilyKind::A1 => Ok(a1_regular()),
        FamilyKind::FiR => fi_r(k_of(p[0])?),
        FamilyKind::A => make_a(k_of(p[0])?, eps(p[1])?),
        FamilyKind::N => Ok(make_n(k_of(p[0])?, eps(p[1])?)),
        FamilyKind::TruncProjective => trunc_projective(p[0], p[1]),
        FamilyKind::BgT => brown_gitler(BgKind::T, nonneg(p[0], "weight")?),
        FamilyKind::BgT0 => brown_gitler(BgKind::T0, nonneg(p[0], "weight")?),
        FamilyKind::P0Trunc => p0_trunc(depth()?),
        FamilyKind::RTrunc => r_trunc(depth()?),
        FamilyKind::Dp0Trunc => dp0_trunc(depth()?),
        FamilyKind::DrTrunc => dr_trunc(depth()?),
        FamilyKind::TodaC => Ok(toda_c(nonneg(p[0], "n")?)),
        FamilyKind::TodaK => Ok(toda_k(nonneg(p[0], "n")?)),
    }
}

// ---------------------------------------------------------------------------
// Memoization
// ---------------------------------------------------------------------------

/// A process-wide cache; the lock is not held while a value is computed, so
/// recursive constructions cannot deadlock (a value may be computed twice,
/// which is harmless since constructions are deterministic).
struct Memo<K, V>(OnceLock<Mutex<HashMap<K, V>>>);

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    const fn new() -> Self {
        Memo(OnceLock::new())
    }

    fn get_or<E>(&self, key: K, f: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        let map = self.0.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = map.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        map.lock().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// Small modules
// ---------------------------------------------------------------------------

/// A module from a list of generators `(degree)` and arrows `(op, from, to)`.
fn literal(name: &str, degrees: &[i32], arrows: &[(u8, usize, usize)]) -> A1Module {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut index = Vec::new();
    for &d in degrees {
        let e = dims.entry(d).or_insert(0);
        index.push(*e);
        *e += 1;
    }
    let mut s1: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    let mut s2: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    for &(op, from, to) in arrows {
        let d = degrees[from];
        assert_eq!(degrees[to], d + op as i32, "literal arrow raises degree by the operation degree");
        let store = if op == 1 { &mut s1 } else { &mut s2 };
        let m = store.entry(d).or_insert_with(|| BitMatrix::zeros(dims[&(d + op as i32)], dims[&d]));
        m.flip(index[to], index[from]);
    }
    A1Module::from_maps(name, &dims, &s1, &s2).expect("literal modules are valid")
}

/// `Z`: classes x(−1), y(0) with Sq¹x = y.
pub fn z_module() -> A1Module {
    literal("Z", &[-1, 0], &[(1, 0, 1)])
}

/// `A(1)⊗_{A(0)}𝔽`: classes in degrees 0, 2, 3, 5 joined by Sq², Sq¹, Sq².
pub fn a1_mod_a0() -> A1Module {
    literal("A1//A0", &[0, 2, 3, 5], &[(2, 0, 1), (1, 1, 2), (2, 2, 3)])
}

/// The question-mark complex `Σ³Ω⁻¹J`: x(−1), y(0), z(2) with Sq¹x = y, Sq²y = z.
pub fn question_mark() -> A1Module {
    literal("Q", &[-1, 0, 2], &[(1, 0, 1), (2, 1, 2)])
}

// ---------------------------------------------------------------------------
// Truncated projective spaces
// ---------------------------------------------------------------------------

/// Binomial coefficient `C(n, i)` mod 2 for `i ∈ {1, 2}` and any integer `n`.
fn binom_mod2(n: i32, i: u8) -> bool {
    match i {
        1 => n.rem_euclid(2) == 1,
        2 => (n.rem_euclid(4) / 2) == 1,
        _ => unreachable!("only Sq1 and Sq2"),
    }
}

/// `P^b_a`: classes uⁿ for `a ≤ n ≤ b` with `Sqⁱuⁿ = C(n,i)u^{n+i}`.
pub fn trunc_projective(a: i32, b: i32) -> Result<A1Module, FamilyError> {
    if a > b {
        return Err(FamilyError::Param(format!("trunc_projective needs a ≤ b, got a = {a}, b = {b}")));
    }
    let dims = vec![1; (b - a + 1) as usize];
    let op = |i: u8| {
        move |n: i32| {
            let rows = if n + (i as i32) <= b { 1 } else { 0 };
            let mut m = BitMatrix::zeros(rows, 1);
            if rows == 1 && binom_mod2(n, i) {
                m.set(0, 0, true);
            }
            m
        }
    };
    Ok(A1Module::from_fns(&format!("P^{b}_{a}"), a, dims, op(1), op(2))?)
}

fn check_depth(depth: i32) -> Result<(), FamilyError> {
    if depth < 2 * WINDOW_MARGIN {
        return Err(FamilyError::Param(format!(
            "truncation depth {depth} is below the minimum {}",
            2 * WINDOW_MARGIN
        )));
    }
    Ok(())
}

/// `P₀ = P^∞_{−1}` truncated to degrees `[−1, depth]`.
pub fn p0_trunc(depth: i32) -> Result<A1Module, FamilyError> {
    check_depth(depth)?;
    Ok(trunc_projective(-1, depth)?.with_name(&format!("P0[-1,{depth}]")).with_window(Some((-1, depth)))?)
}

/// `R = P₀/𝔽` (the class u⁰ is primitive) truncated to `[−1, depth]`.
pub fn r_trunc(depth: i32) -> Result<A1Module, FamilyError> {
    let p0 = p0_trunc(depth)?;
    let mut spaces = BTreeMap::new();
    spaces.insert(0, Subspace::full(1));
    let q = p0.submodule(spaces).quotient();
    Ok(q.module.with_name(&format!("R[-1,{depth}]")).with_window(Some((-1, depth)))?)
}

/// `DP₀` truncated to `[−depth, 1]`.
pub fn dp0_trunc(depth: i32) -> Result<A1Module, FamilyError> {
    Ok(dual(&p0_trunc(depth)?).with_name(&format!("DP0[-{depth},1]")))
}

/// `DR` truncated to `[−depth, 1]`.
pub fn dr_trunc(depth: i32) -> Result<A1Module, FamilyError> {
    Ok(dual(&r_trunc(depth)?).with_name(&format!("DR[-{depth},1]")))
}

/// Degrees of a windowed module in which stable statements are trusted.
///
/// Edges of the window that are genuine bounds of the infinite module (such
/// as the bottom of `P₀`) need no margin.
pub fn trusted_range(m: &A1Module, real_lo: bool, real_hi: bool) -> (i32, i32) {
    match m.window() {
        None => (m.lo(), m.hi()),
        Some((lo, hi)) => (
            if real_lo { lo } else { lo + WINDOW_MARGIN },
            if real_hi { hi } else { hi - WINDOW_MARGIN },
        ),
    }
}

// ---------------------------------------------------------------------------
// The filtration f_iR
// ---------------------------------------------------------------------------

/// `f_iR`: the submodule of `R` generated by the classes of degree ≤ 4i−5.
///
/// Checked: total dimension 4i, Q₁-acyclic, Q₀ classes in degrees −1 and 4i.
pub fn fi_r(i: u32) -> Result<A1Module, FamilyError> {
    if i == 0 {
        return Err(FamilyError::Param("f_iR needs i ≥ 1".into()));
    }
    let i = i as i32;
    let r = r_trunc((4 * i + 8).max(2 * WINDOW_MARGIN))?;
    let gens: Vec<(i32, BitVector)> =
        r.degrees().filter(|&n| n <= 4 * i - 5 && r.dim(n) > 0).map(|n| (n, BitVector::unit(r.dim(n), 0))).collect();
    let m = r.submodule_generated(&gens).module.with_name(&format!("f{i}R"));
    let p = margolis(&m);
    let expected = MargolisProfile::from_lists(&[(-1, 1), (4 * i, 1)], &[]);
    if m.total_dim() != 4 * i as usize || p != expected {
        return Err(FamilyError::Consistency(format!(
            "f{i}R has dimension {} and profile {p:?}",
            m.total_dim()
        )));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// The modules N_{k,ε} and A_{k,ε}
// ---------------------------------------------------------------------------

/// `N_{k,ε} = Σ^{−(k+1)}Ω^{k+1}J^{⊗ε}`.
pub fn make_n(k: u32, eps: u8) -> A1Module {
    let s = -(k as i32 + 1);
    picard_element(PicardIndex::new(s, s, eps)).with_name(&format!("N_{k},{eps}"))
}

static A_CACHE: Memo<(u32, u8), A1Module> = Memo::new();

/// `A_{k,ε}`: the kernel of the unique nonzero map `N_{k,ε} → 𝔽`.
///
/// `A_{0,1}` is defined as `Σ³Z`.  Checked: the hom space to 𝔽 is
/// one-dimensional, the kernel is reduced and Q₀-acyclic with Q₁ classes in
/// degrees 3 and 2(k+1), and its bottom degree is 2.
pub fn make_a(k: u32, eps: u8) -> Result<A1Module, FamilyError> {
    A_CACHE.get_or((k, eps), || {
        if k == 0 {
            return if eps == 1 {
                Ok(z_module().suspend(3).with_name("A_0,1"))
            } else {
                Err(FamilyError::Param("A_{0,0} is not defined".into()))
            };
        }
        let n = make_n(k, eps);
        let maps = hom(&n, &unit_module());
        if maps.len() != 1 {
            return Err(FamilyError::Consistency(format!(
                "hom(N_{k},{eps}, F) has dimension {}, expected 1",
                maps.len()
            )));
        }
        let a = maps[0].kernel().module.with_name(&format!("A_{k},{eps}"));
        let p = margolis(&a);
        let expected = MargolisProfile::from_lists(&[], &[(3, 1), (2 * (k as i32 + 1), 1)]);
        if !a.is_reduced() || p != expected {
            return Err(FamilyError::Consistency(format!(
                "A_{k},{eps}: reduced = {}, profile {p:?}",
                a.is_reduced()
            )));
        }
        if a.lo() != 2 {
            return Err(FamilyError::Consistency(format!("A_{k},{eps} has bottom degree {}", a.lo())));
        }
        Ok(a)
    })
}

/// The (Σ^{-3}Ω)-power `t` (any integer) of a Q₀-acyclic module, reduced.
pub fn shift_power(m: &A1Module, t: i32) -> Result<A1Module, FamilyError> {
    Ok(omega(m, t)?.suspend(-3 * t))
}

// ---------------------------------------------------------------------------
// Orbits and the D₈ action
// ---------------------------------------------------------------------------

/// A member `(Σ^{-3}Ω)^t A_{k,ε}` of the orbit `𝒪_{k,ε}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitElement {
    pub k: u32,
    pub eps: u8,
    /// Residue mod 4.
    pub t: u8,
    pub module: A1Module,
}

static ORBIT_CACHE: Memo<(u32, u8, u8), A1Module> = Memo::new();

/// The orbit member `(Σ^{-3}Ω)^t A_{k,ε}` (t taken mod 4), memoized.
pub fn orbit_member(k: u32, eps: u8, t: i32) -> Result<OrbitElement, FamilyError> {
    let t = t.rem_euclid(4) as u8;
    let module = ORBIT_CACHE.get_or((k, eps, t), || {
        let a = make_a(k, eps)?;
        Ok::<_, FamilyError>(shift_power(&a, t as i32)?.with_name(&format!("(S^-3 W)^{t} A_{k},{eps}")))
    })?;
    Ok(OrbitElement { k, eps, t, module })
}

/// Generators of the `D₈` action on an orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitOp {
    /// `Σ^{-3}Ω`, acting as `t ↦ t+1`.
    Shift,
    /// `𝔡_k = Σ^{2k+5}D`.
    DualK,
    /// `J ⊗ −`, acting as `t ↦ t+2`.
    Joker,
}

/// Applies an orbit operation and re-identifies the result among the four
/// members of the orbit of the same `(k, ε)`.
pub fn orbit_op(x: &OrbitElement, op: OrbitOp, budget: SearchBudget) -> Result<OrbitElement, FamilyError> {
    let image = match op {
        OrbitOp::Shift => shift_power(&x.module, 1)?,
        OrbitOp::Joker => reduce(&tensor(&joker(), &x.module)?)?.reduced,
        OrbitOp::DualK => dual(&x.module).suspend(2 * x.k as i32 + 5),
    };
    let order: Vec<i32> = match op {
        OrbitOp::Shift => vec![x.t as i32 + 1],
        OrbitOp::Joker => vec![x.t as i32 + 2],
        OrbitOp::DualK => {
            let guess = -(x.t as i32) - (x.k as i32 + 2 + 2 * x.eps as i32);
            (0..4).map(|i| guess + i).collect()
        }
    };
    for t in order {
        let cand = orbit_member(x.k, x.eps, t)?;
        if is_stably_iso(&image, &cand.module, budget).is_yes() {
            return Ok(cand);
        }
    }
    Err(FamilyError::Consistency(format!(
        "{op:?} applied to (k, eps, t) = ({}, {}, {}) matches no member of the orbit",
        x.k, x.eps, x.t
    )))
}

/// Whether `𝔡_k` fixes the orbit member, and the member it maps to.
pub fn dual_k_image(k: u32, eps: u8, t: i32, budget: SearchBudget) -> Result<u8, FamilyError> {
    Ok(orbit_op(&orbit_member(k, eps, t)?, OrbitOp::DualK, budget)?.t)
}

/// Checks `A_{k,ε} ≃ Σ^{−(k+1+6ε)}Ω^{k+2+2ε}DA_{k,ε}`.
pub fn duality_a(k: u32, eps: u8, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let a = make_a(k, eps)?;
    let e = eps as i32;
    let k = k as i32;
    let rhs = omega(&dual(&a), k + 2 + 2 * e)?.suspend(-(k + 1 + 6 * e));
    Ok(is_stably_iso(&a, &rhs, budget))
}

// ---------------------------------------------------------------------------
// Identifications of A_{k,ε}
// ---------------------------------------------------------------------------

/// The part of a module in degrees `≥ d` (a submodule).
pub fn degrees_at_least(m: &A1Module, d: i32) -> A1Module {
    let spaces: BTreeMap<i32, Subspace> = m
        .degrees()
        .map(|n| (n, if n >= d { Subspace::full(m.dim(n)) } else { Subspace::zero(m.dim(n)) }))
        .collect();
    m.submodule(spaces).module.with_name(&format!("({})^>={d}", m.name()))
}

/// Checks `A_{k,ε} ≃ (Σ^{4ε}(ΩΣ^{-1})^{k+1−2ε} DP₀)^{≥2}` using a truncation
/// of `DP₀` deep enough that the truncation artifacts stay below degree 2.
pub fn identify_a(k: u32, eps: u8, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let a = make_a(k, eps)?;
    let m = k as i32 + 1 - 2 * eps as i32;
    let depth = 8 * (m.abs() + 3);
    let d = dp0_trunc(depth)?;
    let x = omega(&d, m)?.suspend(-m + 4 * eps as i32);
    let x = degrees_at_least(&x, 2);
    Ok(is_stably_iso(&a, &x, budget))
}

/// The module predicted for `P^{2n}_{2m−1}`, `1 ≤ m < n`.
pub fn identify_a_trunc_prediction(m: u32, n: u32) -> Result<(A1Module, String), FamilyError> {
    if !(1 <= m && m < n) {
        return Err(FamilyError::Param(format!("need 1 ≤ m < n, got m = {m}, n = {n}")));
    }
    let k = n - m;
    let s = 2 * m as i32 - 3;
    let (eps, t) = if m % 2 == 1 {
        (if matches!(k % 4, 2 | 3) { 0 } else { 1 }, 0)
    } else {
        (if matches!(k % 4, 0 | 3) { 0 } else { 1 }, 3)
    };
    let x = orbit_member(k, eps, t)?;
    let label = if t == 0 {
        format!("S^{s} A_{k},{eps}")
    } else {
        format!("S^{s} (W^-1 S^3) A_{k},{eps}")
    };
    Ok((x.module.suspend(s), label))
}

/// Checks the module isomorphism `P^{2n}_{2m−1} ≅` prediction (both reduced).
pub fn identify_a_trunc(m: u32, n: u32, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let p = trunc_projective(2 * m as i32 - 1, 2 * n as i32)?;
    let (x, _) = identify_a_trunc_prediction(m, n)?;
    if !p.is_reduced() || !x.is_reduced() {
        return Ok(Verdict::No(format!(
            "reducedness: P = {}, prediction = {}",
            p.is_reduced(),
            x.is_reduced()
        )));
    }
    Ok(find_module_iso(&p, &x, budget))
}

// ---------------------------------------------------------------------------
// Binary helpers
// ---------------------------------------------------------------------------

/// `α(n)`: the number of ones in the binary expansion.
pub fn alpha(n: u32) -> u32 {
    n.count_ones()
}

/// `ν(n)`: the 2-adic valuation (`n > 0`).
pub fn nu(n: u32) -> u32 {
    assert!(n > 0, "valuation of zero");
    n.trailing_zeros()
}

// ---------------------------------------------------------------------------
// Brown–Gitler modules
// ---------------------------------------------------------------------------

/// Which weight component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BgKind {
    /// `𝒯(2n)`: exponent of ζ₀ even.
    T,
    /// `𝒯₀(4n)`: exponent of ζ₀ divisible by 4 and of ζ₁ even.
    T0,
}

/// Degree of a ζ-monomial, `Σ e_i (1 − 2^i)`.
pub fn zeta_degree(e: &[u32]) -> i32 {
    e.iter().enumerate().map(|(i, &x)| x as i32 * (1 - (1i32 << i))).sum()
}

/// Exponent vectors of weight `w` (length ⌊log₂ w⌋ + 1), unsorted.
fn weight_vectors(w: u32) -> Vec<Vec<u32>> {
    let len = if w == 0 { 1 } else { (32 - w.leading_zeros()) as usize };
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == 0 {
            cur[0] = rem;
            out.push(cur.clone());
            return;
        }
        let wt = 1u32 << i;
        for e in 0..=rem / wt {
            cur[i] = e;
            rec(i - 1, rem - e * wt, cur, out);
        }
        cur[i] = 0;
    }
    rec(len - 1, w, &mut cur, &mut out);
    out
}

/// The basis monomials of a Brown–Gitler weight component, sorted by
/// (degree, exponent vector).
pub fn bg_monomials(kind: BgKind, weight: u32) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = weight_vectors(weight)
        .into_iter()
        .filter(|e| match kind {
            BgKind::T => e[0] % 2 == 0,
            BgKind::T0 => e[0] % 4 == 0 && e.get(1).copied().unwrap_or(0) % 2 == 0,
        })
        .collect();
    v.sort_by(|a, b| (zeta_degree(a), a).cmp(&(zeta_degree(b), b)));
    v
}

/// `Sq¹` and `Sq²` of a ζ-monomial, as lists of exponent vectors (mod 2
/// multiplicities already cancelled).
///
/// Uses the total operation `Sq(ζ_i) = ζ_i + ζ_{i−1}²` (with `Sq ζ₀ = ζ₀`)
/// and multiplicativity.
pub fn zeta_action(e: &[u32], op: u8) -> Vec<Vec<u32>> {
    let mut terms: BTreeMap<Vec<u32>, bool> = BTreeMap::new();
    let mut toggle = |v: Vec<u32>| {
        let x = terms.entry(v).or_insert(false);
        *x = !*x;
    };
    match op {
        1 => {
            for i in 1..e.len() {
                if e[i] % 2 == 1 {
                    let mut v = e.to_vec();
                    v[i] -= 1;
                    v[i - 1] += 2;
                    toggle(v);
                }
            }
        }
        2 => {
            for i in 1..e.len() {
                // Two factors from the same variable.
                if (e[i] as u64 * (e[i] as u64).saturating_sub(1) / 2) % 2 == 1 {
                    let mut v = e.to_vec();
                    v[i] -= 2;
                    v[i - 1] += 4;
                    toggle(v);
                }
                for j in i + 1..e.len() {
                    if (e[i] * e[j]) % 2 == 1 {
                        let mut v = e.to_vec();
                        v[i] -= 1;
                        v[j] -= 1;
                        v[i - 1] += 2;
                        v[j - 1] += 2;
                        toggle(v);
                    }
                }
            }
        }
        _ => unreachable!("only Sq1 and Sq2"),
    }
    terms.into_iter().filter(|(_, on)| *on).map(|(v, _)| v).collect()
}

/// A module with the given monomial basis and the ζ-action; terms leaving the
/// basis are either an error (`drop_missing = false`) or discarded (when the
/// discarded monomials span a submodule, giving a quotient).
pub fn monomial_module(name: &str, monos: &[Vec<u32>], drop_missing: bool) -> Result<A1Module, FamilyError> {
    let norm = |v: &[u32]| -> Vec<u32> {
        let mut v = v.to_vec();
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    };
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut index: HashMap<Vec<u32>, (i32, usize)> = HashMap::new();
    for e in monos {
        let d = zeta_degree(e);
        let slot = dims.entry(d).or_insert(0);
        index.insert(norm(e), (d, *slot));
        *slot += 1;
    }
    let mut s: [BTreeMap<i32, BitMatrix>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for e in monos {
        let (d, c) = index[&norm(e)];
        for op in [1u8, 2] {
            for v in zeta_action(e, op) {
                match index.get(&norm(&v)) {
                    Some(&(dv, r)) => {
                        debug_assert_eq!(dv, d + op as i32);
                        let rows = dims[&dv];
                        let cols = dims[&d];
                        s[op as usize - 1].entry(d).or_insert_with(|| BitMatrix::zeros(rows, cols)).flip(r, c);
                    }
                    None if drop_missing => {}
                    None => {
                        return Err(FamilyError::Consistency(format!(
                            "{name}: Sq{op} of {e:?} leaves the basis ({v:?})"
                        )))
                    }
                }
            }
        }
    }
    Ok(A1Module::from_maps(name, &dims, &s[0], &s[1])?)
}

/// `𝒯(w)` (w even) or `𝒯₀(w)` (w ≡ 0 mod 4).
pub fn brown_gitler(kind: BgKind, weight: u32) -> Result<A1Module, FamilyError> {
    let ok = match kind {
        BgKind::T => weight.is_multiple_of(2),
        BgKind::T0 => weight.is_multiple_of(4),
    };
    if !ok {
        return Err(FamilyError::Param(format!("{kind:?} needs weight ≡ 0 mod {}, got {weight}", match kind {
            BgKind::T => 2,
            BgKind::T0 => 4,
        })));
    }
    let name = match kind {
        BgKind::T => format!("T({weight})"),
        BgKind::T0 => format!("T0({weight})"),
    };
    monomial_module(&name, &bg_monomials(kind, weight), false)
}

/// Outcome of the Mahowald short exact sequence check
/// `0 → 𝒯(2(2n−1)) → 𝒯(4n) → Σ^{−2n}𝒯(2n) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahowaldCheck {
    /// The ζ₀²-divisible monomials span a submodule isomorphic to 𝒯(4n−2).
    pub sub_ok: bool,
    /// The quotient, re-indexed by ζ_i ↦ ζ_{i−1}, is Σ^{−2n}𝒯(2n).
    pub quotient_ok: bool,
}

/// Verifies the Mahowald sequence for `n ≥ 1` by comparing action matrices
/// in the monomial bases (the bijections preserve the basis order).
pub fn mahowald_ses(n: u32) -> Result<MahowaldCheck, FamilyError> {
    let big = bg_monomials(BgKind::T, 4 * n);
    let sub: Vec<Vec<u32>> = big.iter().filter(|e| e[0] >= 2).cloned().collect();
    let quo: Vec<Vec<u32>> = big.iter().filter(|e| e[0] == 0).cloned().collect();
    let sub_m = monomial_module("sub", &sub, false)?;
    let quo_m = monomial_module("quo", &quo, true)?;
    let t_sub = brown_gitler(BgKind::T, 4 * n - 2)?;
    let t_quo = brown_gitler(BgKind::T, 2 * n)?.suspend(-2 * n as i32);
    Ok(MahowaldCheck {
        sub_ok: sub_m.same_structure(&t_sub) && sub.len() == bg_monomials(BgKind::T, 4 * n - 2).len(),
        quotient_ok: quo_m.same_structure(&t_quo),
    })
}

/// Checks `Σ^{2n}𝒯(2n) ≃ Σ^{−α(n)}Ω^{α(n)−1}A_{ν(n),1}` (with `A_{0,1} = Σ³Z`).
pub fn identify_bg(n: u32, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let t = brown_gitler(BgKind::T, 2 * n)?.suspend(2 * n as i32);
    let a = make_a(nu(n), 1)?;
    let al = alpha(n) as i32;
    let rhs = omega(&a, al - 1)?.suspend(-al);
    Ok(is_stably_iso(&t, &rhs, budget))
}

/// The Picard element predicted for `𝒯₀(4n)`: `(ΣΩ^{-1})^{2n−α(n)} ⊗ J^{n mod 2}`.
pub fn wfour_prediction(n: u32) -> PicardIndex {
    let j = 2 * n as i32 - alpha(n) as i32;
    PicardIndex::new(j, j, (n % 2) as u8)
}

/// Checks `𝒯₀(4n) ≃ (ΣΩ^{-1})^{2n−α(n)} ⊗ J^{n mod 2}`.
pub fn wfour(n: u32, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let t = brown_gitler(BgKind::T0, 4 * n)?;
    Ok(is_stably_iso(&t, &picard_element(wfour_prediction(n)), budget))
}

/// Checks `𝒯(2n) ≃ 𝒯₀(2n − 2^{ν+1}) ⊗ 𝒯(2^{ν+1})`.
pub fn wtwo_reduction(n: u32, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    let v = nu(n);
    let p = 1u32 << (v + 1);
    let lhs = brown_gitler(BgKind::T, 2 * n)?;
    let rhs = tensor(&brown_gitler(BgKind::T0, 2 * n - p)?, &brown_gitler(BgKind::T, p)?)?;
    Ok(is_stably_iso(&lhs, &rhs, budget))
}

/// For `ν ≥ 1`: the hom space `Σ^{5−2^{ν+1}}Ω^{−1}J → 𝒯(2^{ν+1})` is
/// one-dimensional and its generator is injective.
pub fn wtwo_inject_question(v: u32) -> Result<bool, FamilyError> {
    if v == 0 {
        return Err(FamilyError::Param("needs ν ≥ 1".into()));
    }
    let src = question_mark().suspend(2 - (1i32 << (v + 1)));
    let t = brown_gitler(BgKind::T, 1 << (v + 1))?;
    let maps = hom(&src, &t);
    Ok(maps.len() == 1 && maps[0].is_injective())
}

/// Checks `𝒯(2^{ν+1} − 2) ≃ Σ^{5−ν−2^{ν+1}}Ω^{ν−1}Z` (ν ≥ 1).
pub fn mahowald_special_case(v: u32, budget: SearchBudget) -> Result<Verdict, FamilyError> {
    if v == 0 {
        return Err(FamilyError::Param("needs ν ≥ 1".into()));
    }
    let t = brown_gitler(BgKind::T, (1 << (v + 1)) - 2)?;
    let v = v as i32;
    let rhs = omega(&z_module(), v - 1)?.suspend(5 - v - (1 << (v + 1)));
    Ok(is_stably_iso(&t, &rhs, budget))
}

// ---------------------------------------------------------------------------
// The Toda complex
// ---------------------------------------------------------------------------

/// `𝒞_n`: `A(1)//A(0)`, `ΣA(1)`, `Σ²A(1)`, `Σ⁴A(1)//A(0)`, then `𝒞_{n+4} = Σ⁸𝒞_n`.
pub fn toda_c(n: u32) -> A1Module {
    let base = match n % 4 {
        0 => a1_mod_a0(),
        1 => a1_regular().suspend(1),
        2 => a1_regular().suspend(2),
        _ => a1_mod_a0().suspend(4),
    };
    base.suspend(8 * (n / 4) as i32).with_name(&format!("C_{n}"))
}

/// `K_n`: `𝔽`, `Σ⁵Ω⁻¹J`, `Σ⁴J`, `Σ³ΩJ`, then `K_{n+4} = Σ⁸K_n`.
pub fn toda_k(n: u32) -> A1Module {
    let idx = match n % 4 {
        0 => PicardIndex::new(0, 0, 0),
        1 => PicardIndex::new(1, 5, 1),
        2 => PicardIndex::new(0, 4, 1),
        _ => PicardIndex::new(-1, 3, 1),
    };
    picard_element(idx).suspend(8 * (n / 4) as i32).with_name(&format!("K_{n}"))
}

/// One stage of the Toda complex.
#[derive(Clone, Debug)]
pub struct TodaStage {
    pub n: u32,
    /// `Σⁿ𝒞_n`.
    pub c: A1Module,
    /// `K_n`.
    pub k: A1Module,
    /// The splice module `κ_n = im(d_n) ⊂ Σ^{n−1}𝒞_{n−1}` (for n = 0, it is 𝔽).
    pub kappa: A1Module,
    /// The differential `Σⁿ𝒞_n → Σ^{n−1}𝒞_{n−1}` (for n = 0, the augmentation onto 𝔽).
    pub d: Morphism,
    /// `κ_n ≅ ΣⁿK_n` as modules.
    pub kappa_matches: bool,
}

static TODA_CACHE: Memo<u32, Vec<TodaStage>> = Memo::new();

/// A surjection `src → dst`, searched over the hom space.
fn find_surjection(src: &A1Module, dst: &A1Module) -> Option<Morphism> {
    let maps = hom(src, dst);
    let r = maps.len().min(20);
    let mut f = Morphism::zero(src, dst);
    if f.is_surjective() {
        return Some(f);
    }
    for code in 1u64..(1u64 << r) {
        f = f.add(&maps[code.trailing_zeros() as usize]);
        if f.is_surjective() {
            return Some(f);
        }
    }
    None
}

/// Stages `0..=nmax` of the exact Toda complex, built by splicing: each
/// `Σⁿ𝒞_n` is mapped onto the current kernel, whose kernel is the next one.
pub fn toda_complex(nmax: u32) -> Result<Vec<TodaStage>, FamilyError> {
    let have = TODA_CACHE.get_or(0u32, || Ok::<_, FamilyError>(Vec::new()))?;
    if have.len() > nmax as usize {
        return Ok(have[..=nmax as usize].to_vec());
    }
    let mut stages = have;
    // The current splice module with its inclusion into the previous stage.
    let (mut kappa, mut incl) = match stages.last() {
        None => {
            let f = unit_module();
            (f.clone(), Morphism::identity(&f))
        }
        Some(last) => {
            let sub = last.d.kernel();
            let m = sub.module.clone();
            (m, sub.inclusion_map())
        }
    };
    for n in stages.len() as u32..=nmax {
        let c = toda_c(n).suspend(n as i32);
        let p = find_surjection(&c, &kappa).ok_or_else(|| {
            FamilyError::Consistency(format!("no surjection from S^{n} C_{n} onto the splice module"))
        })?;
        let k = toda_k(n);
        let kappa_matches = find_module_iso(&kappa, &k.suspend(n as i32), SearchBudget::default()).is_yes();
        let d = p.then(&incl);
        let next = p.kernel();
        stages.push(TodaStage { n, c, k, kappa: kappa.clone(), d, kappa_matches });
        kappa = next.module.clone();
        incl = next.inclusion_map();
    }
    let out = stages.clone();
    TODA_CACHE.0.get().expect("initialized").lock().expect("memo lock").insert(0, stages);
    Ok(out)
}

/// Exactness of the complex at stage `n ≥ 1`: `d_{n−1}∘d_n = 0` and
/// `rank d_n = dim ker d_{n−1}`.
pub fn toda_exact_at(stages: &[TodaStage], n: usize) -> bool {
    let (a, b) = (&stages[n - 1], &stages[n]);
    let comp = b.d.then(&a.d);
    let ker = a.c.total_dim() - a.d.rank();
    comp.is_zero() && b.d.rank() == ker
}

// ---------------------------------------------------------------------------
// Killing the bottom Q₁ class
// ---------------------------------------------------------------------------

/// Which bottom class to kill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KillKind {
    /// Along an embedding `Σᵈ𝔽 ↪ M`, pushing out along `𝔽 → Σ⁻¹DR`.
    Unit,
    /// Along an embedding `Σᵃ(Σ³Ω⁻¹J) ↪ M`, pushing out along `Σ³Ω⁻¹J → ΣDR`.
    Question,
}

/// Result of a killing construction.
#[derive(Clone, Debug)]
pub struct Killing {
    /// The pushout (a truncation, bounded above, with an artificial bottom).
    pub module: A1Module,
    /// The embedding used, from `Σᵈ𝔽` or `Σᵃ(Σ³Ω⁻¹J)` into `M`.
    pub embedding: Morphism,
    /// Degree of the embedded Q₁ class.
    pub degree: i32,
    /// Degrees `[lo, hi]` free of truncation artifacts.
    pub trusted: (i32, i32),
}

impl Killing {
    /// Sq²Sq²Sq² vanishes in the trusted degrees.
    pub fn is_reduced_in_trust(&self) -> bool {
        let (lo, hi) = self.trusted;
        (lo..=hi).all(|n| self.module.basis_action(TOP, n).is_zero())
    }

    /// Margolis profile in the trusted degrees.
    pub fn profile_in_trust(&self) -> MargolisProfile {
        let (lo, hi) = self.trusted;
        margolis(&self.module).restricted(lo, hi)
    }
}

/// Whether `v ∈ M^n` (a Q₁-cycle) represents a nonzero Q₁ Margolis class.
fn q1_nontrivial(m: &A1Module, n: i32, v: &BitVector) -> bool {
    !m.q1(n - 3).column_space().contains(v)
}

/// The pushout `(M ⊕ X) / {(f(s), g(s))}` along `f: S → M`, `g: S → X`.
fn pushout(f: &Morphism, g: &Morphism) -> Result<A1Module, FamilyError> {
    let sum = f.target.direct_sum(&g.target);
    let gens: Vec<(i32, BitVector)> = f
        .source
        .minimal_generators()
        .into_iter()
        .map(|(n, v)| (n, f.apply(n, &v).concat(&g.apply(n, &v))))
        .collect();
    let q = sum.submodule_generated(&gens).quotient();
    Ok(q.module)
}

/// Kills the bottom `Q₁` class of `m` (finite) by the pushout constructions.
///
/// `Unit` uses the lowest socle class, preferring one that is nontrivial in
/// `H*(M, Q₁)`; `Question` uses an embedding of the question-mark complex
/// whose Q₁ class maps to the lowest Q₁ class of `m`.
pub fn kill_bottom(m: &A1Module, kind: KillKind, depth: Option<i32>) -> Result<Killing, FamilyError> {
    if m.is_zero() {
        return Err(FamilyError::NoEmbedding("the zero module".into()));
    }
    let (src, embedding, degree) = match kind {
        KillKind::Unit => {
            let mut choice: Option<(i32, BitVector)> = None;
            for n in m.degrees() {
                let soc = m.socle(n);
                if let Some(v) = soc.iter().find(|v| q1_nontrivial(m, n, v)) {
                    choice = Some((n, v.clone()));
                    break;
                }
            }
            if choice.is_none() {
                choice = m.degrees().find_map(|n| m.socle(n).first().map(|v| (n, v.clone())));
            }
            let (d, v) = choice.ok_or_else(|| FamilyError::NoEmbedding("no socle class".into()))?;
            let s = unit_module().suspend(d);
            let mut maps = BTreeMap::new();
            maps.insert(d, BitMatrix::from_columns(m.dim(d), &[v]));
            (s.clone(), Morphism::new(&s, m, maps)?, d)
        }
        KillKind::Question => {
            let a = *margolis(m)
                .q1
                .keys()
                .next()
                .ok_or_else(|| FamilyError::NoEmbedding("module is Q1-acyclic".into()))?;
            let s = question_mark().suspend(a);
            let y = BitVector::unit(1, 0);
            let maps = hom(&s, m);
            let r = maps.len().min(20);
            let mut f = Morphism::zero(&s, m);
            let mut found = None;
            for code in 1u64..(1u64 << r) {
                f = f.add(&maps[code.trailing_zeros() as usize]);
                if f.is_injective() && q1_nontrivial(m, a, &f.apply(a, &y)) {
                    found = Some(f.clone());
                    break;
                }
            }
            let f = found.ok_or_else(|| {
                FamilyError::NoEmbedding(format!("no question-mark embedding at the Q1 class in degree {a}"))
            })?;
            (s, f, a)
        }
    };
    let shift = match kind {
        KillKind::Unit => degree - 1,
        KillKind::Question => degree + 1,
    };
    let need = shift - (m.lo() - 2 * WINDOW_MARGIN);
    let depth = depth.unwrap_or(need.max(2 * WINDOW_MARGIN));
    let x = dr_trunc(depth)?.suspend(shift);
    let g = hom(&src, &x)
        .into_iter()
        .find(|h| h.is_injective())
        .ok_or_else(|| FamilyError::Consistency("no embedding into the suspended DR".into()))?;
    let module = pushout(&embedding, &g)?;
    let lo = x.lo();
    let hi = module.hi().max(m.hi());
    let module = module.with_name(&format!("kill({})", m.name())).with_window(Some((lo, hi)))?;
    Ok(Killing { module, embedding, degree, trusted: (lo + WINDOW_MARGIN, hi) })
}

/// For Q₀-acyclic finite `m`: the map `m → P₀ ⊗ m` induced by `𝔽 → P₀`
/// induces Margolis isomorphisms in the trusted degrees of `P₀ ⊗ m`.
pub fn p0_idempotence(m: &A1Module, depth: i32) -> Result<bool, FamilyError> {
    let p0 = p0_trunc(depth)?;
    let pm = tensor(&p0, m)?;
    let mut maps = BTreeMap::new();
    let incl = {
        let f = unit_module();
        let mut b = BTreeMap::new();
        b.insert(0, BitMatrix::from_strs(&["1"]));
        Morphism::new(&f, &p0, b)?
    };
    let id = Morphism::identity(m);
    let lay = crate::stable::TensorLayout::new(&p0, m);
    for n in m.degrees() {
        let mut block = BitMatrix::zeros(pm.dim(n), m.dim(n));
        if let Some(off) = lay.offset(n, 0) {
            block.add_block(off, 0, &incl.at(0).kron(&id.at(n)));
        }
        maps.insert(n, block);
    }
    let f = Morphism::new(m, &pm, maps)?;
    let (lo, hi) = (m.lo() - 1, depth - WINDOW_MARGIN + m.lo());
    Ok(crate::stable::induces_margolis_iso_in(&f, lo, hi))
}

// ---------------------------------------------------------------------------
// Stable classes with the Margolis cohomology of P₀
// ---------------------------------------------------------------------------

/// The quotient of a module by its part in degrees `> d`.
pub fn degrees_at_most(m: &A1Module, d: i32) -> A1Module {
    let spaces: BTreeMap<i32, Subspace> = m
        .degrees()
        .map(|n| (n, if n > d { Subspace::full(m.dim(n)) } else { Subspace::zero(m.dim(n)) }))
        .collect();
    m.submodule(spaces).quotient().module.with_name(&format!("({})^<={d}", m.name()))
}

/// A truncated model of `(Σ⁻³Ω)ⁱ(J^{⊗ε} ⊗ P₀)`, reduced; the degrees below
/// `depth − 2·WINDOW_MARGIN` are faithful.
pub fn p0_shift(i: u32, eps: u8, depth: i32) -> Result<A1Module, FamilyError> {
    let mut p = p0_trunc(depth)?;
    if eps == 1 {
        p = tensor(&joker(), &p)?;
    }
    let x = shift_power(&p, i as i32)?;
    Ok(reduce(&x)?.reduced.with_name(&format!("(S^-3 W)^{i} J^{eps} P0")))
}

/// `J^{⊗ε} ⊗ ((Σ⁻³Ω)ⁱP₀)^{≤2(s−1)}`, a finite reduced module.
pub fn truncated_p0_class(i: u32, eps: u8, s: u32) -> Result<A1Module, FamilyError> {
    if s < 2 {
        return Err(FamilyError::Param(format!("need s ≥ 2, got {s}")));
    }
    let top = 2 * (s as i32 - 1);
    let depth = top + 4 * WINDOW_MARGIN;
    let x = degrees_at_most(&p0_shift(i, 0, depth)?, top).with_window(None)?;
    let x = if eps == 1 { tensor(&joker(), &x)? } else { x };
    Ok(reduce(&x)?.reduced.with_name(&format!("J^{eps} ((S^-3 W)^{i} P0)^<={top}")))
}

/// One labelled check with a verdict and a detail string.
#[derive(Clone, Debug)]
pub struct CaseCheck {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseCheck {
    pub fn new(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CaseCheck { label: label.into(), pass, detail: detail.into() }
    }
}

/// Checks on the four stable classes with the Margolis cohomology of `P₀`:
/// each of `P₀ ⊗ X` for `X ∈ {F, Σ³Ω⁻¹J, J, Σ³Ω⁻¹F}` is Q₀-acyclic with Q₁
/// one-dimensional in degree 0, and is Margolis-isomorphic (in the faithful
/// band) to `(Σ⁻³Ω)ⁱP₀` for `i = 0, 1, 2, 3`.
pub fn yu_checks(depth: i32, budget: SearchBudget) -> Result<Vec<CaseCheck>, FamilyError> {
    let p0 = p0_trunc(depth)?;
    let (lo, hi) = (-12, depth - 3 * WINDOW_MARGIN);
    let expected = MargolisProfile::from_lists(&[], &[(0, 1)]);
    let twists = [
        ("F", unit_module()),
        ("S3 W^-1 J", picard_element(PicardIndex::new(1, 3, 1))),
        ("J", joker()),
        ("S3 W^-1 F", picard_element(PicardIndex::new(1, 3, 0))),
    ];
    let mut out = Vec::new();
    for (i, (name, x)) in twists.iter().enumerate() {
        let lhs = tensor(&p0, x)?;
        let rhs = p0_shift(i as u32, 0, depth)?;
        for (what, m) in [(format!("P0 ⊗ {name}"), &lhs), (format!("(S^-3 W)^{i} P0"), &rhs)] {
            let p = margolis(m).restricted(lo, hi);
            out.push(CaseCheck::new(format!("profile {what} in [{lo},{hi}]"), p == expected, format!("{p:?}")));
        }
        let v = crate::stable::find_margolis_iso_in(&lhs, &rhs, lo, hi, budget);
        out.push(CaseCheck::new(format!("P0 ⊗ {name} ~ (S^-3 W)^{i} P0 in [{lo},{hi}]"), v.is_yes(), v.to_string()));
    }
    // The inclusion F → Σ⁶Ω⁻²J gives Ω²P₀ ≃ Σ⁶J ⊗ P₀.
    let lhs = omega(&p0, 2)?;
    let rhs = tensor(&joker(), &p0)?.suspend(6);
    let v = crate::stable::find_margolis_iso_in(&lhs, &rhs, lo, hi, budget);
    out.push(CaseCheck::new(format!("W^2 P0 ~ S^6 J ⊗ P0 in [{lo},{hi}]"), v.is_yes(), v.to_string()));
    Ok(out)
}

/// Checks on the truncations `J^{⊗ε} ⊗ ((Σ⁻³Ω)ⁱP₀)^{≤2(s−1)}`: reduced,
/// Q₀-acyclic, Q₁ in degrees `{0, 2s−3}`; the eight classes pairwise
/// distinct; and `Σ⁻³Ω` permuting each `ε`-family cyclically.
pub fn truncate_p_checks(s: u32, budget: SearchBudget) -> Result<Vec<CaseCheck>, FamilyError> {
    let mut mods = BTreeMap::new();
    let mut out = Vec::new();
    let expected = MargolisProfile::from_lists(&[], &[(0, 1), (2 * s as i32 - 3, 1)]);
    for eps in 0..=1u8 {
        for i in 0..4u32 {
            let m = truncated_p0_class(i, eps, s)?;
            let p = margolis(&m);
            out.push(CaseCheck::new(
                format!("s={s} eps={eps} i={i} reduced, Q0-acyclic, Q1 in {{0,{}}}", 2 * s - 3),
                m.is_reduced() && p == expected,
                format!("dim {} profile {p:?}", m.total_dim()),
            ));
            mods.insert((eps, i), m);
        }
    }
    let keys: Vec<_> = mods.keys().copied().collect();
    let mut distinct = true;
    let mut detail = String::new();
    for (a, ka) in keys.iter().enumerate() {
        for kb in &keys[a + 1..] {
            let v = is_stably_iso(&mods[ka], &mods[kb], budget);
            if !v.is_no() {
                distinct = false;
                detail.push_str(&format!("{ka:?} vs {kb:?}: {}; ", v));
            }
        }
    }
    out.push(CaseCheck::new(format!("s={s} eight classes pairwise distinct"), distinct, detail));
    // Σ⁻³Ω preserves the Margolis profile, so it permutes the eight classes;
    // the permutation must consist of two 4-cycles.
    let mut image = BTreeMap::new();
    for k in &keys {
        let img = shift_power(&mods[k], 1)?;
        let hits: Vec<_> = keys.iter().filter(|kb| is_stably_iso(&img, &mods[kb], budget).is_yes()).copied().collect();
        out.push(CaseCheck::new(
            format!("s={s} S^-3 W image of eps={} i={} is one of the classes", k.0, k.1),
            hits.len() == 1,
            format!("matches {hits:?}"),
        ));
        if let [h] = hits[..] {
            image.insert(*k, h);
        }
    }
    let mut cycles = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for k in &keys {
        let mut len = 0;
        let mut cur = *k;
        while seen.insert(cur) {
            len += 1;
            match image.get(&cur) {
                Some(&n) => cur = n,
                None => break,
            }
        }
        if len > 0 {
            cycles.push(len);
        }
    }
    out.push(CaseCheck::new(format!("s={s} S^-3 W orbits"), cycles == [4, 4], format!("cycle lengths {cycles:?}, map {image:?}")));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Random modules
// ---------------------------------------------------------------------------

/// Conjugates the action of `m` by random invertible matrices, degreewise.
pub fn random_basis_change(m: &A1Module, rng: &mut impl Rng) -> A1Module {
    let mut change = BTreeMap::new();
    for n in m.degrees() {
        let d = m.dim(n);
        let p = loop {
            let bits: Vec<bool> = (0..d * d).map(|_| rng.gen_bool(0.5)).collect();
            let p = BitMatrix::from_fn(d, d, |r, c| bits[r * d + c]);
            if let Some(inv) = p.inverse() {
                break (p, inv);
            }
        };
        change.insert(n, p);
    }
    let dims = m.dims();
    let mut s = [BTreeMap::new(), BTreeMap::new()];
    for n in m.degrees() {
        for op in [1u8, 2] {
            let Some((p_hi, _)) = change.get(&(n + op as i32)) else { continue };
            let (_, inv_lo) = &change[&n];
            s[op as usize - 1].insert(n, p_hi.mul(&m.sq(op, n)).mul(inv_lo));
        }
    }
    A1Module::from_maps(m.name(), &dims, &s[0], &s[1]).expect("conjugate actions satisfy the relations")
}

/// A random nonzero element of `m` in degree `n` (zero if `m^n = 0`).
fn random_vector(m: &A1Module, n: i32, rng: &mut impl Rng) -> BitVector {
    let d = m.dim(n);
    let bits: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.5)).collect();
    let mut v = BitVector::from_bools(&bits);
    if v.is_zero() && d > 0 {
        v.set(rng.gen_range(0..d), true);
    }
    v
}

/// A random validated finite module of total dimension in `1..=max_dim`.
///
/// Built from a direct sum of suspended small pieces (literal modules,
/// truncated projective spaces, `A_{k,ε}`, syzygies of `F` and `J`,
/// occasionally a tensor product), then possibly replaced by a random
/// cyclic-generated submodule or quotient, and finally put in a random basis.
pub fn random_module(rng: &mut impl Rng, max_dim: usize) -> A1Module {
    loop {
        let piece = |rng: &mut dyn rand::RngCore| -> A1Module {
            match rng.gen_range(0..9) {
                0 => unit_module(),
                1 => joker(),
                2 => z_module(),
                3 => question_mark(),
                4 => a1_mod_a0(),
                5 => a1_regular(),
                6 => {
                    let a = rng.gen_range(-3..=3);
                    trunc_projective(a, a + rng.gen_range(0..=7)).expect("valid bounds")
                }
                7 => make_a(rng.gen_range(1..=2), rng.gen_range(0..=1)).expect("A_{k,ε} exists"),
                _ => crate::stable::omega_power(rng.gen_range(-2..=2), rng.gen_range(0..=1)),
            }
        };
        let mut parts = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let mut x = piece(rng);
            if rng.gen_bool(0.15) {
                let y = piece(rng);
                if x.total_dim() * y.total_dim() <= max_dim {
                    x = tensor(&x, &y).expect("finite tensor");
                }
            }
            parts.push(x.suspend(rng.gen_range(-4..=4)));
        }
        let mut m = A1Module::sum_of(&parts);
        if m.total_dim() > max_dim || m.is_zero() {
            continue;
        }
        let gens: Vec<(i32, BitVector)> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let n = rng.gen_range(m.lo()..=m.hi());
                (n, random_vector(&m, n, rng))
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        match rng.gen_range(0..4) {
            0 if !gens.is_empty() => m = m.submodule_generated(&gens).module,
            1 if !gens.is_empty() => m = m.submodule_generated(&gens).quotient().module,
            _ => {}
        }
        if m.is_zero() {
            continue;
        }
        return random_basis_change(&m, rng).with_name("random");
    }
}

/// A reproducible list of random modules.
pub fn random_corpus(seed: u64, count: usize, max_dim: usize) -> Vec<A1Module> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_module(&mut rng, max_dim).with_name(&format!("random#{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_helpers() {
        assert_eq!(alpha(6), 2);
        assert_eq!(nu(12), 2);
    }

    #[test]
    fn binomials_mod_two() {
        assert!(binom_mod2(-1, 2));
        assert!(binom_mod2(2, 2));
        assert!(binom_mod2(3, 2));
        assert!(!binom_mod2(4, 2));
        assert!(!binom_mod2(1, 2));
    }

    #[test]
    fn weight_vectors_count_binary_partitions() {
        // Binary partitions of 4: 4, 2+2, 2+1+1, 1+1+1+1 (with 2+1+1 etc. as vectors).
        assert_eq!(weight_vectors(4).len(), 4);
        assert_eq!(weight_vectors(0).len(), 1);
    }
}
