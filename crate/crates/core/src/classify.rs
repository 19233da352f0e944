//! Decision procedures for finite modules whose E(1)-restriction is
//! indecomposable (up to E(1)-free summands): recognition of Picard
//! elements, of the modules `Σ^{d+1} f_iR`, and of the orbits
//! `Σᵈ(Σ⁻³Ω)ᵗA_{k,ε}`; the bottom-embedding probe; and the splitting of
//! tensor products `A_{k,ε} ⊗ A_{l,δ}`.
//!
//! Classification works by reading candidate parameters off the Margolis
//! profile and confirming a single candidate by a stable-isomorphism search.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::a1core::margolis::{induced_map, margolis, MargolisData};
use crate::a1core::module::{A1Module, ModuleError};
use crate::a1core::morphism::Morphism;
use crate::a1core::reduce::{reduce, restrict_e1_reduce};
use crate::ext::{multiply, multiply_power, named_class, ExtError, ExtGen, NamedClass};
use crate::families::{fi_r, make_a, make_n, orbit_member, question_mark, FamilyError};
use crate::gf2::BitVector;
use crate::stable::{
    hom, is_stably_iso, joker, picard_element, tensor, unit_module, PicardIndex, SearchBudget, StableError, Verdict,
};

/// Errors raised by the classification procedures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Stable(#[from] StableError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

/// The stable type recognised by [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    /// `Ω^{−s} Σ^t J^{⊗ε}`.
    Picard(PicardIndex),
    /// `Σ^{d+1} f_iR`.
    FiR { d: i32, i: u32 },
    /// `Σᵈ (Σ⁻³Ω)ᵗ A_{k,ε}`, with `A_{0,1} = Σ³Z`.
    AOrbit { d: i32, k: u32, eps: u8, t: u8 },
    Rejected(String),
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Picard(i) => write!(f, "picard s={} t={} eps={}", i.s, i.t, i.eps),
            Tag::FiR { d, i } => write!(f, "fiR d={d} i={i}"),
            Tag::AOrbit { d, k, eps, t } => write!(f, "A_orbit d={d} k={k} eps={eps} t={t}"),
            Tag::Rejected(why) => write!(f, "rejected: {why}"),
        }
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub tag: Tag,
    /// A stable isomorphism from the input to the recognised model.
    pub witness: Option<Morphism>,
    /// The model the witness maps to.
    pub model: Option<A1Module>,
    /// One line per stable-isomorphism test performed.
    pub checked: Vec<String>,
}

impl ClassificationResult {
    fn rejected(why: impl Into<String>, checked: Vec<String>) -> Self {
        ClassificationResult { tag: Tag::Rejected(why.into()), witness: None, model: None, checked }
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self.tag, Tag::Rejected(_))
    }
}

/// Tests candidates in order and returns the first stable isomorphism.
fn first_match(
    m: &A1Module,
    candidates: Vec<(Tag, A1Module)>,
    budget: SearchBudget,
    checked: &mut Vec<String>,
) -> Option<(Tag, A1Module, Morphism)> {
    let mut inconclusive = None;
    for (tag, cand) in candidates {
        let v = is_stably_iso(m, &cand, budget);
        checked.push(format!("{tag}: {v}"));
        match v {
            Verdict::Yes(w) => return Some((tag, cand, w)),
            Verdict::Inconclusive { .. } => inconclusive = Some(tag),
            Verdict::No(_) => {}
        }
    }
    if let Some(tag) = inconclusive {
        checked.push(format!("search for {tag} was inconclusive"));
    }
    None
}

/// Classifies a finite module.
pub fn classify(m: &A1Module, budget: SearchBudget) -> Result<ClassificationResult, ClassifyError> {
    let mut checked = Vec::new();
    if m.window().is_some() {
        return Ok(ClassificationResult::rejected("truncated input: classification needs a finite module", checked));
    }
    let red = reduce(m)?.reduced;
    if red.is_zero() {
        return Ok(ClassificationResult::rejected("stably zero", checked));
    }
    let e1 = restrict_e1_reduce(&red);
    if !e1.is_indecomposable() {
        return Ok(ClassificationResult::rejected(
            format!("not E(1)-indecomposable: total Margolis dimension {}", e1.margolis_total),
            checked,
        ));
    }
    let p = margolis(&red);
    let q0: Vec<i32> = p.q0.iter().flat_map(|(&n, &d)| std::iter::repeat_n(n, d)).collect();
    let q1: Vec<i32> = p.q1.iter().flat_map(|(&n, &d)| std::iter::repeat_n(n, d)).collect();
    let candidates: Vec<(Tag, A1Module)> = match (q0.as_slice(), q1.as_slice()) {
        (&[d0], &[d1]) => {
            if (d0 - d1) % 2 != 0 {
                return Ok(ClassificationResult::rejected(
                    format!("Margolis degrees Q0 {d0}, Q1 {d1} have odd difference"),
                    checked,
                ));
            }
            let s = (d0 - d1) / 2;
            let t = (3 * d0 - d1) / 2;
            (0..=1)
                .map(|eps| {
                    let i = PicardIndex::new(s, t, eps);
                    (Tag::Picard(i), picard_element(i))
                })
                .collect()
        }
        (&[a, b], &[]) => {
            let (d, top) = (a.min(b), a.max(b));
            if (top - d - 1) % 4 != 0 || top - d - 1 <= 0 {
                return Ok(ClassificationResult::rejected(
                    format!("Q1-acyclic with Q0 degrees {d}, {top}: gap is not 4i+1"),
                    checked,
                ));
            }
            let i = ((top - d - 1) / 4) as u32;
            vec![(Tag::FiR { d, i }, fi_r(i)?.suspend(d + 1))]
        }
        (&[], &[a, b]) => {
            let (lo, hi) = (a.min(b), a.max(b));
            let gap = hi - lo;
            if gap % 2 == 0 {
                return Ok(ClassificationResult::rejected(
                    format!("Q0-acyclic with Q1 degrees {lo}, {hi}: even gap"),
                    checked,
                ));
            }
            // A_{k,ε} has Q1 classes in degrees 3 and 2k+2.  A gap of 1 also
            // fits A_{0,1} = Σ³Z, whose classes sit in degrees 2 and 3.
            let k = ((gap + 1) / 2) as u32;
            let mut families = vec![(k, 0u8, lo - 3), (k, 1, lo - 3)];
            if gap == 1 {
                families.push((0, 1, lo - 2));
            }
            let mut out = Vec::new();
            for (k, eps, d) in families {
                for t in 0..4u8 {
                    let x = orbit_member(k, eps, t as i32)?;
                    out.push((Tag::AOrbit { d, k, eps, t }, x.module.suspend(d)));
                }
            }
            out
        }
        _ => {
            return Ok(ClassificationResult::rejected(
                format!("Margolis pattern Q0 {q0:?}, Q1 {q1:?} is not of a classified type"),
                checked,
            ))
        }
    };
    match first_match(&red, candidates, budget, &mut checked) {
        Some((tag, model, w)) => Ok(ClassificationResult { tag, witness: Some(w), model: Some(model), checked }),
        None => Ok(ClassificationResult::rejected("no candidate is stably isomorphic", checked)),
    }
}

/// Replays a classification: the witness must be a stable isomorphism onto
/// the recorded model.
pub fn replay(m: &A1Module, r: &ClassificationResult, budget: SearchBudget) -> bool {
    match &r.model {
        Some(model) => is_stably_iso(m, model, budget).is_yes(),
        None => r.is_rejected(),
    }
}

// ---------------------------------------------------------------------------
// Bottom embeddings
// ---------------------------------------------------------------------------

/// Outcome of [`probe_bottom_embedding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    /// Suspension applied to move the bottom Q₁ class to degree 0.
    pub shift: i32,
    /// Whether the Margolis hypotheses hold after the shift.
    pub hypotheses: bool,
    /// Explanation when they fail.
    pub notes: Vec<String>,
    /// `(source, target)` pairs for which an embedding was found; targets
    /// are `"M"` (the reduced module) and `"J⊗M"`.
    pub found: Vec<(String, String)>,
}

fn embedding_sources() -> Vec<(String, A1Module)> {
    vec![
        ("F".into(), unit_module()),
        ("J".into(), joker()),
        ("S3 Om^-1 J".into(), question_mark()),
        ("S3 Om^-1 F".into(), picard_element(PicardIndex::new(1, 3, 0))),
    ]
}

/// Searches the hom space for a monomorphism inducing a nonzero map on
/// `H⁰(−, Q₁)` (the sources have one-dimensional `Q₁` homology in degree 0).
fn find_q1_embedding(src: &A1Module, tgt: &A1Module, seed: u64) -> Option<Morphism> {
    let homs = hom(src, tgt);
    if homs.is_empty() {
        return None;
    }
    let ds = MargolisData::new(src);
    let dt = MargolisData::new(tgt);
    let good = |f: &Morphism| f.is_injective() && !induced_map(f, &ds, &dt, 1, 0).is_zero();
    let combine = |bits: &BitVector| {
        let mut f = Morphism::zero(src, tgt);
        for i in bits.ones() {
            f = f.add(&homs[i]);
        }
        f
    };
    let r = homs.len();
    if r <= 14 {
        for mask in 1u32..(1 << r) {
            let bits = BitVector::from_indices(r, &(0..r).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            let f = combine(&bits);
            if good(&f) {
                return Some(f);
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1 << 14 {
            let bits = BitVector::from_bools(&(0..r).map(|_| rng.gen::<bool>()).collect::<Vec<_>>());
            let f = combine(&bits);
            if good(&f) {
                return Some(f);
            }
        }
        None
    }
}

/// Looks for monomorphisms `S → N` from `S ∈ {F, J, Σ³Ω⁻¹J, Σ³Ω⁻¹F}` into
/// `N ∈ {M^red, (J⊗M)^red}` that are injective on `Q₁` homology, after
/// suspending `M` so that its lowest `Q₁` class sits in degree 0.
///
/// The hypotheses checked are: `H^{≤0}(M,Q₀) = 0`, `H^{<0}(M,Q₁) = 0`,
/// `H¹(M,Q₁) = 0` and `H⁰(M,Q₁) ≠ 0` (after the shift).  Under them an
/// embedding of `F` or `Σ³Ω⁻¹J` into one of the two targets must exist.
/// For a truncated module only degrees away from the upper window edge
/// are used for the hypotheses.
pub fn probe_bottom_embedding(m: &A1Module, budget: SearchBudget) -> Result<EmbeddingReport, ClassifyError> {
    let red = reduce(m)?.reduced;
    let mut p = margolis(&red);
    if let Some((lo, hi)) = red.window() {
        p = p.restricted(lo, hi - crate::stable::WINDOW_MARGIN);
    }
    let mut notes = Vec::new();
    let Some(&bottom) = p.q1.keys().next() else {
        notes.push("no Q1 homology".into());
        return Ok(EmbeddingReport { shift: 0, hypotheses: false, notes, found: vec![] });
    };
    let shift = -bottom;
    let p = p.shifted(shift, shift);
    if p.q0.keys().any(|&n| n <= 0) {
        notes.push("H^{<=0}(M,Q0) is nonzero".into());
    }
    if p.q1.contains_key(&1) {
        notes.push("H^1(M,Q1) is nonzero".into());
    }
    let m0 = red.suspend(shift);
    let targets = [("M".to_string(), m0.clone()), ("J⊗M".to_string(), reduce(&tensor(&joker(), &m0)?)?.reduced)];
    let mut found = Vec::new();
    for (sname, src) in embedding_sources() {
        for (tname, tgt) in &targets {
            if find_q1_embedding(&src, tgt, budget.seed).is_some() {
                found.push((sname.clone(), tname.clone()));
            }
        }
    }
    Ok(EmbeddingReport { shift, hypotheses: notes.is_empty(), notes, found })
}

// ---------------------------------------------------------------------------
// Tensor products of A-modules
// ---------------------------------------------------------------------------

/// Whether `A_{k,ε} ⊗ A_{l,δ}` splits as `ΩA_{k,ε} ⊕ N_{l,δ} ⊗ A_{k,ε}`
/// (`k ≤ l`; swapped otherwise): it does unless `k = l` and `δ + ε` is odd.
pub fn predict_tensor_split(k: u32, l: u32, eps: u8, delta: u8) -> bool {
    let (k, l, eps, delta) = if k <= l { (k, l, eps, delta) } else { (l, k, delta, eps) };
    !(k == l && (eps + delta) % 2 == 1)
}

/// Outcome of [`verify_tensor_split`].
#[derive(Clone, Debug)]
pub struct TensorSplitReport {
    pub k: u32,
    pub l: u32,
    pub eps: u8,
    pub delta: u8,
    pub predicted: bool,
    /// The stable-isomorphism verdict against the predicted sum.
    pub verdict: Verdict,
    /// Whether the obstruction `h₀^{l+1−δ} κ^δ μ_{k,ε}` is nonzero.
    pub obstruction_nonzero: bool,
    /// For `δ = 1`, the equivalent class `h₀^l a μ_{k,ε}` is nonzero.
    pub alpha_form_nonzero: Option<bool>,
}

impl TensorSplitReport {
    /// The verdict is definite, agrees with the prediction, and the
    /// obstruction vanishes exactly in the split cases.
    pub fn consistent(&self) -> bool {
        let definite = match &self.verdict {
            Verdict::Yes(_) => Some(true),
            Verdict::No(_) => Some(false),
            Verdict::Inconclusive { .. } => None,
        };
        definite == Some(self.predicted)
            && self.obstruction_nonzero != self.predicted
            && self.alpha_form_nonzero.is_none_or(|x| x == self.obstruction_nonzero)
    }
}

/// Builds both sides of the splitting, compares them stably and evaluates
/// the obstruction class.
pub fn verify_tensor_split(k: u32, l: u32, eps: u8, delta: u8, budget: SearchBudget) -> Result<TensorSplitReport, ClassifyError> {
    let (k, l, eps, delta) = if k <= l { (k, l, eps, delta) } else { (l, k, delta, eps) };
    if k == 0 {
        return Err(ClassifyError::Param("tensor splitting needs 1 ≤ k ≤ l".into()));
    }
    let a = make_a(k, eps)?;
    let b = make_a(l, delta)?;
    let lhs = tensor(&a, &b)?;
    let omega_a = crate::stable::omega(&a, 1)?;
    let twisted = tensor(&make_n(l, delta), &a)?;
    let rhs = omega_a.direct_sum(&twisted);
    let verdict = is_stably_iso(&lhs, &rhs, budget);
    let mu = named_class(NamedClass::Mu { k, eps })?;
    let mut x = multiply_power(ExtGen::H0, (l + 1 - delta as u32) as usize, &mu)?;
    if delta == 1 {
        x = multiply(ExtGen::Kappa, &x)?;
    }
    let alpha_form_nonzero = if delta == 1 {
        Some(!multiply_power(ExtGen::H0, l as usize, &multiply(ExtGen::A, &mu)?)?.is_zero())
    } else {
        None
    };
    Ok(TensorSplitReport {
        k,
        l,
        eps,
        delta,
        predicted: predict_tensor_split(k, l, eps, delta),
        verdict,
        obstruction_nonzero: !x.is_zero(),
        alpha_form_nonzero,
    })
}
