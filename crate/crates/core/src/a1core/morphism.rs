//! Degree-preserving A(1)-linear maps between modules.

use std::collections::BTreeMap;

use super::module::{A1Module, ModuleError, Quotient, Submodule};
use crate::gf2::{BitMatrix, BitVector, Subspace};

/// A degree-preserving A(1)-linear map `source → target`.
///
/// Suspensions are handled by suspending the modules, so the stored maps are
/// always degree-preserving; `maps[n]` has shape `target.dim(n) × source.dim(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: A1Module,
    pub target: A1Module,
    maps: BTreeMap<i32, BitMatrix>,
}

impl Morphism {
    /// Builds a morphism, checking shapes and commutation with Sq¹ and Sq².
    pub fn new(source: &A1Module, target: &A1Module, maps: BTreeMap<i32, BitMatrix>) -> Result<Self, ModuleError> {
        let f = Self::new_unchecked(source, target, maps)?;
        f.check_linear()?;
        Ok(f)
    }

    /// Builds a morphism checking shapes only.
    pub fn new_unchecked(
        source: &A1Module,
        target: &A1Module,
        mut maps: BTreeMap<i32, BitMatrix>,
    ) -> Result<Self, ModuleError> {
        maps.retain(|&n, _| source.dim(n) > 0);
        for n in source.degrees() {
            let m = maps.entry(n).or_insert_with(|| BitMatrix::zeros(target.dim(n), source.dim(n)));
            if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                return Err(ModuleError::Shape(format!(
                    "morphism block in degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        maps.retain(|&n, _| source.dim(n) > 0);
        Ok(Morphism { source: source.clone(), target: target.clone(), maps })
    }

    /// The zero map.
    pub fn zero(source: &A1Module, target: &A1Module) -> Self {
        Self::new_unchecked(source, target, BTreeMap::new()).expect("zero map has consistent shapes")
    }

    /// The identity.
    pub fn identity(m: &A1Module) -> Self {
        let maps = m.degrees().map(|n| (n, BitMatrix::identity(m.dim(n)))).collect();
        Self::new_unchecked(m, m, maps).expect("identity has consistent shapes")
    }

    /// Verifies `f ∘ Sqⁱ = Sqⁱ ∘ f` for i = 1, 2.
    pub fn check_linear(&self) -> Result<(), ModuleError> {
        for n in self.source.degrees() {
            for i in [1u8, 2] {
                let lhs = self.at(n + i as i32).mul(&self.source.sq(i, n));
                let rhs = self.target.sq(i, n).mul(&self.at(n));
                if lhs != rhs {
                    return Err(ModuleError::Relation {
                        relation: format!("f Sq{i} = Sq{i} f"),
                        degree: n,
                        element: "morphism".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The block in degree `n`.
    pub fn at(&self, n: i32) -> BitMatrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| BitMatrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    /// Image of a single vector.
    pub fn apply(&self, n: i32, v: &BitVector) -> BitVector {
        self.at(n).mul_vec(v)
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        assert!(self.target.same_structure(&other.source), "composition of incompatible morphisms");
        let maps = self.source.degrees().map(|n| (n, other.at(n).mul(&self.at(n)))).collect();
        Morphism::new_unchecked(&self.source, &other.target, maps).expect("composite has consistent shapes")
    }

    /// Sum of parallel morphisms.
    pub fn add(&self, other: &Morphism) -> Morphism {
        let maps = self.source.degrees().map(|n| (n, self.at(n).add(&other.at(n)))).collect();
        Morphism::new_unchecked(&self.source, &self.target, maps).expect("sum has consistent shapes")
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.source.degrees().all(|n| self.at(n).rank() == self.source.dim(n))
    }

    pub fn is_surjective(&self) -> bool {
        self.target.degrees().all(|n| self.at(n).rank() == self.target.dim(n))
    }

    /// Whether the map is bijective in every degree (a module isomorphism).
    pub fn is_isomorphism(&self) -> bool {
        self.source.dims() == self.target.dims() && self.is_injective()
    }

    /// The suspended map Σᵗf.
    pub fn suspend(&self, t: i32) -> Morphism {
        let maps = self.maps.iter().map(|(&n, m)| (n + t, m.clone())).collect();
        Morphism::new_unchecked(&self.source.suspend(t), &self.target.suspend(t), maps)
            .expect("suspension preserves shapes")
    }

    /// Kernel as a submodule of the source.
    pub fn kernel(&self) -> Submodule {
        let spaces = self
            .source
            .degrees()
            .map(|n| (n, Subspace::from_vectors(self.source.dim(n), &self.at(n).kernel_basis())))
            .collect();
        self.source.submodule(spaces)
    }

    /// Image as a submodule of the target.
    pub fn image(&self) -> Submodule {
        let spaces = self
            .target
            .degrees()
            .map(|n| {
                let s = if self.source.dim(n) > 0 {
                    self.at(n).column_space()
                } else {
                    Subspace::zero(self.target.dim(n))
                };
                (n, s)
            })
            .collect();
        self.target.submodule(spaces)
    }

    /// Cokernel as a quotient of the target.
    pub fn cokernel(&self) -> Quotient {
        self.image().quotient()
    }

    /// Total rank.
    pub fn rank(&self) -> usize {
        self.maps.values().map(|m| m.rank()).sum()
    }

    /// All blocks, keyed by degree.
    pub fn blocks(&self) -> &BTreeMap<i32, BitMatrix> {
        &self.maps
    }

    /// Flattened coordinates of the map (for linear algebra on hom spaces).
    pub fn to_vector(&self) -> BitVector {
        let mut bits = Vec::new();
        for n in self.source.degrees() {
            let m = self.at(n);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    bits.push(m.get(r, c));
                }
            }
        }
        BitVector::from_bools(&bits)
    }

    /// The map `D(target) → D(source)` given by transposes.
    pub fn dual(&self, dsource: &A1Module, dtarget: &A1Module) -> Morphism {
        let maps = self.maps.iter().map(|(&n, m)| (-n, m.transpose())).collect();
        Morphism::new_unchecked(dtarget, dsource, maps).expect("dual preserves shapes")
    }
}

impl Submodule {
    /// The inclusion as a morphism.
    pub fn inclusion_map(&self) -> Morphism {
        let maps = self.module.degrees().map(|n| (n, self.inclusion(n))).collect();
        Morphism::new_unchecked(&self.module, &self.ambient, maps).expect("inclusion has consistent shapes")
    }
}

impl Quotient {
    /// The projection as a morphism.
    pub fn projection_map(&self) -> Morphism {
        let maps = self.ambient.degrees().map(|n| (n, self.projection(n))).collect();
        Morphism::new_unchecked(&self.ambient, &self.module, maps).expect("projection has consistent shapes")
    }
}
