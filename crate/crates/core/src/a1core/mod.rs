//! The algebra A(1), validated graded modules over it, morphisms, Margolis
//! cohomology, free modules, free-summand splitting and the text format.

pub mod algebra;
pub mod free;
pub mod margolis;
pub mod module;
pub mod morphism;
pub mod reduce;
pub mod text;

pub use algebra::A1Elt;
pub use free::{free_rank, FreeModule, ProjectiveCover};
pub use margolis::{margolis, MargolisProfile};
pub use module::{A1Module, ModuleError, Quotient, Submodule};
pub use morphism::Morphism;
pub use reduce::{reduce, restrict_e1_reduce, E1Reduction, Reduction};
pub use text::{build_module, write_module};
