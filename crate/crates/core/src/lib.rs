//! Exact computation with finite modules over the subalgebra A(1) of the
//! mod-2 Steenrod algebra.
//!
//! Layers, bottom up:
//! - [`gf2`]: bit-packed dense linear algebra over GF(2);
//! - [`a1core`]: the algebra, modules, Margolis cohomology, reduction;
//! - [`stable`]: tensor, duality, syzygies, stable homs, stable isomorphism;
//! - [`families`]: constructors for the named module families;
//! - [`ext`]: minimal resolutions, Ext and Picard-graded stable Ext charts;
//! - [`classify`]: decision procedures for indecomposables;
//! - [`cli`]: file formats, command dispatch and verification suites.

pub mod a1core;
pub mod classify;
pub mod cli;
pub mod ext;
pub mod families;
pub mod gf2;
pub mod stable;
