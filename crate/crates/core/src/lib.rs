//! Exact-arithmetic workbench for Hermitian forms over *-fields and the
//! structures they induce: perp/closure and orthomodularity, projective
//! geometries with polarities and harmonic conjugates, finite orthomodular
//! lattices, matrix Baer *-ring coordinatization, and quantum-logic
//! question/state systems. Everything runs over exact scalars; verification
//! is exhaustive over prime fields and seeded-sampled over the rationals.

pub mod baer;
pub mod document;
pub mod geometry;
pub mod hermitian;
pub mod lattice;
pub mod linalg;
pub mod mat;
pub mod qlogic;
pub mod report;
pub mod run;
pub mod scalar;

pub use baer::{Coordinatization, EpVerdict, EquivVerdict, MatStarRing};
pub use document::{SpaceDocument, StateSpec};
pub use geometry::{HarmonicNormVerdict, Polarity, ProjPoint, ProjSubspace};
pub use hermitian::{AnisotropyVerdict, FormClass, HermitianSpace, NormEquiv, SpaceCheck};
pub use lattice::{FiniteOML, OmegaImage};
pub use linalg::{Subspace, Vector};
pub use mat::SquareMatrix;
pub use qlogic::{AxiomDVerdict, State};
pub use report::Report;
pub use run::{CheckConfig, Mode, ModeChoice, SplitMix64};
pub use scalar::{FieldDescriptor, FieldKind, Involution, Scalar};
