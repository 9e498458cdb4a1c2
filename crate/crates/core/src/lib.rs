//! Composition series and unitarity of degenerate principal series
//! representations of `O(p,q)`, `U(p,q)` and `Sp(p,q)` realized on
//! homogeneous functions on the light cone.
//!
//! The K-types form a lattice of base points `(m, n)`; neighbouring K-types
//! are linked by transition coefficients that are affine in the spectral
//! parameter. Constituents, their submodule order, invariant Hermitian forms
//! and unitarity all follow from these coefficients by exact arithmetic.

pub mod lattice;
pub mod scalar;
pub mod structure;
pub mod transitions;
pub mod unitarity;

pub use lattice::{
    fiber_enumerate, harmonic_dim, ktype_dimension, region_contains, Dimension, Family, FiberPoint,
    GroupContext, KPoint, LatticeError, SpectralParam, Summand,
};
pub use scalar::{ExactScalar, Rational};
pub use structure::{
    affected_summand, analyze, classify_constituent, compute_constituents, default_window,
    is_irreducible, stabilization_check, CompositionDiagram, Constituent, ConstituentClass, Count,
    StructureError, Window,
};
pub use transitions::{
    barrier_line, edges_from, transition_coeff, BarrierLine, Direction, TransitionError,
};
pub use unitarity::{
    axis_centred, constituent_is_unitary, duality_partner, form_coefficients,
    full_module_unitary_interval, hermitian_exists, unitary_axis, verdicts, HermitianForm,
    HermitianKind, Interval, UnitarityError, Verdict,
};
