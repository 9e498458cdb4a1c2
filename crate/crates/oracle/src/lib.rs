//! Exact symbolic oracle for the light-cone operator identities.
//!
//! Polynomials with coefficients in formal parameters, harmonic
//! decomposition, sphere integration and the explicit Lie algebra operators
//! of `O(p,q)`, `U(p,q)` and `Sp(p,q)`. The verification suites check the
//! transition formulas used by the structure engine identically in the
//! spectral parameter.

pub mod actions;
pub mod cone;
pub mod error;
pub mod poly;
pub mod space;

pub use actions::{
    apply_operator, engine_coefficient, standard_suite, verify_chain_formula, verify_fiber_moves,
    verify_highest_weight_vectors, verify_invariant_pairing, verify_transition_formula,
    verify_unitary_transitions, OperatorSpec, VerificationReport,
};
pub use cone::{Cone, ConeFunction, ConeKind, DiffOp, KComponent};
pub use error::OracleError;
pub use poly::{Coeff, MultiPoly, ParamPoly, Poly, PARAM_A, PARAM_D};
pub use space::{complex_sphere_moment, real_sphere_moment, Block, BlockDegree, BlockKind, Space};
