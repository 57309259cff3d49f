//! Exact construction and verification of a nowhere monotone, Riemann
//! integrable derivative `f = Σ f_k / 2^k` on `[-1, 1]`, its antiderivative
//! `F`, and the signed pair `g(x) = f(x)·sign(x)`, `G(x) = F(x)·sign(x)`.
//!
//! Every scalar is an exact [`Rat`]. Values of infinite series are returned
//! as [`Certified`] enclosures (exact center plus exact radius); every
//! verification verdict is decided by exact rational inequalities.

pub mod affine;
pub mod antiderivative;
pub mod cells;
pub mod construction;
pub mod error;
pub mod rat;
pub mod report;
pub mod suite;
pub mod verifier;

pub use affine::Affine;
pub use antiderivative::{
    antiderivative, antiderivative_base, antiderivative_term, darboux_gap, enclose_integral,
    normalization_constant, quotient_bound_check, signed_antiderivative, Enclosure,
};
pub use cells::{Address, Cell, EPoint, Level1Id};
pub use construction::{
    eval_f, eval_g, f1, fk, orbit, partial_sum, Absorber, Certified, OrbitInfo, DEFAULT_TERMS,
};
pub use error::{Error, Result};
pub use rat::Rat;
pub use report::{Check, Point, PointValue, Quantity, Relation, SuiteReport, Verdict, WitnessKind, WitnessReport};
pub use suite::{run_named, run_suite, Suite, SuiteConfig, DEFAULT_INDEX_BUDGET, DEFAULT_SEED};
pub use verifier::{
    integral_crosscheck, local_min_check, non_extremum_witness, non_monotone_witness, oscillation_witness,
    structure_check, DEFAULT_DEPTH,
};
