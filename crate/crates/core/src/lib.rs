//! Heights of finitely generated subgroups of the multiplicative group of
//! algebraic numbers modulo torsion, computed exactly where possible and
//! with certified interval enclosures elsewhere.
//!
//! Log-values of rationals are kept symbolic as rational polynomials in
//! `log p` ([`LogPoly`]), so identities such as the product formula hold
//! exactly. Numeric evaluation happens in [`Interval`] arithmetic with
//! precision escalation controlled by [`PrecisionContext`].
//!
//! The linear algebra in [`matrix`] is generic over [`scalar::Scalar`], so
//! the same code runs on `f32`/`f64`, [`BigRational`] and exact reals.

pub mod arith;
pub mod certificate;
pub mod dependencies;
pub mod error;
pub mod heights;
pub mod interval;
pub mod intlinalg;
pub mod json;
pub mod logpoly;
pub mod matrix;
pub mod minima;
pub mod numbers;
pub mod precision;
pub mod scalar;
pub mod zonoid;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use certificate::{certify_le, Certificate, Verdict};
pub use dependencies::{
    certify_thm2, clear_denominators, dependency_module, q_integral, siegel_basis, DependencyBasis,
    DependencyModule, QIntegral, Thm2Certificate,
};
pub use error::{Error, Result};
pub use heights::{
    build_presentation, group_height, small_independent_generators, sunit_height, HeightCertificate,
    SUnitContext, SUnitHeight, SubgroupPresentation,
};
pub use interval::{Dyadic, Interval};
pub use intlinalg::IntMatrix;
pub use logpoly::{LogPoly, Real};
pub use matrix::Matrix;
pub use minima::{minkowski_check, successive_minima, thm4_reduce, MinimaResult, MinkowskiReport};
pub use numbers::{
    element_log_table, group_op, product_formula_residual, total_variation, weil_height, GroupElement, LogValue,
    Place, PlaceKind, PlaceMass,
};
pub use precision::PrecisionContext;
pub use zonoid::{
    delta_integral, hadamard_bound, mcmullen_volume, monte_carlo_primal_ball, monte_carlo_zonotope,
    perturbation_gap_bound, primal_ball_volume_exact, zonoid_volume, ExactMatrix, RatMatrix, SimpleSystem,
    VolumeEstimate, ZonotopeSpec,
};

/// Exact rationals.
pub type Rational = BigRational;
/// Matrices of enclosures.
pub type IntervalMatrix = Matrix<Interval>;
/// Double precision matrices.
pub type FloatMatrix = Matrix<f64>;
/// Single precision matrices.
pub type FloatMatrix32 = Matrix<f32>;
