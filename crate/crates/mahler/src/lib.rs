//! Mahler measures of Laurent polynomials over arbitrary tori.
//!
//! The crate provides two independent measure engines (direct torus
//! quadrature and Jensen-reduced root tracking), argument-principle winding
//! indices, the sampled vanishing region with its complement components, the
//! large-parameter series expansion, the Cassaigne–Maillot closed form for
//! `ax + by + c`, and the dilogarithm closed form for
//! `x + 1/x + y + 1/y + 4` over any torus.
//!
//! Polynomial arithmetic is generic over the coefficient ring; the crate
//! root fixes the two instantiations used in practice: double-precision
//! complex coefficients for the numeric engines, and exact rational
//! (Gaussian) coefficients for constant-term work.

pub mod error;
pub mod family;
pub mod laurent;
pub mod measure;
pub mod q4;
pub mod quad;
pub mod region;
pub mod roots;
pub mod special;
pub mod theorems;
pub mod winding;

pub use error::{Error, Result};

/// Double-precision complex scalar.
pub type Complex64 = num_complex::Complex<f64>;

/// Exact Gaussian-rational scalar, for constant-term oracles.
pub type ExactCoeff = num_complex::Complex<num_rational::BigRational>;

/// Sparse Laurent polynomial with double-precision complex coefficients.
pub type LaurentPoly = laurent::SparsePoly<Complex64>;

/// Sparse Laurent polynomial with exact coefficients.
pub type ExactLaurentPoly = laurent::SparsePoly<ExactCoeff>;

pub use laurent::{
    parse_complex, parse_poly, parse_poly_with_arity, var_name, Coeff, SparsePoly, YFactorization,
};
pub use measure::{
    jensen_circle, mahler_1var_exact, mahler_direct, mahler_jensen, MeasureResult, Method,
    MethodDetail, Torus,
};
pub use quad::{periodic_integral_1d, periodic_integral_nd, safe_log_abs, GridSpec, QuadResult};
pub use region::{
    build_region, ellipse_conditions, ellipse_membership, family_extremes, EllipseClass,
    EllipseConditions, FamilyExtremes, PointClass, RegionModel,
};
pub use roots::roots_complex;
pub use special::{bloch_wigner, bloch_wigner_with_error, li2, li2_with_error, DilogValue};
pub use theorems::{
    bounded_component_value, cassaigne_maillot, series_coefficients, series_mtilde,
    verify_main_relation, BoundedValue, Branch, RelationReport, SeriesCoeffs, SeriesMtilde,
};
pub use winding::{index_in_disc, nu_pair, rho_constancy, IndexCount, RhoReport, VarRole};
