//! Conformal maps of the exterior of the unit disk recovered from the
//! Hessenberg matrix of orthonormal polynomials.
//!
//! The pipeline is: curve → discretized measure → moments or Arnoldi →
//! Hessenberg section `D` → limit Toeplitz diagnostics → column approximants
//! `h_n`, compared against closed-form maps where those exist.

pub mod error;
pub mod geometry;
pub mod hessenberg;
pub mod moments;
pub mod precision;
pub mod quadrature;
pub mod riemann;
pub mod toeplitz;

pub use error::{Error, Result};
pub use geometry::{
    arc_length, build_curve, default_nodes_per_segment, discretize_measure, Curve,
    CurveDescriptor, DiscretizedMeasure, Path, Segment,
};
pub use hessenberg::{
    arnoldi, closed_form_arc_hessenberg, hessenberg_arnoldi, hessenberg_from_moments,
    jacobi_interval, orthonormal_basis, shift_matrix, verify_recurrence, HessenbergSection,
    JacobiMode, NodeBasis, OrthonormalBasis, Source,
};
pub use moments::{inner_product, moment_matrix, moment_matrix_extended, MomentMatrix};
pub use num_complex::Complex64;
pub use precision::{Cx, Extended, ExtendedContext, Precision, Real};
pub use riemann::{
    approximant, boundary_image, capacity_estimate, equipotential_grid, sup_difference,
    CapacityEstimate, ConformalMap, Equipotential, ErrorBound, LaurentMap, MapValue,
    ReferenceMap, SupDifference,
};
pub use toeplitz::{
    estimate_diagonal_limits, symbol_from_limits, theta_norms, DiagonalLimits, LimitProvenance,
    ToeplitzDiagnostics,
};
