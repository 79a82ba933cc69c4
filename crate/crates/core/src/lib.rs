//! Verification engine for the structure theory of isoparametric hypersurfaces
//! in round spheres.
//!
//! A hypersurface of the unit sphere is isoparametric when its principal
//! curvatures are constant. The library builds the objects attached to such a
//! hypersurface (parallel family, focal maps, the Lagrangian lift into the
//! complex quadric, the cubic form `alpha`, the circulant operators `B_t` and
//! the spectral projectors) and checks the algebraic and differential
//! identities that tie them together, either in exact arithmetic on tabulated
//! data or by finite differences on concrete models.

pub mod error;
pub mod family;
pub mod homog6;
pub mod identities;
pub mod models;
pub mod numkit;
pub mod quadric;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod surd;

pub use error::IsoError;
pub use scalar::Scalar;

/// Default floating-point scalar used by the concrete pipeline.
pub type Real = f64;
/// Complex scalar over [`Real`].
pub type Cplx = num_complex::Complex<Real>;
/// Dense real matrix.
pub type RealMat = nalgebra::DMatrix<Real>;
/// Dense real vector.
pub type RealVec = nalgebra::DVector<Real>;
/// Dense complex matrix.
pub type CplxMat = nalgebra::DMatrix<Cplx>;
/// Dense complex vector.
pub type CplxVec = nalgebra::DVector<Cplx>;

/// Convenience result alias for fallible library operations.
pub type Result<T, E = IsoError> = std::result::Result<T, E>;
