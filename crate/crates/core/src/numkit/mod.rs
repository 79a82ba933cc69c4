//! Numerical kernels: dense spectral decompositions with eigenvalue
//! clustering, directional finite differences with optional Richardson
//! extrapolation, and Kulkarni-Nomizu products of bilinear forms.

pub mod eig;
pub mod fd;
pub mod kn;

pub use eig::{eig_sym, SpectralClusters};
pub use fd::{fd_dir, FdResult, FdValue, StepPolicy};
pub use kn::{kn_skew, kn_sym};
