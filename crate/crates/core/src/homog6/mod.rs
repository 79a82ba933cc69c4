//! Exact algebra for the sixfold families: coefficient tables of the cubic
//! form, frame conversion, the associated isospectral families of symmetric
//! matrices, and the homogeneity criteria.

mod criteria;
mod frames;
mod isospectral;
mod table;

pub use criteria::{homogeneity_criteria, CriterionReport, EXACT_TOL};
pub use frames::{
    christoffel, classical_weyl_table, f_component, frame_convert, frame_scale, lambda6, FrameSet,
};
pub use isospectral::{
    build_isospectral_family, isospectral_scan, isospectral_scan_pair, kernel_constancy,
    kernel_constancy_pair, rotating_kernel_control, IsoFamily,
};
pub use table::AlphaTable;
