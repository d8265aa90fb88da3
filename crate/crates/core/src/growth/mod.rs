//! Seminorms `|f|_{K,n}`, submultiplicative norms, exponentials of
//! triangular matrices and numeric polynomial-growth fits.

mod expm;
mod fit;
mod seminorm;

pub use expm::{log_norm_exp, tri_exp};
pub use fit::{
    analyze, classify_growth, fmt12, growth_fit, growth_fit_function, k_grid, s_grid, GrowthConfig,
    GrowthReport, Sample, Verdict, K_GRID, MIN_SAMPLES,
};
pub use seminorm::{norm_weighted, seminorm_cn, sup_disk};
