//! Mellin transforms, field kernels, completed L-functions and summation formulas.

pub mod gamma;
pub mod kernel;
pub mod lfunction;
pub mod poisson;
pub mod quad;
pub mod testfn;
pub mod theta;
pub mod transforms;
pub mod zeta;

pub use kernel::{kernel_closed_form, kernel_contour, kernel_k, ContourConfig, KernelMethod};
pub use lfunction::LValueTable;
pub use poisson::{check_poisson, check_poisson_char, check_poisson_coprime, CoprimeReport, PoissonPair, PoissonReport};
pub use testfn::TestFunction;
pub use theta::{rho_weight, rho_weight_closed_form, theta_sum};
pub use transforms::{ddot_transform, dot_transform, mellin, parseval, ParsevalReport};
pub use zeta::{dedekind_zeta, ideal_counts, zeta_special_zero};
