//! Period integrals of the curves `y^N = (x − λ)∏(x − c_j)` (exponent `A`
//! or `N − A`), the Lauricella `F_D` oracle, and operator annihilation checks.

mod annihilation;
mod config;
mod gamma;
mod integral;
mod lauricella;

pub use annihilation::{
    annihilation_residual, annihilation_residual_with_parameters, check_closed_monodromy,
    product_annihilation_residuals, AnnihilationReport,
};
pub use config::{Curve, ModelConfig, ModelConfigSpec};
pub use gamma::{beta, gamma};
pub use integral::{curve_form_integral, PeriodFunction};
pub use lauricella::{lauricella_fd_euler, lauricella_fd_series, SegmentPeriodFd, SERIES_MAX_DEGREE};
