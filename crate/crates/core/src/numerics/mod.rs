//! Numerical kernel: percentiles, least squares with inference, rolling
//! statistics, correlation, zeta on the critical line and a Gaussian HMM.

mod hmm;
mod ols;
mod percentile;
mod special;
mod stats;
mod zeta;

pub use hmm::{hmm_decode, hmm_fit, HmmConfig, HmmFit, HmmModel};
pub use ols::{ols_fit, OlsFit};
pub(crate) use percentile::percentile_sorted;
pub use percentile::percentile;
pub use special::{ln_gamma, reg_inc_beta, student_t_sf, two_sided_p};
pub use stats::{
    mean, pearson_corr, rms, rolling_corr, rolling_stat, sample_variance, Correlation, RollingCorrelation,
    RollingKind,
};
pub use zeta::{zeta_critical_line, MAX_T as ZETA_MAX_T};
