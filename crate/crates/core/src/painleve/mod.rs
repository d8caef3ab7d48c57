//! Painlevé III and II: tau series at infinity from ramified blocks, their
//! σ-form residuals, and Barnes `G`.

mod barnes;
mod sigma;
mod tau;

pub use barnes::{barnes_g, barnes_pm, gamma, ln_barnes_g, ln_gamma};
pub use sigma::{lambda_recovery, sigma_p2, sigma_p3, sigma_residual, Jet2, Residual, SigmaForm, TauJet};
pub use tau::{p2_branch_constant, ModeFactor, prepared_block, tau_series, TauEval, TauSeries, TauSpec, TauSpecP2, TauSpecP3, TermRow};
