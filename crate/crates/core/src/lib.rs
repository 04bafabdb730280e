//! Supervised log-ratio (SLR) balance selection for compositional data.
//!
//! A single log-ratio biomarker, the balance between two groups of parts,
//! is chosen in two steps: rank clr-transformed variables by their univariate
//! effect on the response and keep the top `m`, then split the kept variables
//! into two groups by clustering their Aitchison variation matrix. The
//! resulting balance enters a one-predictor GLM.
//!
//! Modules:
//!
//! - [`coda`]: compositions, clr / alr, balances, variation matrices
//! - [`screening`]: univariate effects and top-m retention
//! - [`clustering`]: complete-linkage and Fiedler-vector two-way splits
//! - [`slr`]: the fitted model, prediction, log-contrast coefficients
//! - [`model_selection`]: K-fold CV over `m` and the one-SE rule
//! - [`simgen`]: latent-variable data generator
//! - [`metrics`]: MSE, AUC, support recovery, coefficient error
//! - [`oracle`]: exhaustive best-balance search for small `p`

pub mod clustering;
pub mod coda;
pub mod error;
pub mod glm;
pub mod linalg;
pub mod metrics;
pub mod model_selection;
pub mod oracle;
pub mod rng;
pub mod screening;
pub mod simgen;
pub mod slr;

pub use clustering::{cluster_two, ClusterMethod, TwoClusterResult};
pub use coda::{
    alr, balance, closure, clr, inv_alr, variation_matrix, BalancePartition, Composition,
    CompositionMatrix, VariationMatrix,
};
pub use error::{Error, Result};
pub use glm::Family;
pub use model_selection::{cv_path, select_one_se, stratified_kfold, CvPath, OneSeChoice};
pub use oracle::{exhaustive_best_balance, OracleResult};
pub use screening::{top_m_indices, univariate_effects, UnivariateEffects};
pub use simgen::{simulate_dataset, SimConfig, SimDataset};
pub use slr::{fit_balance_glm, fit_slr, predict, to_beta, SlrFit, SlrModel};
