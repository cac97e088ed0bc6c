//! Community time-activity trajectories.
//!
//! The pipeline runs from activity diaries to a fitted compositional model:
//!
//! 1. [`activity`]: diaries are coded into eight activity categories on a
//!    96-step (15 minute) day grid.
//! 2. [`markov`]: a time-inhomogeneous Markov chain is estimated per
//!    community and simulated into a 96 x 8 composition trajectory.
//! 3. [`regression`]: Dirichlet regression relates the compositions to
//!    squared time of day and community covariates.
//! 4. [`stats`]: diary clustering, covariate correlation and selection,
//!    Box's M and Welch t validation, ternary coordinates.
//! 5. [`pipeline`]: configuration, synthetic fixtures and the end-to-end run
//!    behind the `actraj` binary.
//!
//! Each capability has a runnable program under `examples/`.

pub mod activity;
pub mod dirichlet;
pub mod error;
pub mod markov;
pub mod optim;
pub mod pipeline;
pub mod regression;
pub mod special;
pub mod stats;

pub use activity::{
    diary_to_sequence, map_raw_activity, ActivityCategory, ActivitySequence, CategoryMapping, CommunityCovariates,
    Composition, CompositionMatrix, DiaryEvent, TimeGrid, NCAT, STEPS,
};
pub use dirichlet::{dirichlet_log_density, dirichlet_mean, DirichletParams};
pub use error::{Error, Result, Stage};
pub use markov::{
    analytic_profile, estimate_transitions, simulate_profile, simulate_trajectory, zero_replace, TransitionModel,
};
pub use regression::{fit_regression, loglik_and_score, predict, residuals, DesignRow, FitOptions, RegressionFit};
pub use special::{digamma, lgamma};
