//! Monte Carlo experiments, grid verification and their CSV output.

pub mod experiment;
pub mod grids;
pub mod output;

pub use experiment::{
    concentration_profile, run_experiment, run_trial, ConcentrationProfile, ExperimentResult, ExperimentSpec,
    Histogram, TrialRecord,
};
pub use grids::{verify_grids, GridConfig, GridFamily, GridReport, GridRow};
pub use output::{format_sig, write_grid, write_trials};
pub use rate_test::{binomial_upper_tail, RateTest, RATE_TEST_ALPHA};
