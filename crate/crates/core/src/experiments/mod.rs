//! Named, reproducible checks that bind the library together and emit
//! structured reports.

mod checks;
mod main_experiment;
mod proof_chain;
mod report;

pub use checks::{
    check_blichfeldt, check_claim1, check_corollary_count, check_minkbound, check_nonsymmetric,
    corollary_ln_bound, Body, DEFAULT_MAX_DIM,
};
pub use main_experiment::{random_gap, run_main_experiment, MainExperiment, MainSummary, MAX_MAIN_DIM};
pub use proof_chain::{check_proof_chain, ProofChainContext};
pub use report::{csv_row, holds, sort_reports, ExperimentReport, Quantity, Relation, CSV_HEADER, REAL_TOLERANCE};
