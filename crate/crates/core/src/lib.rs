//! Network value laboratory.
//!
//! Builds Watts-Strogatz, Barabási-Albert and variable-binomial random
//! networks from explicit seeds, values them under the Metcalfe, Zipf and
//! Reed laws (plus structural degree and hop-reach counts), fits the
//! quadratic ratio law and power-law degree exponents, and runs seeded
//! Monte Carlo sweeps over network size or rewiring probability.

pub mod error;
pub mod experiments;
pub mod fitting;
pub mod generators;
pub mod graph;
pub mod report;
pub mod valuation;

pub use error::{Error, Result};
pub use experiments::{
    fit_fp_from_sweep, run_p_sweep, run_sandwich_check, run_size_sweep, ExperimentPlan, Family,
    PlanFile, SandwichResult, SweepKey, SweepResult, SweepRow,
};
pub use fitting::{
    eval_fp, fit_linear, fit_power_law, fit_quadratic, predicted_value, LinearFit, PowerLawFit,
    QuadraticFit,
};
pub use generators::{
    ba_generate, random_binomial_generate, ring_lattice, ws_generate, ws_generate_traced, BaConfig,
    GeneratorConfig, RandomBinomialConfig, RngSeed, WsConfig,
};
pub use graph::{DegreeHistogram, Graph, GraphFile};
pub use valuation::{
    degree_sum_value, hop_reach_value, metcalfe_value, reed_log2_value, reed_value, value_ratio,
    value_report, zipf_value, ValuationMetric, ValueReport,
};
