//! Command-line pipeline for twisted tensor Hadamard subfactors: spec
//! parsing, analysis reports, comparisons and numerical commutants.

pub mod error;
pub mod report;
pub mod spec;

pub use error::{CliError, Result};
pub use report::{
    analyze, analyze_batch, classify4, commutant, compare, equiv, fourier, to_json, AnalysisReport, Classify4Report,
    CommutantReport, CompareReport, EquivReport, FourierReport, Render, RunOptions,
};
pub use spec::{AnalysisSpec, SpecOptions};
