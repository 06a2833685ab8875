//! File formats and the command-line front end for `qsynth-core`.
//!
//! | format | reader | writer |
//! |---|---|---|
//! | PMF table (`lines` or `csv`) | [`parse_pmf_table`] | [`serialize_pmf_table`] |
//! | OpenQASM 2.0 | [`parse_qasm`] | [`emit_qasm`] |
//! | histogram CSV (`state,count`) | [`parse_histogram`] | [`serialize_histogram`] |
//! | noise model (`key = value`) | [`parse_noise_model`] | [`serialize_noise_model`] |
//! | divergence report (`key=value`) | [`parse_report`] | [`serialize_report`] |

pub mod cli;
mod formats;
mod qasm;

pub use formats::{
    parse_histogram, parse_noise_model, parse_pmf_table, parse_report, serialize_histogram,
    serialize_noise_model, serialize_pmf_table, serialize_report, FormatError, PmfFormat,
};
pub use qasm::{emit_qasm, parse_qasm, QasmDocument, QasmError};

pub use qsynth_core as core;
