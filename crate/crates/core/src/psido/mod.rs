//! Symbol nets, FFT quantization and transposition, extension to basic
//! functionals, micro-ellipticity, hypoellipticity and micro-support
//! certificates, and the theorem harness.

mod ellipticity;
mod functional;
mod harness;
mod quantize;
mod support;
mod symbol;

pub use ellipticity::{
    check_hypoelliptic, check_micro_ellipticity, HypoellipticReport, MicroEllipticityReport, Witness, ANNULI,
    THRESHOLD_FACTOR, ZERO_SYMBOL,
};
pub use functional::{apply_to_functional, default_cutoff};
pub use harness::{theorem_harness, Cell, HarnessCase, HarnessReport, MicroCell};
pub use quantize::{quantize_apply, quantize_apply_many, quantize_apply_with, transpose_apply, transpose_apply_many, transpose_apply_with, QuantPath, QUANTIZATION_GUARD};
pub use support::{micro_support, MicroSupportCell, MicroSupportReport};
pub use symbol::{SymbolClaims, SymbolNet, MAX_POLY_DEGREE};
