//! Computable Colombeau-type generalized functions and basic functionals.
//!
//! Every object is an ε-indexed net sampled on an [`EpsilonLadder`]:
//! generalized numbers, representative nets of functions on a grid, basic
//! functionals built from delta atoms and densities, and symbol nets of
//! pseudodifferential operators. On top of these the crate estimates
//! valuations and moderateness classes, slow-scale certificates,
//! micro-ellipticity, and the G- and G∞-wave front sets of basic functionals
//! through cone decay of localized Fourier transforms.
//!
//! All estimates are made at a fixed resolution (grid, ladder, ξ window); they
//! refute or witness asymptotic statements, they never prove them.
//!
//! The crate is `no_std` with `alloc`. The `std` feature (default) switches the
//! float backend to the platform libm, `parallel` enables rayon in the
//! wave front scan.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

extern crate alloc;

pub mod asymptotics;
pub mod config;
pub mod dual;
pub mod error;
pub mod expr;
pub mod fft;
pub mod genfun;
pub mod microlocal;
pub mod psido;
pub mod quadrature;

mod par;
mod util;

pub use asymptotics::{
    EpsilonLadder, GeneralizedNumber, ModerationClass, ModerationTag, ScalingFit,
    SlowScaleCertificate,
};
pub use config::Tolerances;
pub use dual::{Atom, BasicFunctional, Certificate, DensityTerm, Mollifier};
pub use genfun::{Grid, MultiIndex, RepresentativeNet, SeminormSpec};
pub use microlocal::{Cone, ConeClass, ConeDecayProfile, CutoffSpec, WaveFrontEstimate, WfClass, WfMode};
pub use psido::SymbolNet;
pub use error::{Error, Result};
pub use expr::{Expr, Var};

pub use num_complex::Complex64;
