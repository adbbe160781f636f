//! Basic functionals: ε-nets of finite-order distributions with uniform
//! continuity data, their action, convolution, multiplication and
//! regularization.

mod functional;
pub(crate) mod integrate;
mod mollifier;
mod ops;
mod probes;
mod regularize;

pub use functional::{Atom, BasicFunctional, Certificate, DensityTerm};
pub use mollifier::Mollifier;
pub use ops::{cell_of, CertificateReport};
pub use probes::{bump_at, standard_probes};
pub use regularize::ProbeConvergence;
#[cfg(test)]
mod tests;
