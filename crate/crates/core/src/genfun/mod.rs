//! Grids, representative nets of functions, seminorms, derivatives,
//! embeddings and point values.

mod grid;
mod net;
mod ops;
mod source;

pub use grid::{Grid, MultiIndex, Region, MAX_POINTS, MIN_POINTS};
pub use net::{DeltaAtom, Focus, DistributionSpec, RepresentativeNet, SUPPORT_FLOOR};
pub use ops::SeminormSpec;
pub use source::{Source, SourceTerm};

#[cfg(test)]
mod tests;
