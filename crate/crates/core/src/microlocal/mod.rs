//! Localized Fourier transforms, cone decay and the G- and G∞-wave front sets
//! of basic functionals.

mod classify;
mod cone;
mod spectrum;
mod wavefront;

pub use classify::{cone_decay_classify, ConeDecayProfile};
pub use cone::{Cone, ConeClass, CutoffSpec, WfClass, WfMode, ANGLE_BINS_2D};
pub use spectrum::{fourier_localized, fourier_localized_at, fourier_localized_bins, xi_top, LocalizedSpectrum, SpectralTable};
pub use wavefront::{project_singsupp, singsupp_direct, wavefront, WaveFrontEstimate, WavefrontOptions, WfCell};

#[cfg(test)]
mod tests;
