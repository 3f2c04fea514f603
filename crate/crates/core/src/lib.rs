//! Autoregressive spectral estimation in one and two dimensions.
//!
//! The crate provides three families of estimators for the prediction
//! coefficients of an AR model:
//!
//! | data | from correlations | Burg, shrinking window | Burg, zero-padded |
//! |------|-------------------|------------------------|-------------------|
//! | 1D   | [`levinson`]      | [`burg_classic`]       | [`burg_modified`] |
//! | 2D   | [`wwra`]          | [`burg2d_classic`]     | [`burg2d_modified`] |
//!
//! The zero-padded Burg variants return the same coefficients as the
//! correlation-based recursions run on the biased lag sums of
//! [`estimate_autocorr_1d`] / [`estimate_block_autocorr_2d`]. The classic
//! variants are the usual finite-window Burg and differ from them on short
//! records.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod ar1d;
pub mod ar2d;
pub mod autocorr;
pub mod error;
pub mod linalg;
pub mod siggen;
pub mod spectrum;

pub use num_complex::Complex64 as C64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use ar1d::{
    burg_classic, burg_modified, levinson, residual_mse, ArModel1D, BurgLattice1D, Denominator, Windowing,
};
pub use ar2d::{
    burg2d_classic, burg2d_modified, extract_quarter_plane_filter, residual_mse_2d, wwra, ArModel2D,
    BurgLattice2D, QuarterPlaneFilter, UpdateRule,
};
pub use autocorr::{
    build_data_matrices, estimate_autocorr_1d, estimate_block_autocorr_2d, AutocorrSeq, BlockAutocorr,
    ComplexSignal1D, DataMatrixSeq, Signal2D,
};
pub use error::{Error, Result};
pub use linalg::{solve_hermitian_dense, ComplexMatrix};
pub use siggen::{gen_noisy_sinusoid, phase_sweep, Snr, SynthConfig};
pub use spectrum::{ar_spectrum_1d, ar_spectrum_2d, dft, idft, SpectrumGrid};
