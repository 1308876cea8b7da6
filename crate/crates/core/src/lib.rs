//! Random Hermitian finite-band matrices arising from the Wyner cellular
//! uplink and two-tap ISI channels: channel generation, banded Gram and LDL
//! factorization, a band eigensolver, spectral statistics, closed-form
//! capacity baselines, and a reproducible experiment harness.
//!
//! ```
//! use bandspec::{derive_stream, eigenvalues, generate_channel, gram, log_det_shifted};
//! use bandspec::{ChannelParams, FadingSpec};
//!
//! let law = FadingSpec::ComplexGaussianUnit;
//! let params = ChannelParams::wyner(256, 1, 0.5, 0.5, law, law, law, 10.0)?;
//! let a = gram(&generate_channel(&params, &mut derive_stream(42, 0)));
//! let by_eigen = eigenvalues(&a).shannon_transform(params.rho());
//! let by_ldl = log_det_shifted(&a, params.rho())? / a.order() as f64;
//! assert!((by_eigen - by_ldl).abs() < 1e-10);
//! # Ok::<(), bandspec::Error>(())
//! ```

pub mod band_matrix;
pub mod closed_forms;
pub mod eig;
pub mod error;
pub mod fading;
pub mod harness;
pub mod narula_chain;
pub mod spectral;
pub mod stream;

pub use band_matrix::{
    generate_channel, gram, ldl_shifted, log_det_shifted, BandedHermitian, BlockBandedChannel,
    ChannelParams, Diagonal,
};
pub use eig::{eigenvalues, eigenvalues_many};
pub use error::{Error, Result};
pub use fading::FadingSpec;
pub use spectral::{trace_moment, EmpiricalSpectrum};
pub use stream::derive_stream;
