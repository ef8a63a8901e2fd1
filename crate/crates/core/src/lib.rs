//! Dense density-matrix simulation of entanglement distribution with
//! separable carriers.
//!
//! A carrier qubit `K` travels from Alice's memory `A` to Bob's memory `B`
//! without ever becoming entangled with them; after a local decoding gate
//! and post-selection on `K`, `A` and `B` end up entangled. The crate covers
//! the two carrier protocols (`alpha`, `beta`), direct Bell-pair distribution
//! for comparison, an eavesdropper scan, a photon-to-spin transfer model and
//! the noise sweeps built on top of them.
//!
//! ```
//! use edss_core::channels::NoiseScenario;
//! use edss_core::protocols::{run_alpha, Measurement};
//!
//! let out = run_alpha(&NoiseScenario::noiseless(), Measurement::Nominal).unwrap();
//! assert!((out.negativity_ab - 0.5).abs() < 1e-12);
//! assert!((out.success_probability - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod channels;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod protocols;
pub mod qstate;
pub mod sweeps;

pub use error::{Error, Result};
pub use qstate::{BlochProjector, DensityMatrix, Layout, UnitaryGate};
