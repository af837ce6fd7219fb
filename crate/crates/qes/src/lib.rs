//! Quasi-exactly solvable (QES) spectrum engine for one- and two-dimensional
//! double-well Schrödinger problems.
//!
//! The crate realizes the sl₂(R) generators as exact linear maps on polynomial
//! coefficient vectors, generates the spectral polynomials of each potential
//! family by recurrence, extracts the QES eigenvalues and eigenfunctions, and
//! verifies every result through algebraic-identity, differential-residual and
//! grid-diagonalization checks.
//!
//! ```
//! use qes::spectra::{full_spectrum, PotentialModel};
//!
//! let model = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
//! let spectrum = full_spectrum(&model, 1).unwrap();
//! assert_eq!(spectrum.eps_roots.len(), 2);
//! // roots of 9ε² − 55
//! assert!((spectrum.eps_roots[1] - 55f64.sqrt() / 3.0).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod recurrence;
pub mod separable2d;
pub mod spectra;
pub mod wavefunction;

pub use error::{Error, Result};
