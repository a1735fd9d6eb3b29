//! Exact differential spectra of power functions over GF(2^n).
//!
//! The focus is the family `x -> x^(2^t - 1)`, whose spectrum is governed by
//! the kernels of the linearized polynomials `x^(2^t) + b x^2 + (b+1) x`.
//! Modules:
//!
//! - [`gf2n`]: field arithmetic in a polynomial basis;
//! - [`linmaps`]: linearized maps as bit matrices, kernels, adjoints;
//! - [`spectra`]: brute-force and kernel-based spectra;
//! - [`formulas`]: closed forms, Kloosterman sums, cubic counts, code weights;
//! - [`verify`]: an exhaustive harness over a range of degrees.

pub mod error;
pub mod formulas;
pub mod gf2n;
pub mod linmaps;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use gf2n::{Elem, Field};
pub use linmaps::{KernelProfile, LinearizedMap};
pub use spectra::{DifferentialSpectrum, RestrictedMultiset};
