//! Exact additive energies, Dirichlet-polynomial norms and Λ(p)-type bounds
//! for finite prefixes of general frequencies.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod diagnostics;
pub mod dirichlet;
pub mod energy;
pub mod error;
pub mod exactreal;
pub mod frequency;
pub mod keys;
pub mod lambda;
pub mod ntt;
pub mod rng;
pub mod util;
pub mod verify;

pub use error::{Error, Result};
