//! Numerical verification of the weighted Cauchy formula for automorphic
//! functions on the disk, with the annulus as the worked Widom domain.
//!
//! The crate is organised bottom-up: [`moebius`] maps, [`fuchsian`] groups
//! and orbits, [`greens`] functions, [`hardy`] space tools, the [`annulus`]
//! test domain, the [`theorem`] checks themselves and the [`cli`] runner.

pub mod annulus;
pub mod cli;
pub mod error;
pub mod fuchsian;
pub mod greens;
pub mod hardy;
pub mod moebius;
pub mod theorem;

pub use error::{Error, Result};
