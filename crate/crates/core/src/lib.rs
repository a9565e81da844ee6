//! Design of aperiodically poled nonlinear crystals.
//!
//! Domain patterns (sequences of ±1 orientations) are scored by the magnitude
//! of their effective nonlinear coefficient for second-harmonic or cascaded
//! third-harmonic generation, and optimized with a hybrid of differential
//! evolution and a discrete four-leader grey-wolf update.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod objectives;
pub mod optimizer;
pub mod parexec;
pub mod physics;
pub mod rng;

pub use error::{Error, Result};
