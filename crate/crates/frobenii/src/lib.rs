//! Frobenius manifolds, WDVV solutions and their monodromy data.

pub mod cli;
pub mod error;
pub mod frobenius;
pub mod gw;
pub mod kernel;
pub mod pvi;
pub mod semisimple;
pub mod singularity;
pub mod stokes;

pub use error::{Error, Result};
