//! Sidon systems of finite sets: construction, verification and simulation.

pub mod constructions;
pub mod error;
pub mod family;
pub mod io;
pub mod oracle;
pub mod randomsim;
pub mod setcore;
pub mod verifier;

pub use error::{Error, Result};
pub use family::Family;
pub use setcore::{KSet, SumsetKey};
