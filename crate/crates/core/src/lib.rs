pub mod error;
pub mod exact;
pub mod exponent;
pub mod hankel;
pub mod hfrac;
pub mod mahler;
pub mod pade;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
