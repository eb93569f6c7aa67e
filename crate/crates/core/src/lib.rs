pub mod analysis;
pub mod bits;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod decoder;
pub mod dem;
pub mod error;
pub mod gf2;
pub mod layout;
pub mod noise;
pub mod pauli;
pub mod verify;

pub use error::{Error, Result};
