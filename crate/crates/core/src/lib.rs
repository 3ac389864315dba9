//! Concave majorants of Lévy paths and their stick-breaking representation.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that samples takes a caller-owned
//! [`rand::Rng`]; [`stream`] derives independent, reproducible streams per replication.

#![no_std]

extern crate alloc;

mod error;
pub mod hull;
pub mod levy;
pub mod limitlaws;
pub mod quad;
pub mod sbrep;
pub mod stats;
pub mod stickbreak;
pub mod stream;

pub use error::{Error, Result};
