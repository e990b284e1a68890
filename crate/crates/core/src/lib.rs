//! Link-adaptive block encryption over a noisy link.
//!
//! The crate pairs a variable-width Rijndael cipher (128 to 256 bit blocks in
//! 32-bit steps) with ECB/CBC framing, a memoryless bit-error channel driven
//! by per-frame SNR, and a block-length optimizer that trades throughput for
//! security under a mean-security constraint. [`sim`] wires these together
//! into reproducible sweeps comparing the adaptive scheme with a fixed-length
//! baseline.

pub mod adaptive;
pub mod bits;
pub mod channel;
pub mod error;
pub mod metrics;
pub mod modes;
pub mod rijndael;
pub mod rng;
pub mod sim;

pub use bits::Bits;
pub use error::{Error, Result};
