//! Source coding with distortion side information.
//!
//! The crate is `no_std` (with `alloc`) and contains every numerical piece of
//! the toolkit:
//!
//! * [`model`] holds discrete instances, channels and the information
//!   primitives (mutual information, expected distortion, distortion tensor
//!   builders).
//! * [`oracle`] computes the four rate-distortion functions (side information
//!   at neither end, decoder, encoder, both) by slope-parameterized alternating
//!   minimization and runs the equality checks built on top of them.
//! * [`mds`] is the lossless polynomial curve-fit coder over `GF(2^m)`.
//! * [`transform`] contains the band-limited DFT interpolation quantizer and
//!   the two-stage transform quantizer.
//! * [`gap`] evaluates the high-resolution rate penalty for the encoder not
//!   knowing the side information, in closed form and by Monte-Carlo.
//!
//! All information quantities are in nats.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

mod error;
pub mod gap;
pub(crate) mod math;
pub mod mds;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod transform;

pub use error::{Error, Result};
