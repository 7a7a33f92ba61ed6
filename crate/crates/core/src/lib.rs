//! Secrecy outage analysis for a large-array transmitter in Rician fading.
//!
//! The crate is organised the way the analysis is layered:
//!
//! * [`crosstalk`]: steering vectors, the sinc-like crosstalk kernel and the
//!   distribution of the normalized crosstalk under a uniform angle of arrival.
//! * [`asymptotic`]: large-array SINRs, secrecy outage region (SOR) boundaries
//!   for no, uniform and directional jamming, lobe radii and areas.
//! * [`sop`]: secrecy outage probability (closed-form integral and polar
//!   region intersection) and the jamming-beneficial distance range.
//! * [`alloc`]: jamming power allocation, from the 1-D search for uniform
//!   jamming to the three directional schemes.
//! * [`mc`]: a finite-array Monte Carlo engine used as ground truth.
//! * [`multiuser`]: per-user SORs when co-scheduled users act as jammers.
//!
//! Angles are radians, distances meters, powers Watts unless stated otherwise.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alloc;
pub mod asymptotic;
pub mod crosstalk;
pub mod error;
pub mod mc;
pub mod multiuser;
pub mod numeric;
pub mod sop;

pub use error::{Error, Result};
