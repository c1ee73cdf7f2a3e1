//! Rényi cross-entropy of order α.
//!
//! For distributions `p`, `q` on a common support,
//!
//! ```text
//! H_α(p; q) = 1/(1−α) · ln Σ p(x) q(x)^{α−1}        (discrete)
//! h_α(p; q) = 1/(1−α) · ln ∫ p(x) q(x)^{α−1} dx     (differential)
//! ```
//!
//! Both reduce to the Rényi entropy when `p = q` and to the Shannon
//! cross-entropy as α → 1. This crate provides
//!
//! - discrete measures over finite alphabets ([`discrete`]),
//! - exponential-family calculus ([`exponential_family`]) and the closed forms
//!   built on it ([`differential`]),
//! - cross-entropy rates of stationary Gaussian processes
//!   ([`gaussian_process`]) and finite-alphabet Markov sources ([`markov`]),
//! - an independent quadrature oracle ([`oracle`]) that every closed form is
//!   tested against.
//!
//! All values are in nats.

#![forbid(unsafe_code)]

pub mod alpha;
pub mod differential;
pub mod discrete;
pub mod error;
pub mod exponential_family;
pub mod gaussian_process;
pub mod markov;
pub mod oracle;
pub mod support;

pub use alpha::{AlphaKind, AlphaOrder};
pub use error::{Error, Result};
pub use exponential_family::{ExpFamilyDistribution, Family, NaturalParam};
pub use support::{SupportKind, SupportSpec};
