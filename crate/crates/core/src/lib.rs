//! Exact and Monte-Carlo computation in the free rank-2 step-3 Carnot group.
//!
//! The crate has two halves that share one set of formulas:
//!
//! * an exact half (arbitrary-precision rationals, sparse polynomials, Lie
//!   brackets) that proves the group-law, reachability, wedge, and cone
//!   identities as polynomial identities and classifies membership exactly;
//! * a floating-point half that estimates gauge-ball densities of the
//!   constant-normal example sets by deterministic, seedable Monte-Carlo
//!   sampling (data-parallel with rayon when the default `parallel` feature
//!   is on; a sequential fallback otherwise).
//!
//! See the `verify` module for the one-call identity suite and the
//! `rectifier` module for the direction-propagation engine on general
//! Carnot algebras of step at most 4.

pub mod csets;
pub mod density;
pub mod f23;
pub mod liecore;
pub mod polyalg;
pub mod rectifier;
pub mod scalar;
pub mod semigroup;
pub mod verify;

pub use scalar::{Q, Scalar};
