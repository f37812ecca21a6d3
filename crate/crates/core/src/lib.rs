//! Bubbles of weighted polynomial rings.
//!
//! A bubble of a weight vector `w` is a lattice point `u` with `w·u >= 2d`,
//! `d = lcm(w)`, that dominates no point of weight exactly `d`. Bubbles are the
//! obstruction to generation in degree one of the `d`-th Veronese subring.

pub mod arith;
pub mod bounds;
pub mod classify;
pub mod enumeration;
mod error;
pub mod oracle;
pub mod primes;

pub use arith::{arrangement, checked_dot, gcd_vector, lcm_vector, normalize, ThresholdList, WeightVector};
pub use enumeration::{bubbles, Bubble, Low};
pub use error::{Error, Result};
