//! Finite models of micro-reversibility covers and tower bundles.
//!
//! The crate is split along the two constructions it implements:
//!
//! * the thickening side: [`space`] (information spaces and ε-balls),
//!   [`thick`] (thick points, strata, the directed system of thick-point
//!   categories and its colimit) and [`natural`] (reconstructed thick points
//!   and the degree-decay wave function);
//! * the tower side: [`tower`] (towers, reshaping groupoids and the merge
//!   product) and [`bundle`] (groupoid-valued functors over thick-point
//!   categories, their categories of elements, threads and the cover and
//!   round-trip checks).
//!
//! [`fincat`] holds the explicit finite categories everything else is built
//! from. The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bundle;
pub mod error;
pub mod fincat;
pub mod natural;
pub mod space;
pub mod thick;
pub mod tower;

pub use error::{Error, Result};
pub use space::{AtomId, AtomSet, InfoSpace};
