//! Exact SO(3) Witten-Reshetikhin-Turaev invariants and Ohtsuki series of
//! rational homology spheres given by Seifert data or knot surgery.

#![allow(clippy::needless_range_loop)]

pub mod cycring;
pub mod error;
pub mod formal;
pub mod invariants;
pub mod knots;
pub mod numkit;
pub mod verify;

pub use error::{Error, Result};
