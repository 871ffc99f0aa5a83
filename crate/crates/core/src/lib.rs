//! Nerves of finite open covers on model spaces.
//!
//! The crate builds exact open covers on the circle `R/Z`, flat tori and
//! finite metric spaces, constructs their nerves, computes homology and
//! complexity counts, and follows how those counts grow when a cover is
//! pulled back along a semigroup action. A small real-analysis module
//! evaluates space-form volume comparisons that bound generator sizes
//! and expansivity constants.
//!
//! Everything here is `no_std` (with `alloc`). Set decisions are made
//! with exact rationals; floating point only appears in entropy values,
//! volume integrals and Gromov-Hausdorff bounds.
//!
//! ```
//! use nervekit_core::cover::Cover;
//! use nervekit_core::nerve::build_nerve;
//! use nervekit_core::homology::{betti_numbers, Coefficients};
//! use nervekit_core::rational::rat;
//!
//! let cover = Cover::circle_arcs(&[
//!     (rat(0, 1), rat(2, 5)),
//!     (rat(3, 10), rat(7, 10)),
//!     (rat(3, 5), rat(21, 20)),
//! ]).unwrap();
//! let nerve = build_nerve(&cover, 2).unwrap();
//! assert_eq!(nerve.counts(), vec![3, 3]);
//! let betti = betti_numbers(&nerve, Coefficients::Rational);
//! assert_eq!(betti.betti, vec![1, 1]);
//! ```
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod cover;
pub mod dynamics;
pub mod error;
pub mod homology;
pub mod irreducible;
pub mod matrix;
pub mod nerve;
pub mod rational;
pub mod realization;
pub mod scenarios;
pub mod space;

pub use error::{Error, Result};
