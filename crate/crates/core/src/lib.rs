//! Finite-semigroup toolkit built around one theme: embedding a finite
//! semigroup of a given kind (arbitrary, band-of-idempotents, orthodox,
//! inverse) into a finite semigroup generated by just two transformations,
//! and then machine-checking that the embedding really has the structure
//! it is supposed to have.
//!
//! The crate is `no_std` (with `alloc`); everything here is exact integer
//! and transformation arithmetic. IO, file formats and the command-line
//! driver live in the companion `twogen-cli` crate.
//!
//! Module map:
//!
//! * [`ptrans`] — partial transformations of a finite point set and the
//!   flattened carrier `Z = X × {0, …, m−1}` the embeddings act on;
//! * [`sidon`] — strictly increasing sequences with pairwise-distinct
//!   differences (Mian–Chowla, powers of two) and the translate/four-term
//!   facts that keep unwanted products from colliding;
//! * [`semigroup`] — breadth-first enumeration from generators, Green's
//!   relations, classification predicates, local submonoids, principal
//!   factors and Brandt recognition, Cayley representation of a table;
//! * [`identities`] — two-sided semigroup identities, exhaustive
//!   evaluation, and the fixed catalog used for preservation tests;
//! * [`constructions`] — the four embedding constructions as concrete
//!   generator pairs plus the cell-map (`lambda`) machinery;
//! * [`verify`] — the verification suites that check certificates in full
//!   (enumerate everything) or structural (relation/sample) mode.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constructions;
pub mod error;
pub mod identities;
pub mod ptrans;
pub mod semigroup;
pub mod sidon;
pub mod verify;

pub use error::{Error, Result};
