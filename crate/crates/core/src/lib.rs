//! Orbit-finite sets over structured atoms.
//!
//! The crate is `no_std` and needs only `alloc`. It provides exact atom
//! arithmetic and the catalogue of atom structures ([`atoms`]), first-order
//! formulas with quantifier elimination ([`formula`]), intensional definable
//! sets ([`defsets`]), concrete automorphisms ([`autos`]), hereditarily finite
//! sets with atoms ([`universe`]), a small forcing laboratory ([`forcing`]) and
//! the countable-cover scenarios built on top of it ([`transfer`]).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod atoms;
pub mod autos;
pub mod defsets;
pub mod error;
pub mod forcing;
pub mod formula;
pub mod num;
pub mod sample;
pub mod selftest;
pub mod transfer;
pub mod universe;

pub use atoms::{Atom, CutSpec, Field, Part, Point, Slot, StructureSpec, TypePattern};


pub use autos::Automorphism;
pub use defsets::DefSet;
pub use error::{Error, Result};
pub use formula::Formula;
pub use universe::HFSet;

pub use num::{QuadRat, Rational};

