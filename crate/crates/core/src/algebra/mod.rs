//! Exact arithmetic: characteristic-2 fields, presented quotient rings in
//! normal form, and homomorphisms between them.

pub mod field;
pub mod hom;
pub mod monomial;
pub mod parse;
pub mod presentation;
pub mod ring;

pub use field::{BitPoly, Field, FieldElem};
pub use hom::{RingHom, StandardHoms};
pub use monomial::{Monomial, Poly};
pub use presentation::Presentation;
pub use ring::RingElem;
