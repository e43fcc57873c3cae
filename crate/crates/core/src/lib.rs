//! Mechanical verification of the explicit constructions behind a stably
//! free, non-free projective module over k[a,x,y,t]/(t²+t(a²+xy)) for a
//! non-perfect field k of characteristic 2.

pub mod algebra;
pub mod error;
pub mod exec;
pub mod matgroup;
pub mod mennicke;
pub mod patching;
pub mod sample;
pub mod steinberg;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
