//! Trace-norm and diamond-norm distances between single-qubit quantum channels.
//!
//! The diamond distance is estimated two ways: by random search over pure
//! system-ancilla inputs in the Fano representation ([`discrimination`]), and
//! as a maximum output fidelity ([`kitaev`]). Closed forms for Pauli channels
//! serve as oracles. See the guide in `book/` for a walkthrough.

pub mod channels;
pub mod discrimination;
pub mod error;
pub mod kitaev;
pub mod linalg;
pub mod pauli;
pub mod search;
pub mod states;

pub use error::{Error, Result};

// Runs the guide's code blocks as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/intro.md")]
pub mod book_intro {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fano.md")]
pub mod book_fano {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/channels.md")]
pub mod book_channels {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/f-algorithm.md")]
pub mod book_f_algorithm {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/k-algorithm.md")]
pub mod book_k_algorithm {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/convergence.md")]
pub mod book_convergence {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
