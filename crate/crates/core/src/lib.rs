//! Interleaved Gabidulin codes over `F_{q^m}` with an interpolation-based
//! list, unique and error-erasure decoder, the failure predicates of two
//! earlier joint decoders, closed-form failure bounds and a seeded trial
//! runner.
//!
//! The `parallel` feature (on by default) runs trials on rayon; without it
//! every run is sequential.

pub mod channel;
pub mod codes;
pub mod erasure;
pub mod error;
pub mod experiment;
pub mod ffield;
pub mod interp;
pub mod linalg;
pub mod linpoly;
pub mod reference;
pub mod textio;

pub use codes::{InterleavedCode, MessageTuple, WordMatrix};
pub use error::{Error, Result};
pub use ffield::{Elem, Field};
pub use interp::{decode, DecodeOutcome, FailureReason, Mode};
pub use linpoly::LinPoly;
