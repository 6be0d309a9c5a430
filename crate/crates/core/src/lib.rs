//! Expander-style graph and hypergraph codes over GF(2).
//!
//! A [`GraphCode`] places a short binary linear code ([`BinaryLinearCode`]) at every
//! vertex of a random `n`-regular `l`-partite hypergraph ([`RegularHypergraph`]); the
//! global code is the set of edge labelings that look like local codewords everywhere.
//! The [`decoders`] module implements the iterative bounded-distance decoders and
//! [`thresholds`] evaluates the error fractions they provably correct.

pub mod bits;
pub mod cli;
pub mod decoders;
pub mod error;
pub mod graph_code;
pub mod local_code;
pub mod rng;
pub mod simulate;
pub mod tables;
pub mod thresholds;
pub mod topology;

pub use bits::{BitMatrix, BitVec};
pub use error::{Error, Result};
pub use graph_code::{GlobalWord, GraphCode};
pub use local_code::{make_local_code, BinaryLinearCode, LocalCodeKind};
pub use topology::{EdgeSet, RegularHypergraph};
