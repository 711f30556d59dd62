//! Random `k`-complexes `Y_k(n, p)` with a complete `(k - 1)`-skeleton:
//! top-degree cohomology over GF(2), hypergraph connectivity of the
//! `(k - 1)`-faces, the growth process and its hitting times, brute-force
//! oracles, and a seeded experiment harness.

pub mod cohomology;
pub mod complex;
pub mod connectivity;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod oracle;
pub mod process;

pub use error::{Error, Result};
