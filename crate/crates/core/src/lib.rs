//! Certified computation of Weil heights of algebraic numbers, exact Galois
//! and multiplicative-rank certificates, and audits of explicit height
//! lower bounds.

pub mod bounds;
pub mod error;
pub mod galois;
pub mod heights;
pub mod interval;
pub mod lattice;
pub mod nt;
pub mod poly;
pub mod quotient;
pub mod roots;
pub mod util;

pub use error::{Error, Result};
pub use interval::{Dir, Dyadic, IvOrder, RealEnclosure, DEFAULT_PREC, DEFAULT_PREC_CAP};
