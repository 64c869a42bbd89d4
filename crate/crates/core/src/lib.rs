//! Finite complete orthomodular lattices and the linear maps between them.
//!
//! The crate covers construction and validation of lattices ([`oml`]),
//! join-preserving maps and their adjoints ([`linmap`]), dagger kernels and
//! the image factorization ([`kernel`]), biproducts and free objects
//! ([`constructions`]), the Galois-connection presentation ([`galois`]),
//! a catalog of standard examples ([`catalog`]), text formats ([`io`], [`dot`])
//! and an exhaustive law checker ([`laws`]).

mod bits;

pub mod catalog;
pub mod constructions;
pub mod dot;
pub mod galois;
pub mod io;
pub mod kernel;
pub mod laws;
pub mod linmap;
pub mod oml;
pub mod report;

pub use galois::GaloisMorphism;
pub use kernel::{Factorization, KernelData};
pub use linmap::{compose, enumerate_linmaps, LinMap, MapError};
pub use oml::{ElemId, Oml, OmlError, Relation};
