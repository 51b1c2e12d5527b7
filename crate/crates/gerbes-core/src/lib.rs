//! Bundle gerbes with connection on finite simplicial complexes, in exact
//! arithmetic.
//!
//! Smooth manifolds are replaced by finite oriented simplicial complexes,
//! differential forms by rational cochains and `U(1)` by `ℚ/ℤ`. The good
//! cover is always the cover by closed vertex stars, whose nerve is the
//! complex itself. Everything is finite linear algebra over `ℤ` and `ℚ`, so
//! all identities hold exactly.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod deligne;
pub mod error;
pub mod fixtures;
pub mod gerbe;
pub mod linalg;
pub mod monomial;
pub mod morphism;
pub mod product;
pub mod reduction;
pub mod sections;

pub use arith::{Cyclo, Q};
pub use cochain::{Chain, Cochain, Ring};
pub use complex::{Simplex, SimplicialComplex};
pub use error::{Error, Result};
