//! Idempotent completion of extriangulated categories, checked by exact
//! linear algebra over GF(p) on small instances.

pub mod axioms;
pub mod backend;
pub mod category;
pub mod cli;
pub mod cotorsion;
pub mod error;
pub mod extri;
pub mod fext;
pub mod karoubi;
pub mod linalg;
pub mod recollement;

pub use error::{Error, Result};
