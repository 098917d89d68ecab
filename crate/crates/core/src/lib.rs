//! Exact quadratic forms, quaternion algebras, corestrictions and Albert
//! forms over small exact fields, with certificate-producing checks of the
//! equivalence between common quadratic subfields and the corestriction
//! failing to be a division algebra.

pub mod algebra;
pub mod clifford;
pub mod corestriction;
pub mod error;
pub mod field;
pub mod form;
pub mod harness;
pub mod linalg;
pub mod literal;
pub mod oracle;
pub mod quaternion;
pub mod transfer;

pub use error::{Error, Result};
pub use field::{Elem, Field};
