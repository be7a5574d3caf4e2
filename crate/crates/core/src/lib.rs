//! Cubic fields, their class groups and 2-Selmer groups, and the densities
//! predicted for them.

pub mod abelian;
pub mod arith;
pub mod classgroup;
mod dd;
pub mod densities;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod forms;
pub mod harness;
pub mod ideals;
pub mod lattice;
pub mod linalg;
pub mod numfield;
pub mod oracle;
pub mod ring;
pub mod selmer;
pub mod splitting;
pub mod units;

pub use error::{Error, Result};
pub use field::{CubicFieldRecord, Signature, SignatureFilter};
pub use forms::BinaryCubicForm;
