pub mod apn;
pub mod error;
pub mod factorcheck;
pub mod field;
pub mod mvpoly;
pub mod phi;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
pub use field::{EmbeddingMap, FieldElement, FieldSpec};
pub use mvpoly::MPoly;
pub use upoly::UPoly;
