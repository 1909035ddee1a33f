pub mod bits;
pub mod classify;
pub mod cli;
pub mod construct;
pub mod decision;
pub mod error;
pub mod lab;
pub mod module;
pub mod ring;

pub use bits::Bits;
pub use decision::Decision;
pub use error::{Error, Result};
pub use module::{FiniteModule, ModuleHom, Submodule};
pub use ring::{FiniteRing, Ideal};
