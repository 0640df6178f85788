pub mod algebra;
pub mod drinfeld;
pub mod error;
pub mod global_field;
pub mod heights;
pub mod lab;
pub mod minimality;
pub mod rational;

pub use error::{AlgebraError, Result};
