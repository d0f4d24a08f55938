//! Two-weight and few-weight linear codes from quadratic-type defining sets
//! over odd-characteristic finite fields.

pub mod applications;
pub mod codes;
pub mod counts;
pub mod defining_sets;
pub mod dual;
pub mod error;
pub mod gf;
pub mod srg;

pub use error::{Error, Result};
