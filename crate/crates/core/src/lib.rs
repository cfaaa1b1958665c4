//! Kazhdan-Lusztig theory for arbitrary Coxeter systems.
//!
//! ```
//! use std::sync::Arc;
//! use kllab::coxeter::{CoxeterMatrix, GroupTable};
//! use kllab::hecke::KlTable;
//! use kllab::verify::scan_monotonicity_inverse;
//!
//! # fn main() -> kllab::Result<()> {
//! let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("A3")?, None)?);
//! let kl = KlTable::build(g.clone())?;
//! let y = g.parse_element("2")?;
//! let x = g.parse_element("2,1,3,2")?;
//! assert_eq!(kl.kl_poly(y, x).to_string(), "v + v^3");
//! assert!(scan_monotonicity_inverse(&kl)?.violations.is_empty());
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod parabolic;
mod triangular;
pub mod verify;

pub use error::{Error, Result};
