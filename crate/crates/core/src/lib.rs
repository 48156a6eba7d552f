//! Obstructions to the Hasse norm principle and the multinorm principle for
//! abelian extensions of global fields, computed from decomposition-group data
//! as cokernels of exterior-square maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`abgroup`]: finite abelian groups, homomorphisms, Smith normal form.
//! * [`wedge`]: tensor and exterior squares and induced maps.
//! * [`grouptable`]: small nonabelian groups by multiplication table.
//! * [`obstruction`]: Tate–Shafarevich groups, towers, certificates.
//! * [`cyclotomic`]: abelian number fields as subfields of cyclotomic fields.
//! * [`sweep`]: exhaustive verification over small groups.

pub mod abgroup;
pub mod cyclotomic;
pub mod error;
pub mod grouptable;
pub mod obstruction;
pub mod sweep;
pub mod wedge;

pub use abgroup::{AbHom, Elem, FinAbGroup, IntMatrix, Subgroup};
pub use error::{Error, Result};
