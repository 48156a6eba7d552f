//! Finite abelian groups in invariant-factor form and the homomorphisms
//! between them, all computed exactly through Smith normal form.

mod group;
mod hom;
mod present;
mod snf;
mod subgroup;

pub use group::{is_isomorphic, Elem, Elements, FinAbGroup};

pub use hom::{
    cokernel, cokernel_of_elements, direct_sum, hom_compose, image, kernel, quotient_by, AbHom,
    Cokernel, DirectSum,
};
pub(crate) use present::canonicalize;
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
pub use subgroup::{subgroup_structure, Subgroup};
