//! Integer linear algebra and finite abelian group presentations.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel_invariants, induced_hom, integer_kernel, solve_integer, FinAbGroup, GroupElem, Hom, Presentation,
    Quotient,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
