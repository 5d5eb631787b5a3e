//! The unitary group, its subgroups, orbits and abelian characters.

pub mod chars;
pub mod orbits;
pub mod quotient;
pub mod subgroup;
pub mod table;

pub use chars::{FiniteAbelian, RootRule};
pub use orbits::{orbits, transversal_orbits, OrbitDomain, OrbitReport};
pub use quotient::{reduction_map, QuotientData};
pub use subgroup::{
    alpha_char, b_subgroup, c_subgroup, congruence_subgroup, rho_generator, scalar_subgroup, stabilizer_of_char,
    LinearChar, Subgroup,
};
pub use table::{GroupTable, DEFAULT_CAP};
