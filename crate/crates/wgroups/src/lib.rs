//! Galois W-groups and V-groups of fields: finite 2-group constructions, modular
//! representations of elementary abelian 2-groups, group cohomology over GF(2),
//! quadratic-symbol models and local-field checks.

pub mod cohomres;
pub mod group2;
pub mod lhs;
pub mod modrep;
pub mod padic;
pub mod qsymbols;
pub mod suite;
