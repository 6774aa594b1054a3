//! The Weyl algebra `C[z, d/dz]`, its rational extension, and the
//! automorphisms `Phi_p`, `Psi_q`, `phi` and anti-automorphisms `b`, `c`.

pub mod diffop;
pub mod endo;

pub use diffop::{op_apply, op_mul, DiffOperator};
pub use endo::{
    anti_b, anti_c, apply_endo, endo_check_relations, endo_check_relations_with, fourier,
    fourier_inverse, phi, psi, psi_by_substitution, EndoSpec, RelationReport,
};
