//! Primary decomposable subspaces of `C[z]`, the adelic Grassmannian and the
//! spaces of differential operators between its points.

mod baker_link;
mod duality;
mod emap;
mod opspace;
mod pd;

pub use baker_link::{baker_from_gr, gr_from_baker};
pub use duality::{c_action_check, dual, residue_pair};
pub use emap::{e_map, pd_from_span};
pub use opspace::{
    alpha_slice, duv_contains, duv_solve, gr_duv, lw_denominator, lw_slice, op_coordinates,
    op_rank, solve_ansatz, solve_ansatz_gr, span_equal, IdealSlice,
};
pub use pd::{class_equal, gr_canonical, gr_equal, jet, GrPoint, LocalCondition, PrimaryDecomposable};
