//! Tridiagonal systems: validation, the split decomposition, the four flags
//! and six decompositions, transition maps, parameters and block actions.

mod blocks;
mod catalog;
mod flags;
mod params;
mod system;
mod transfer;
mod transition;

pub use blocks::{
    expected_band, expected_flag_action, observed_band, Adapted, render_tetrahedron, tetrahedron_report,
    verify_block_tables, verify_sandwiches, Band, BandRow,
};
pub use catalog::{
    decomposition_catalog, flag_components, split_decomposition, v_ij, Decomp, DecompositionCatalog, Flag,
};
pub use flags::{flag_action, FlagAction};
pub use params::{tridiagonal_params, tridiagonal_relation_residuals, TridiagonalParams};
pub use system::{closure, validate_td_system, Ordering, TDSystem};
pub use transfer::{common_eigenspaces, restrict, transfer_basis, TransferOutcome, TransferRow, TransferTable};
pub use transition::{projections, split_transition, SplitTransition};

#[cfg(test)]
mod tests;
