//! The symplectic group `Sp(2n; ℝ)` with `J = [[0, −I], [I, 0]]`, its
//! universal cover, translation and rotation numbers, the integer Euler
//! cocycle of the canonical section and its pullback along `k ↦ g^k`.

mod cover;
mod matrix;
mod rotation;
mod theorem;

pub use cover::{
    canonical_path, canonical_path_with, cover_multiply, sampled_winding, winding_defect, CoverElement,
    PathKind, PowerWinding, DEFAULT_PATH_SAMPLES, MAX_PATH_SAMPLES,
};
pub use matrix::{
    check_symplectic, det_circle, polar_parts, random_symplectic, standard_j, symplectic_deviation, unitary_part,
    PolarParts, SymplecticMatrix, UnitaryBlock, DEFAULT_SYMPLECTIC_TOL,
};
pub use rotation::{
    convergence_table_sp, eigenvalue_rotation_number, power_windings, rotation_number_sp, translation_estimate_sp, translation_number_sp,
    SpTranslationEstimate, DEFAULT_K_MAX, KREIN_TOL, SEMISIMPLE_COND_LIMIT,
};
pub use theorem::{
    canonical_section_sp, main_theorem_check, main_theorem_check_with, section_with, sigma_sp, sigma_sp_with,
    SectionPolicy, SigmaValue, TheoremOptions, TheoremReport, FLAG_FACTOR, SIGMA_RESIDUAL_LIMIT,
};
