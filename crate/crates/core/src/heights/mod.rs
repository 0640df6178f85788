mod canonical;
mod green;
mod interval;
pub mod orbit;

pub use canonical::{
    annihilator, canonical_height, canonical_height_at, canonical_height_decomposed, canonical_height_local,
    count_bounded_height, h_phi, is_torsion, iterations_for, relevant_places, torsion_submodule, zimmer_bounds,
    LocalDecomposition, ZimmerBounds, GLOBAL_MAX_DEGREE,
};
pub use green::{
    green_from_orbit, green_local, is_t_generic, lambda_local, local_constants, LocalConstants, DEFAULT_N_MAX,
    LOCAL_MAX_DEGREE,
};
pub use interval::{GreenResult, HeightInterval};
