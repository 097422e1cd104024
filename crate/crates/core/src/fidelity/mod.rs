//! Average fidelity, optimal guessing and the upper bounds on local fidelity.

mod bounds;
mod povm;

pub use bounds::{
    bipartition_min_bound, entropy_bound_check, mes_bound, mixed_strategy_fidelity,
    schmidt_coeff_sep_bound, vidal_conversion_probability, BipartitionEntropy, EntropyReport,
};
pub use povm::{average_fidelity, global_optimum_orthonormal, optimal_guess, GuessStrategy, Povm};
