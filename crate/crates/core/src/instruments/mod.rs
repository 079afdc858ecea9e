//! Planted-instance generators, parameter-threshold and
//! information-theoretic bound calculators, and the coprimality experiment.

pub mod bounds;
pub mod gen;

pub use bounds::{
    ceil_log2_rational, floor_log2_rational, jirss_condition_value, n_threshold_elo,
    n_threshold_lbr, n_threshold_mirr, n_window_cor2, pow2_rational, rational_to_prec,
    sigma0_optimal, sigma_info_bound, BoundsError, BoundsQuery, Cor2Window, LbrThreshold,
};
pub use gen::{
    as_mixed_ira, coprime_fraction_experiment, gen_instance, generated_from_json, generated_to_json,
    phase_instance_from_json, phase_instance_to_json, policy_for_instance, policy_for_phase,
    solve_generated, subsetsum_instance_from_json, subsetsum_instance_to_json, verify_planted,
    DistributionSpec, GenParams, GeneratedInstance, InstanceKind, PhaseInstance, PhaseX,
    SolveOutcome, SubsetKind,
    SubsetSumGenInstance,
};
