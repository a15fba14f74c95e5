//! Desk-scale attacks and cost estimators: the polynomial-gcd break of the
//! swap-neighbors chain, the fixed-base precomputation bypass, the
//! reduction-schedule cost model, and an exact classical simulation of the
//! quantum discrete-log experiment with its lattice post-processing.

mod cost;
mod ekera;
mod gcd;
mod lattice;
mod poly;
mod precompute;

pub use cost::{optimal_reduction_interval, reduction_schedule_cost};
pub use ekera::{
    center, ekera_distribution, ekera_postprocess, ekera_postprocess_raw, ekera_simulate, ekera_trial,
    multiplicative_order, EkeraDistribution, EkeraInstance, EkeraSampler, EkeraTrial, MAX_EKERA_PRIME,
    MAX_EKERA_STATE_BITS,
};
pub use gcd::{
    gcd_attack_swap_neighbors, gcd_attack_sweep, swap_neighbors_chain2, swap_neighbors_u64, GcdSweep, MAX_GCD_PRIME,
};
pub use lattice::{babai_cvp, lll_delta, round_half_up, GramSchmidt, LatticeBasis, MAX_LATTICE_DIM};
pub use poly::{PolyModP, MAX_POLY_MODULUS};
pub use precompute::{
    brute_force_dlog, expected_exponent_bits, fixed_base_attack_demo, fixed_base_table_bits,
    fixed_base_table_megabytes, is_safe_prime_generator, mean_exponent_bits, FixedBaseRecovery,
    MAX_BRUTE_FORCE_MODULUS,
};
