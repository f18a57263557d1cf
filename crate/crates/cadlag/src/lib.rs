//! Toolkit for cadlag paths with finitely many breakpoints: oscillation
//! moduli, a weak-dual path metric, renewal and martingale scenario
//! simulators, and Monte Carlo convergence probes.

pub mod error;
pub mod hermite;
pub mod l2w;
pub mod modulus;
pub mod path;
pub mod point;
pub mod probe;
pub mod quad;
pub mod rng;
pub mod selftest;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use hermite::{hermite, hermite_antiderivative, hermite_sup};
pub use l2w::{l2w_distance, weak_inner, L2wTruncation};
pub use modulus::{
    grid_increment_max, jump_bound_check, modulus_table_csv, oscillation_modulus,
    oscillation_modulus_refined, triple_distance, ModulusKind, ModulusRow, ModulusValue,
};
pub use path::{combine, compose, inverse, CadlagPath, Mode, MonotonePath, PathDoc};
pub use point::Point;
pub use probe::{
    compensator_probe, fdd_probe, ks_one_sample_band, ks_two_sample_band, l2w_probe,
    lenglart_check, lenglart_pairs, occupation_probe, sigma_tilde_probe, sigma_tilde_sample,
    tightness_table, FddTarget, ProbeCell, ProbeReport, KS_CAUCHY,
};
pub use rng::substream;
pub use selftest::{run_selftests, SelfCheck};
pub use sim::{
    brownian_path, chain_martingale_path, compensator_path, cv_quadrature, occupation_path,
    occupation_values, renewal_path, scaled_renewal_path, scenario_triplet, solve_poisson,
    ChainSpec, CvMethod, InterarrivalDist, PoissonSolution, PreparedChain, RadialPotential,
    ScenarioConfig, ScenarioEngine, ScenarioKind,
};
pub use stats::EmpiricalDistribution;
