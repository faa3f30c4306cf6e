//! Information quantities of the ERRW: entropy rates, mutual information,
//! trajectory KL and the posterior gap, inverse local-time rates on stars,
//! tail constants and decay bounds on general graphs.

mod entropy;
mod gap;
mod law;
mod nstar;
mod rates;
mod tails;

pub use entropy::{
    composition_count, dirichlet_entropy, entropy_rate_mc, entropy_rate_upper, mi_nstar_exact, mi_upper_bound,
    mutual_information_exact, Estimate, MutualInformation, COMPOSITION_BUDGET,
};
pub use gap::{gap_bracket, gap_formula_mc, gap_integral, gap_upper, inverse_local_time_mc, run_trials, GapMc};
pub use law::{
    count_walks, enumerate_paths, gap_exact, trajectory_kl_exact, GapMethod, GapReport, LawEntry, TrajectoryLaw,
    PATH_BUDGET,
};
pub use nstar::{
    nstar_gap_exact, nstar_inverse_exact, nstar_inverse_quadrature, nstar_inverse_steps, nstar_urn_mc,
    star_beta_parameters, urn_draws, StarGap,
};
pub use rates::{rate_fit, RateFit};
pub use tails::{
    edge_tail_constants, inverse_bound_eval, refined_threshold, tail_constants, BoundVariant, Epsilons,
    RefinedSchedule, TailConstants, ThresholdedSchedule,
};
