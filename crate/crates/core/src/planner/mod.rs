//! Feasibility checks and plan construction for target families.

pub mod checks;
pub mod construct;
pub mod search;

pub use checks::{
    check_prime_power_windows, check_subgroup_family, necessary_conditions,
    necessary_conditions_with, Check, PrimePowerPartition, Status, SubgroupFamily, SubgroupPair,
    SummandReading, Verdict,
};
pub use construct::{
    plan_free_bouquet, plan_free_spheres, plan_single_torsion, plan_two_torsion, truncate_top,
    PlanFailure, TwoDegreeCase,
};
pub use search::{candidate_carriers, plan_search};
