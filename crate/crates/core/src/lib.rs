//! Homology of Reeb spaces of fold maps, built by bubbling operations.

pub mod bubbling;
pub mod catalog;
pub mod chain;
pub mod document;
pub mod error;
pub mod group;
pub mod manifold;
pub mod matrix;
pub mod planner;
pub mod snf;
pub mod subgroups;
pub mod target;

pub use bubbling::{
    apply_op, apply_plan, delta_family, initial_disc_state, BubblingOp, Ledger, OpKind, Plan,
    ReebState,
};
pub use catalog::Catalog;
pub use chain::{Builtin, ChainComplex};
pub use document::PlanDocument;
pub use error::Error;
pub use group::{canonicalize, FGAbelianGroup, PrimePower};
pub use manifold::{Bouquet, ManifoldProfile, ManifoldSpec};
pub use matrix::IntMatrix;
pub use planner::{PlanFailure, Status, Verdict};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use subgroups::{count_subgroups_isomorphic_to, SubgroupCount};
pub use target::TargetFamily;
