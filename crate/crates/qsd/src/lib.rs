//! Optimal quantum measurements for discriminating two pure states.
//!
//! Everything here is a function of two numbers: the prior `π ∈ (0, 1/2]` of
//! the less likely state and the (real, nonnegative) overlap `c = ⟨s0|s1⟩`.
//! The toolkit covers:
//!
//! - POVMs on the 2D real span of the states and their induced outcome and
//!   posterior distributions ([`discrimination`]);
//! - admissible objective functions, the Bhattacharyya parameter
//!   `b(p) = √(p(1−p))`, and a numerical classifier for convexity relative to
//!   `b` ([`objectives`]);
//! - the binary Rényi entropy family and the polynomial machinery behind its
//!   relative-convexity ordering ([`renyi`]);
//! - closed-form optimal measurements: the minimum-error projection, the
//!   three-element unambiguous POVM, and the optimal expected objective for
//!   any convex- or concave-admissible criterion ([`optimal`]);
//! - a brute-force grid optimizer over small rank-1 POVM families, used as an
//!   independent ground truth for the closed forms ([`oracle`]);
//! - a discrete-time Monte-Carlo simulator of the Dolinar feedback receiver
//!   for coherent-state waveforms ([`dolinar`]).
//!
//! All types are immutable after construction and all operations are pure;
//! everything is safe to call concurrently. Monte-Carlo runs use per-trial
//! counter-based RNG substreams, so results do not depend on thread count or
//! scheduling.

pub mod discrimination;
pub mod dolinar;
pub mod objectives;
pub mod optimal;
pub mod oracle;
pub mod renyi;

pub use discrimination::{
    expected_objective, is_eligible, outcome_distribution, state_vectors, DiscriminationProblem,
    OutcomeDistribution, Povm, PovmElement,
};
pub use objectives::{bhattacharyya, builtin_objective, classify, ConvexityClass, ObjectiveFn};
pub use optimal::{helstrom, min_error_projection, theorem_pure_value, unambiguous_povm};
