//! Exact and structure-aware solvers for the interval ordering problem.
//!
//! Given half-open intervals `[a, b)` on the line and a cost function
//! `f`, an ordering pays `f(exposed)` for each interval, where the
//! exposed part is whatever the earlier intervals have not already
//! covered. The library minimizes the total or the maximum step cost:
//!
//! - [`solvers::auto_solve`] detects structure and dispatches: a
//!   length-sort for laminar families, an O(n²) chain DP for agreeable
//!   families with convex costs, an O(n³) window DP for agreeable
//!   families with arbitrary costs, an exact greedy for bottleneck
//!   objectives with monotone costs, a subset DP oracle for small
//!   unstructured instances, and a greedy heuristic beyond that.
//! - [`interval::evaluate_ordering`] scores any ordering; exact mode
//!   keeps every cost a [`num::BigRational`].
//! - [`generators`] builds reproducible families, including worst cases
//!   for the sum greedy and the reduction gadgets that make the general
//!   problem NP-hard.
//! - [`bsrp`] models the motivating application: ordering substring
//!   oracles to reconstruct a hidden bit string with minimal brute-force
//!   work, which is this problem with `f(x) = 2^x`.
//!
//! ```
//! use interval_ordering::{auto_solve, CostFunction, EvalMode, Instance, Objective};
//!
//! let inst = Instance::new(
//!     &[(0, 1), (1, 2), (2, 3), (3, 6), (0, 5)],
//!     CostFunction::pow2(),
//!     EvalMode::Exact,
//! )?;
//! let report = auto_solve(&inst, Objective::Sum)?;
//! assert_eq!(report.result.sum_cost.to_canonical_string(), "12");
//! # Ok::<(), interval_ordering::Error>(())
//! ```

pub mod bsrp;
pub mod costfn;
pub mod error;
pub mod format;
pub mod generators;
pub mod interval;
pub mod solvers;
pub mod structure;

pub use costfn::{CostFunction, CostKind, CostValue, EvalMode};
pub use error::{Error, Result};
pub use interval::{evaluate_ordering, Instance, Interval, IntervalId, OrderingResult};
pub use solvers::{auto_solve, Algorithm, Objective, Optimality, SolveReport};
