//! Bit-string reconstruction by brute-force search.
//!
//! A hidden bit string of length `m` is recovered through a sequence of
//! substring oracles. Oracle `i` covers the 1-based inclusive position
//! range `[a_i, b_i]` and accepts exactly one string `z_i` over that
//! range. The searcher keeps a partial string `y` over `{0, 1, ξ}` (ξ =
//! unknown), and for each oracle in turn enumerates every replacement of
//! the ξ positions inside `[a_i, b_i]` until the oracle accepts, then
//! writes `z_i` back into `y`. With `ℓ_i` unknown positions at the time
//! oracle `i` is queried, the enumeration space is `2^{ℓ_i}`, so the
//! total work depends strongly on the order the oracles are processed
//! in.
//!
//! Ordering the oracles is exactly the interval ordering problem: triplet
//! `(a, b, z)` maps to the half-open integer interval `[a, b+1)`, the
//! unknown-position count `ℓ_i` is the exposed length of that interval
//! under the same order, and total work is the sum objective with cost
//! `f(x) = 2^x`. [`plan_order`] exploits that to pick a good order.

use num::{BigUint, One, Zero};

use crate::costfn::{CostFunction, EvalMode};
use crate::error::{Error, Result};
use crate::interval::{validate_permutation, Instance, IntervalId};
use crate::solvers::{auto_solve, Objective, SolveReport};

/// One substring oracle: positions `a..=b` (1-based, inclusive) accept
/// exactly the bit string `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triplet {
    pub a: usize,
    pub b: usize,
    pub z: String,
}

impl Triplet {
    /// The accepted bit at absolute position `p` (must lie in `a..=b`).
    fn bit(&self, p: usize) -> bool {
        self.z.as_bytes()[p - self.a] == b'1'
    }
}

/// A reconstruction problem: bit count `m` plus the oracle triplets.
/// Triplets are identified by 1-based index, which is also the id of the
/// interval they map to under [`bsrp_to_intervals`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsrpInstance {
    m: usize,
    triplets: Vec<Triplet>,
}

impl BsrpInstance {
    /// Validates `1 <= a < b <= m` and that each `z` is a `{0,1}` string
    /// of length `b - a + 1`.
    pub fn new(m: usize, triplets: Vec<Triplet>) -> Result<Self> {
        for (idx, t) in triplets.iter().enumerate() {
            let label = idx + 1;
            if t.a < 1 || t.a >= t.b || t.b > m {
                return Err(Error::InvalidInstance(format!(
                    "triplet {label}: need 1 <= a < b <= m, got a={}, b={}, m={m}",
                    t.a, t.b
                )));
            }
            if t.z.len() != t.b - t.a + 1 {
                return Err(Error::InvalidInstance(format!(
                    "triplet {label}: z has length {}, expected {}",
                    t.z.len(),
                    t.b - t.a + 1
                )));
            }
            if !t.z.bytes().all(|c| c == b'0' || c == b'1') {
                return Err(Error::InvalidInstance(format!(
                    "triplet {label}: z must consist of 0s and 1s"
                )));
            }
        }
        Ok(BsrpInstance { m, triplets })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.triplets.len()
    }

    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }
}

/// Final state of a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Every oracle accepted; the full string (remaining unknowns set to
    /// 0).
    Reconstructed(String),
    /// This oracle rejected all `2^ℓ` candidates: an already-fixed bit
    /// contradicts its accepted string.
    Infeasible { triplet: IntervalId },
}

/// Work accounting for one search run. `order` is the requested
/// permutation; `ell` and `calls` cover the processed prefix only (on an
/// infeasible run they stop at the failing triplet, inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTrace {
    pub order: Vec<IntervalId>,
    pub ell: Vec<u32>,
    pub calls: Vec<BigUint>,
    pub outcome: SearchOutcome,
}

impl SearchTrace {
    /// Enumeration-space sizes `2^{ℓ_i}`, in processing order.
    pub fn spaces(&self) -> Vec<BigUint> {
        self.ell.iter().map(|&l| BigUint::one() << l as usize).collect()
    }

    /// `Σ 2^{ℓ_i}` over the processed triplets.
    pub fn total_space(&self) -> BigUint {
        self.spaces().into_iter().sum()
    }

    /// Total oracle calls actually issued.
    pub fn total_calls(&self) -> BigUint {
        self.calls.iter().sum()
    }
}

/// Runs the brute-force search, processing the oracles in `order`
/// (1-based triplet ids).
///
/// Candidates for the ξ positions are enumerated lexicographically with
/// the smallest position as the most significant bit, counting up from
/// all-zero; a triplet whose accepted string has bit `z_i` at the i-th
/// free position is therefore reached after `Σ_{z_i = 1} 2^{ℓ-i}`
/// rejections, and the call count is that rank plus one. When a fixed bit
/// of `y` contradicts the accepted string no candidate can succeed, so
/// the oracle is called on all `2^ℓ` candidates and the search stops as
/// infeasible.
pub fn brute_force_search(inst: &BsrpInstance, order: &[IntervalId]) -> Result<SearchTrace> {
    validate_permutation(inst.n(), order)?;
    let mut y: Vec<Option<bool>> = vec![None; inst.m];
    let mut ell = Vec::with_capacity(order.len());
    let mut calls = Vec::with_capacity(order.len());
    for &tid in order {
        let t = &inst.triplets[tid as usize - 1];
        let mut free = 0u32;
        let mut consistent = true;
        let mut rank = BigUint::zero();
        for p in t.a..=t.b {
            match y[p - 1] {
                None => {
                    free += 1;
                    rank = rank * 2u32 + u32::from(t.bit(p));
                }
                Some(bit) => consistent = consistent && bit == t.bit(p),
            }
        }
        ell.push(free);
        if !consistent {
            calls.push(BigUint::one() << free as usize);
            return Ok(SearchTrace {
                order: order.to_vec(),
                ell,
                calls,
                outcome: SearchOutcome::Infeasible { triplet: tid },
            });
        }
        calls.push(rank + 1u32);
        for p in t.a..=t.b {
            y[p - 1] = Some(t.bit(p));
        }
    }
    let s: String = y
        .iter()
        .map(|b| if *b == Some(true) { '1' } else { '0' })
        .collect();
    Ok(SearchTrace {
        order: order.to_vec(),
        ell,
        calls,
        outcome: SearchOutcome::Reconstructed(s),
    })
}

/// Maps each triplet `(a, b, ·)` to the half-open interval `[a, b+1)`
/// (covering bit positions `a..=b`), with cost `2^x` in exact mode.
/// Interval ids equal triplet ids.
pub fn bsrp_to_intervals(inst: &BsrpInstance) -> Result<Instance> {
    let spans: Vec<(i64, i64)> = inst
        .triplets
        .iter()
        .map(|t| (t.a as i64, t.b as i64 + 1))
        .collect();
    Instance::new(&spans, CostFunction::pow2(), EvalMode::Exact)
}

/// Picks a processing order for the oracles by solving the mapped
/// interval instance: the sum objective minimizes `Σ 2^{ℓ_i}`, the
/// bottleneck objective the largest single enumeration space. The
/// permutation is `report.result.order`.
pub fn plan_order(inst: &BsrpInstance, objective: Objective) -> Result<SolveReport> {
    let mapped = bsrp_to_intervals(inst)?;
    auto_solve(&mapped, objective)
}
