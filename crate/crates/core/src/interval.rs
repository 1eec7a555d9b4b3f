//! Half-open intervals, coverage bookkeeping, and ordering evaluation.
//!
//! All geometry is integer "ticks". An [`Instance`] additionally carries a
//! `scale` (ticks per unit length) so endpoint rationals like 15/4 can be
//! represented exactly; cost functions are always evaluated on the unscaled
//! length `ticks / scale`.

use std::collections::HashMap;

use crate::costfn::{evaluate_scaled, CostFunction, CostValue, EvalMode};
use crate::error::{Error, Result};

/// 1-based interval identifier, stable across an instance's lifetime.
pub type IntervalId = u32;

/// The half-open interval `[a, b)` in ticks. `a == b` is the empty interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub a: i64,
    pub b: i64,
    pub id: IntervalId,
}

impl Interval {
    pub fn new(a: i64, b: i64, id: IntervalId) -> Self {
        debug_assert!(a <= b);
        Interval { a, b, id }
    }

    pub fn len(&self) -> i64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }

    /// True when the two intervals share at least one point.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.a.max(other.a) < self.b.min(other.b)
    }

    /// True when `self` contains `other` (non-strictly).
    pub fn contains(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// A problem instance: intervals with ids 1..=n, a cost function, and an
/// arithmetic mode.
#[derive(Clone, Debug)]
pub struct Instance {
    intervals: Vec<Interval>,
    pub cost: CostFunction,
    pub mode: EvalMode,
    /// Ticks per unit length; endpoints in ticks represent `t / scale`.
    pub scale: i64,
}

impl Instance {
    /// Builds an instance from `(a, b)` endpoint pairs with scale 1.
    pub fn new(endpoints: &[(i64, i64)], cost: CostFunction, mode: EvalMode) -> Result<Self> {
        Self::with_scale(endpoints, cost, mode, 1)
    }

    /// Builds an instance whose tick endpoints represent `t / scale`.
    pub fn with_scale(
        endpoints: &[(i64, i64)],
        cost: CostFunction,
        mode: EvalMode,
        scale: i64,
    ) -> Result<Self> {
        if scale < 1 {
            return Err(Error::InvalidInstance(format!("scale must be >= 1, got {scale}")));
        }
        if endpoints.len() > u32::MAX as usize {
            return Err(Error::InvalidInstance("too many intervals".into()));
        }
        if mode == EvalMode::Exact && !cost.exact_evaluable() {
            return Err(Error::Mode(
                "exact mode requires a cost function with exact values on integer lengths".into(),
            ));
        }
        let intervals = endpoints
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                if a > b {
                    return Err(Error::InvalidInstance(format!(
                        "interval {} has b < a ({b} < {a})",
                        i + 1
                    )));
                }
                Ok(Interval::new(a, b, (i + 1) as IntervalId))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            intervals,
            cost,
            mode,
            scale,
        })
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// The interval with the given 1-based id.
    pub fn interval(&self, id: IntervalId) -> &Interval {
        &self.intervals[(id - 1) as usize]
    }

    /// f(ticks / scale) in this instance's mode.
    pub fn eval_cost(&self, ticks: i64) -> Result<CostValue> {
        evaluate_scaled(&self.cost, ticks, self.scale, self.mode)
    }
}

/// A union of already-placed intervals, kept as sorted, disjoint,
/// non-adjacent pieces with prefix sums for O(log n) measure queries.
#[derive(Clone, Debug, Default)]
pub struct CoveredSet {
    /// Disjoint pieces `(a, b)` sorted by `a`; consecutive pieces satisfy
    /// `prev.1 < next.0` (touching pieces are merged on insert).
    pieces: Vec<(i64, i64)>,
    /// `prefix[i]` = total length of `pieces[..=i]`.
    prefix: Vec<i64>,
}

impl CoveredSet {
    pub fn new() -> Self {
        CoveredSet::default()
    }

    pub fn pieces(&self) -> &[(i64, i64)] {
        &self.pieces
    }

    /// Adds `[a, b)`, merging any overlapping or touching pieces.
    pub fn insert(&mut self, a: i64, b: i64) {
        if a >= b {
            return;
        }
        // Pieces with piece.1 >= a up to piece.0 <= b merge with [a, b).
        let lo = self.pieces.partition_point(|p| p.1 < a);
        let hi = self.pieces.partition_point(|p| p.0 <= b);
        let merged = if lo < hi {
            (self.pieces[lo].0.min(a), self.pieces[hi - 1].1.max(b))
        } else {
            (a, b)
        };
        self.pieces.splice(lo..hi, [merged]);
        self.prefix.truncate(lo);
        for i in lo..self.pieces.len() {
            let prev = if i == 0 { 0 } else { self.prefix[i - 1] };
            self.prefix.push(prev + (self.pieces[i].1 - self.pieces[i].0));
        }
    }

    /// Total covered length.
    pub fn measure(&self) -> i64 {
        self.prefix.last().copied().unwrap_or(0)
    }

    /// Length of the covered part of `[a, b)`.
    pub fn intersection_measure(&self, a: i64, b: i64) -> i64 {
        if a >= b {
            return 0;
        }
        let lo = self.pieces.partition_point(|p| p.1 <= a);
        let hi = self.pieces.partition_point(|p| p.0 < b);
        if lo >= hi {
            return 0;
        }
        let full: i64 =
            self.prefix[hi - 1] - if lo == 0 { 0 } else { self.prefix[lo - 1] };
        let clip_left = (a - self.pieces[lo].0).max(0);
        let clip_right = (self.pieces[hi - 1].1 - b).max(0);
        full - clip_left - clip_right
    }
}

/// Length of the part of `iv` not yet covered.
pub fn exposed_length(iv: &Interval, covered: &CoveredSet) -> i64 {
    iv.len() - covered.intersection_measure(iv.a, iv.b)
}

/// Measure of the union of the given intervals.
pub fn union_measure(intervals: &[Interval]) -> i64 {
    let mut covered = CoveredSet::new();
    for iv in intervals {
        covered.insert(iv.a, iv.b);
    }
    covered.measure()
}

/// One evaluated ordering: the permutation, the exposed length of each step,
/// and both objective values.
#[derive(Clone, Debug)]
pub struct OrderingResult {
    pub order: Vec<IntervalId>,
    /// Exposed length in ticks of `order[k]` at placement time.
    pub exposed: Vec<i64>,
    pub sum_cost: CostValue,
    pub bottleneck_cost: CostValue,
}

/// Checks that `order` is a permutation of 1..=n.
pub(crate) fn validate_permutation(n: usize, order: &[IntervalId]) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidInstance(format!(
            "ordering has {} entries for {n} intervals",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &id in order {
        let idx = id
            .checked_sub(1)
            .map(|i| i as usize)
            .filter(|&i| i < n)
            .ok_or_else(|| Error::InvalidInstance(format!("id {id} out of range")))?;
        if seen[idx] {
            return Err(Error::InvalidInstance(format!("id {id} appears twice")));
        }
        seen[idx] = true;
    }
    Ok(())
}

/// Folds per-step exposed lengths into an [`OrderingResult`], evaluating the
/// cost function once per distinct length.
pub(crate) fn finalize_ordering(
    inst: &Instance,
    order: Vec<IntervalId>,
    exposed: Vec<i64>,
) -> Result<OrderingResult> {
    let mut cache: HashMap<i64, CostValue> = HashMap::new();
    let mut sum = CostValue::zero(inst.mode);
    let mut bottleneck: Option<CostValue> = None;
    for &e in &exposed {
        let v = match cache.get(&e) {
            Some(v) => v.clone(),
            None => {
                let v = inst.eval_cost(e)?;
                cache.insert(e, v.clone());
                v
            }
        };
        sum = sum.add(&v);
        bottleneck = Some(match bottleneck {
            None => v,
            Some(cur) => cur.max(v),
        });
    }
    Ok(OrderingResult {
        order,
        exposed,
        sum_cost: sum,
        bottleneck_cost: bottleneck.unwrap_or_else(|| CostValue::zero(inst.mode)),
    })
}

/// Places intervals in the given order and prices each one's exposed part.
///
/// `order` must be a permutation of the instance's ids. The empty instance
/// evaluates to zero under both objectives.
pub fn evaluate_ordering(inst: &Instance, order: &[IntervalId]) -> Result<OrderingResult> {
    validate_permutation(inst.n(), order)?;
    let mut covered = CoveredSet::new();
    let mut exposed = Vec::with_capacity(order.len());
    for &id in order {
        let iv = inst.interval(id);
        exposed.push(exposed_length(iv, &covered));
        covered.insert(iv.a, iv.b);
    }
    finalize_ordering(inst, order.to_vec(), exposed)
}
