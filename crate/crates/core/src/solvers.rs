//! Ordering algorithms: exact subset-DP oracles for both objectives, the
//! cubic window DP for agreeable families, the quadratic chain DP for
//! agreeable families under convex costs, the length-sort rule for laminar
//! families, the exposed-part greedy, and an automatic dispatcher.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num::{BigRational, Zero};

use crate::costfn::{CostValue, EvalMode};
use crate::error::{Error, Result};
use crate::interval::{
    evaluate_ordering, exposed_length, finalize_ordering, CoveredSet, Instance, IntervalId,
    OrderingResult,
};
use crate::structure::{
    detect_agreeable, detect_laminar, require_agreeable, require_laminar, split_components,
    to_global_order, Laminarity,
};

/// Default subset-DP size cap in float mode (~32 MiB of table per solve).
pub const ORACLE_CAP_FLOAT: usize = 22;
/// Default subset-DP size cap in exact mode (arbitrary-precision entries).
pub const ORACLE_CAP_EXACT: usize = 18;
/// Ceiling that even explicit cap overrides cannot exceed; the union table
/// alone is 2^n u64 entries (128 MiB at 24).
pub const ORACLE_CAP_HARD: usize = 24;

pub fn default_oracle_cap(mode: EvalMode) -> usize {
    match mode {
        EvalMode::Float => ORACLE_CAP_FLOAT,
        EvalMode::Exact => ORACLE_CAP_EXACT,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Sum,
    Bottleneck,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Sum => "sum",
            Objective::Bottleneck => "bottleneck",
        })
    }
}

/// Whether the returned ordering is provably optimal for the reported
/// objective, or merely the greedy's best effort.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Optimality {
    ExactOptimal,
    Heuristic,
}

impl Optimality {
    pub fn name(&self) -> &'static str {
        match self {
            Optimality::ExactOptimal => "EXACT_OPTIMAL",
            Optimality::Heuristic => "HEURISTIC",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Oracle,
    AgreeableDp,
    AgreeableConvexDp,
    LaminarSort,
    Greedy,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::AgreeableDp => "agreeable-dp",
            Algorithm::AgreeableConvexDp => "agreeable-convex-dp",
            Algorithm::LaminarSort => "laminar-sort",
            Algorithm::Greedy => "greedy",
        }
    }
}

/// What the structure detectors found on the instance that was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureEvidence {
    pub agreeable: bool,
    pub laminar: bool,
    pub components: usize,
}

/// Outcome of one solve: the ordering with its evaluated costs, which
/// algorithm produced it, the optimality claim, and detector evidence.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub status: Optimality,
    pub result: OrderingResult,
    pub evidence: StructureEvidence,
    pub wall: Duration,
}

fn gather_evidence(inst: &Instance) -> StructureEvidence {
    StructureEvidence {
        agreeable: detect_agreeable(inst).is_some(),
        laminar: matches!(detect_laminar(inst), Laminarity::Forest(_)),
        components: split_components(inst).len(),
    }
}

fn finish(
    inst: &Instance,
    algorithm: Algorithm,
    objective: Objective,
    status: Optimality,
    result: OrderingResult,
    started: Instant,
) -> SolveReport {
    SolveReport {
        algorithm,
        objective,
        status,
        result,
        evidence: gather_evidence(inst),
        wall: started.elapsed(),
    }
}

// ---------------------------------------------------------------------------
// Subset-DP oracle
// ---------------------------------------------------------------------------

/// Coordinate-compresses the family into atoms (maximal segments not
/// containing any endpoint) and returns each interval's atom bitmask plus the
/// atom lengths. At most 2n-1 atoms exist, so masks fit u64 for n <= 24.
fn atom_masks(inst: &Instance) -> (Vec<u64>, Vec<i64>) {
    let mut coords: Vec<i64> = inst
        .intervals()
        .iter()
        .filter(|iv| !iv.is_empty())
        .flat_map(|iv| [iv.a, iv.b])
        .collect();
    coords.sort_unstable();
    coords.dedup();
    let atom_len: Vec<i64> = coords.windows(2).map(|w| w[1] - w[0]).collect();
    debug_assert!(atom_len.len() <= 64);
    let masks = inst
        .intervals()
        .iter()
        .map(|iv| {
            if iv.is_empty() {
                return 0u64;
            }
            let lo = coords.binary_search(&iv.a).expect("endpoint is a coord");
            let hi = coords.binary_search(&iv.b).expect("endpoint is a coord");
            ((1u64 << hi) - 1) ^ ((1u64 << lo) - 1)
        })
        .collect();
    (masks, atom_len)
}

/// Exact optimization over all n! orderings in O(2^n * n) by the observation
/// that an interval's exposed part depends only on the *set* of predecessors:
/// best[S] = min over j in S of combine(best[S \ {j}], f(exposed of j w.r.t.
/// S \ {j})). Ties keep the smallest last-placed id, making the reconstructed
/// permutation deterministic.
fn subset_dp<T: Clone + PartialOrd>(
    masks: &[u64],
    atom_len: &[i64],
    neutral: T,
    combine: impl Fn(&T, &T) -> T,
    mut eval: impl FnMut(i64) -> Result<T>,
) -> Result<Vec<IntervalId>> {
    let n = masks.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let full: usize = (1usize << n) - 1;
    let mut union_mask: Vec<u64> = vec![0; full + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        union_mask[s] = union_mask[s & (s - 1)] | masks[low];
    }
    let mut best: Vec<T> = Vec::with_capacity(full + 1);
    best.push(neutral);
    let mut choice: Vec<u8> = vec![0; full + 1];
    let mut fcache: HashMap<i64, T> = HashMap::new();
    #[allow(clippy::needless_range_loop)] // s is the subset mask, not just an index
    for s in 1..=full {
        let mut cur: Option<T> = None;
        let mut pick = 0u8;
        let mut bits = s;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1usize << j);
            let mut ticks = 0i64;
            let mut m = masks[j] & !union_mask[prev];
            while m != 0 {
                ticks += atom_len[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            let fv = match fcache.get(&ticks) {
                Some(v) => v.clone(),
                None => {
                    let v = eval(ticks)?;
                    fcache.insert(ticks, v.clone());
                    v
                }
            };
            let cand = combine(&best[prev], &fv);
            if cur.as_ref().is_none_or(|c| cand < *c) {
                cur = Some(cand);
                pick = j as u8;
            }
        }
        best.push(cur.expect("non-empty subset has a candidate"));
        choice[s] = pick;
    }

    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let j = choice[s] as usize;
        order.push((j + 1) as IntervalId);
        s &= !(1usize << j);
    }
    order.reverse();
    Ok(order)
}

fn float_of(v: CostValue) -> f64 {
    match v {
        CostValue::Float(x) => x,
        CostValue::Exact(_) => unreachable!("float-mode instance produced an exact value"),
    }
}

fn rational_of(v: CostValue) -> BigRational {
    match v {
        CostValue::Exact(r) => r,
        CostValue::Float(_) => unreachable!("exact-mode instance produced a float value"),
    }
}

fn effective_cap(mode: EvalMode, cap: Option<usize>) -> usize {
    cap.unwrap_or_else(|| default_oracle_cap(mode)).min(ORACLE_CAP_HARD)
}

fn oracle_order(inst: &Instance, objective: Objective, cap: Option<usize>) -> Result<Vec<IntervalId>> {
    let cap = effective_cap(inst.mode, cap);
    if inst.n() > cap {
        return Err(Error::TooLarge { n: inst.n(), cap });
    }
    let (masks, atom_len) = atom_masks(inst);
    match (objective, inst.mode) {
        (Objective::Sum, EvalMode::Float) => subset_dp(
            &masks,
            &atom_len,
            0.0f64,
            |a, b| a + b,
            |t| inst.eval_cost(t).map(float_of),
        ),
        (Objective::Sum, EvalMode::Exact) => subset_dp(
            &masks,
            &atom_len,
            BigRational::zero(),
            |a, b| a + b,
            |t| inst.eval_cost(t).map(rational_of),
        ),
        (Objective::Bottleneck, EvalMode::Float) => subset_dp(
            &masks,
            &atom_len,
            f64::NEG_INFINITY,
            |a, b| if a >= b { *a } else { *b },
            |t| inst.eval_cost(t).map(float_of),
        ),
        (Objective::Bottleneck, EvalMode::Exact) => subset_dp(
            &masks,
            &atom_len,
            None::<BigRational>,
            |a, b| if a >= b { a.clone() } else { b.clone() },
            |t| inst.eval_cost(t).map(|v| Some(rational_of(v))),
        ),
    }
}

/// Exact minimum total cost by subset DP. Exponential: refuses instances
/// larger than the cap (mode default or the explicit override).
pub fn oracle_sum(inst: &Instance) -> Result<SolveReport> {
    oracle_sum_with_cap(inst, None)
}

pub fn oracle_sum_with_cap(inst: &Instance, cap: Option<usize>) -> Result<SolveReport> {
    let t0 = Instant::now();
    let order = oracle_order(inst, Objective::Sum, cap)?;
    let result = evaluate_ordering(inst, &order)?;
    Ok(finish(inst, Algorithm::Oracle, Objective::Sum, Optimality::ExactOptimal, result, t0))
}

/// Exact minimum of the worst per-step cost by the same subset DP with max
/// in place of sum.
pub fn oracle_bottleneck(inst: &Instance) -> Result<SolveReport> {
    oracle_bottleneck_with_cap(inst, None)
}

pub fn oracle_bottleneck_with_cap(inst: &Instance, cap: Option<usize>) -> Result<SolveReport> {
    let t0 = Instant::now();
    let order = oracle_order(inst, Objective::Bottleneck, cap)?;
    let result = evaluate_ordering(inst, &order)?;
    Ok(finish(
        inst,
        Algorithm::Oracle,
        Objective::Bottleneck,
        Optimality::ExactOptimal,
        result,
        t0,
    ))
}

// ---------------------------------------------------------------------------
// Cubic window DP for agreeable families (any cost function)
// ---------------------------------------------------------------------------

/// Window table for the cubic total-cost recursion on one agreeable family
/// listed in endpoint order with positions 1..=m and sentinels 0 and m+1.
///
/// `cost(i, k)` is the optimal total cost of placing the intervals strictly
/// between positions i and k, given that everything left of position i's
/// right endpoint and right of position k's left endpoint is already
/// covered; `cost(i, i+1) = 0`. `choice(i, k)` is the position placed first
/// inside the window.
pub struct SubinstanceTable {
    m: usize,
    cost: Vec<Option<CostValue>>,
    choice: Vec<u32>,
}

impl SubinstanceTable {
    fn idx(&self, i: usize, k: usize) -> usize {
        i * (self.m + 2) + k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Optimal cost of the open window (i, k); defined for i < k.
    pub fn cost(&self, i: usize, k: usize) -> &CostValue {
        self.cost[self.idx(i, k)]
            .as_ref()
            .expect("cost queried outside the filled i < k triangle")
    }

    /// First-placed position inside window (i, k); None for empty windows.
    pub fn choice(&self, i: usize, k: usize) -> Option<usize> {
        let j = self.choice[self.idx(i, k)];
        (j != 0).then_some(j as usize)
    }
}

/// Fills the window table for one agreeable family.
///
/// The first interval placed in window (i, k) exposes exactly its part
/// inside [b_i, a_k): everything left of b_i and right of a_k is covered by
/// the already-placed surroundings, and agreeability keeps the two sides of
/// the split from affecting each other's exposures.
fn fill_window_table(inst: &Instance, gamma: &[IntervalId]) -> Result<SubinstanceTable> {
    let m = gamma.len();
    let a: Vec<i64> = gamma.iter().map(|&id| inst.interval(id).a).collect();
    let b: Vec<i64> = gamma.iter().map(|&id| inst.interval(id).b).collect();
    // Sentinel boundaries: nothing lies left of the smallest left endpoint or
    // right of the largest right endpoint.
    let left_of = |i: usize| if i == 0 { a[0] } else { b[i - 1] };
    let right_of = |k: usize| if k == m + 1 { b[m - 1] } else { a[k - 1] };

    let mut table = SubinstanceTable {
        m,
        cost: vec![None; (m + 2) * (m + 2)],
        choice: vec![0; (m + 2) * (m + 2)],
    };
    let zero = CostValue::zero(inst.mode);
    for i in 0..=m {
        let at = table.idx(i, i + 1);
        table.cost[at] = Some(zero.clone());
    }
    let mut fcache: HashMap<i64, CostValue> = HashMap::new();
    for width in 2..=m + 1 {
        for i in 0..=(m + 1 - width) {
            let k = i + width;
            let mut best: Option<(CostValue, usize)> = None;
            for j in i + 1..k {
                let lo = a[j - 1].max(left_of(i));
                let hi = b[j - 1].min(right_of(k));
                let ticks = (hi - lo).max(0);
                let fv = match fcache.get(&ticks) {
                    Some(v) => v.clone(),
                    None => {
                        let v = inst.eval_cost(ticks)?;
                        fcache.insert(ticks, v.clone());
                        v
                    }
                };
                let cand = table.cost(i, j).add(&fv).add(table.cost(j, k));
                if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                    best = Some((cand, j));
                }
            }
            let (cost, j) = best.expect("window of width >= 2 has a candidate");
            let at = table.idx(i, k);
            table.cost[at] = Some(cost);
            table.choice[at] = j as u32;
        }
    }
    Ok(table)
}

fn window_order(table: &SubinstanceTable, gamma: &[IntervalId]) -> Vec<IntervalId> {
    let mut order = Vec::with_capacity(gamma.len());
    // Preorder: the first-placed position, then the left window, then the
    // right window.
    let mut stack = vec![(0usize, gamma.len() + 1)];
    while let Some((i, k)) = stack.pop() {
        if let Some(j) = table.choice(i, k) {
            order.push(gamma[j - 1]);
            // Left window is placed before the right one; push right first.
            stack.push((j, k));
            stack.push((i, j));
        }
    }
    order
}

/// Exact total-cost solver for agreeable families under any cost function,
/// O(n³) window DP.
pub fn solve_agreeable(inst: &Instance) -> Result<SolveReport> {
    let t0 = Instant::now();
    let gamma = require_agreeable(inst)?.gamma;
    let order = if gamma.is_empty() {
        Vec::new()
    } else {
        let table = fill_window_table(inst, &gamma)?;
        window_order(&table, &gamma)
    };
    let result = evaluate_ordering(inst, &order)?;
    Ok(finish(inst, Algorithm::AgreeableDp, Objective::Sum, Optimality::ExactOptimal, result, t0))
}

// ---------------------------------------------------------------------------
// Quadratic chain DP for agreeable families under convex costs
// ---------------------------------------------------------------------------

/// Exact total-cost solver for agreeable families whose cost function is
/// declared convex, O(n²) per overlap component.
///
/// Optimal orderings can be normalized into consecutive index blocks placed
/// right-to-left, each block swept left-to-right. The chain value C_k (best
/// cost of positions k.. placed before positions ..k-1) is the minimum of:
///  (a) one terminal block k..: f(len_k) plus the suffix sum of
///      f(b_i - b_{i-1});
///  (b) a singleton block {k}: f(a_{k+1} - a_k) + C_{k+1};
///  (c) a block k..j-1 for each later j whose interval starts past b_k:
///      f(len_k) + the f(b_i - b_{i-1}) run up to the last position l with
///      b_l < a_j, then f(a_j - b_l) for the first position reaching a_j,
///      then f(0) for each of the j-l-2 positions already fully covered,
///      plus C_j.
pub fn solve_agreeable_convex(inst: &Instance) -> Result<SolveReport> {
    let t0 = Instant::now();
    if !inst.cost.flags.convex_continuous {
        return Err(Error::Precondition(
            "convex chain DP requires the convex_continuous cost flag".into(),
        ));
    }
    let _ = require_agreeable(inst)?;
    let mut order: Vec<IntervalId> = Vec::with_capacity(inst.n());
    for comp in split_components(inst) {
        let gamma = detect_agreeable(&comp.instance)
            .expect("components of an agreeable family are agreeable")
            .gamma;
        let local = match comp.instance.mode {
            EvalMode::Float => convex_chain_order(
                &comp.instance,
                &gamma,
                0.0f64,
                |x, y| x + y,
                |x, y| x - y,
                |v, c| v * c as f64,
                |t| comp.instance.eval_cost(t).map(float_of),
            )?,
            EvalMode::Exact => convex_chain_order(
                &comp.instance,
                &gamma,
                BigRational::zero(),
                |x, y| x + y,
                |x, y| x - y,
                |v, c| v * BigRational::from_integer(c.into()),
                |t| comp.instance.eval_cost(t).map(rational_of),
            )?,
        };
        order.extend(to_global_order(&comp, &local));
    }
    let result = evaluate_ordering(inst, &order)?;
    Ok(finish(
        inst,
        Algorithm::AgreeableConvexDp,
        Objective::Sum,
        Optimality::ExactOptimal,
        result,
        t0,
    ))
}

fn convex_chain_order<T: Clone + PartialOrd>(
    inst: &Instance,
    gamma: &[IntervalId],
    zero: T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
    mul_count: impl Fn(&T, i64) -> T,
    mut eval: impl FnMut(i64) -> Result<T>,
) -> Result<Vec<IntervalId>> {
    let m = gamma.len();
    let a: Vec<i64> = gamma.iter().map(|&id| inst.interval(id).a).collect();
    let b: Vec<i64> = gamma.iter().map(|&id| inst.interval(id).b).collect();
    // Within one overlap component of an agreeable family, consecutive
    // intervals in endpoint order strictly overlap.
    debug_assert!((1..m).all(|t| a[t] < b[t - 1]) || m == 1);

    // Suffix sums of the sweep steps f(b_i - b_{i-1}).
    let mut sweep_tail: Vec<T> = vec![zero; m];
    for t in (0..m - 1).rev() {
        let step = eval(b[t + 1] - b[t])?;
        sweep_tail[t] = add(&sweep_tail[t + 1], &step);
    }
    let full: Vec<T> = (0..m).map(|t| eval(b[t] - a[t])).collect::<Result<_>>()?;
    let f0 = eval(0)?;
    // For each position j, the last position whose right endpoint stays left
    // of a_j, and the cost of the step that first reaches a_j.
    let mut reach: Vec<Option<(usize, T)>> = vec![None; m];
    for j in 0..m {
        let l = b.partition_point(|&x| x < a[j]);
        if l > 0 {
            reach[j] = Some((l - 1, eval(a[j] - b[l - 1])?));
        }
    }

    let mut value: Vec<Option<T>> = vec![None; m];
    let mut next: Vec<Option<usize>> = vec![None; m];
    for k in (0..m).rev() {
        // (a) terminal block k..m-1.
        let mut best = add(&full[k], &sweep_tail[k]);
        let mut step_to: Option<usize> = None;
        // (b) singleton block {k}.
        if k + 1 < m {
            let cand = add(&eval(a[k + 1] - a[k])?, value[k + 1].as_ref().unwrap());
            if cand < best {
                best = cand;
                step_to = Some(k + 1);
            }
        }
        // (c) block k..j-1 for each j starting past b_k.
        let j0 = a.partition_point(|&x| x <= b[k]);
        for j in j0.max(k + 2)..m {
            let (l, reach_cost) = reach[j].as_ref().expect("b_k < a_j implies a predecessor");
            debug_assert!(*l >= k && *l + 2 <= j);
            let run = sub(&sweep_tail[k], &sweep_tail[*l]);
            let covered = mul_count(&f0, (j - l - 2) as i64);
            let mut cand = add(&full[k], &run);
            cand = add(&cand, reach_cost);
            cand = add(&cand, &covered);
            cand = add(&cand, value[j].as_ref().unwrap());
            if cand < best {
                best = cand;
                step_to = Some(j);
            }
        }
        value[k] = Some(best);
        next[k] = step_to;
    }

    // Blocks of consecutive positions, placed from the last block backwards,
    // each swept in increasing position order.
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut k = 0usize;
    loop {
        match next[k] {
            None => {
                blocks.push((k, m));
                break;
            }
            Some(j) => {
                blocks.push((k, j));
                k = j;
            }
        }
    }
    let mut order = Vec::with_capacity(m);
    for &(lo, hi) in blocks.iter().rev() {
        order.extend(gamma[lo..hi].iter().copied());
    }
    Ok(order)
}

// ---------------------------------------------------------------------------
// Laminar length-sort rule
// ---------------------------------------------------------------------------

/// Exact total-cost solver for laminar families whose cost function has a
/// super- or sub-additive shifted part g(x) = f(x) - f(0).
///
/// Super-additive g: place by increasing length (ties by id) — every
/// interval is processed before anything containing it, and exposes its
/// length minus its children's. Sub-additive g: place by decreasing length —
/// roots expose everything, non-roots nothing. Exposed lengths are computed
/// from the containment forest, so the whole solve is one sort plus O(n).
pub fn solve_laminar(inst: &Instance) -> Result<SolveReport> {
    let t0 = Instant::now();
    let forest = require_laminar(inst)?;
    let flags = &inst.cost.flags;
    let increasing = if flags.g_superadditive {
        true
    } else if flags.g_subadditive {
        false
    } else {
        return Err(Error::Precondition(
            "laminar sort requires a g_superadditive or g_subadditive cost flag".into(),
        ));
    };

    let n = inst.n();
    let mut order: Vec<IntervalId> = (1..=n as IntervalId).collect();
    if increasing {
        order.sort_by_key(|&id| (inst.interval(id).len(), id));
    } else {
        order.sort_by_key(|&id| (std::cmp::Reverse(inst.interval(id).len()), id));
    }

    let span_eq = |x: IntervalId, y: IntervalId| {
        let (p, q) = (inst.interval(x), inst.interval(y));
        p.a == q.a && p.b == q.b
    };
    let mut exposed_of: Vec<i64> = vec![0; n];
    if increasing {
        for v in 1..=n as IntervalId {
            let vi = v as usize - 1;
            // A duplicate of its parent is placed after it and exposes
            // nothing.
            if forest.parent[vi].is_some_and(|p| span_eq(p, v)) {
                continue;
            }
            // Walk to the deepest duplicate; its children are the maximal
            // strict sub-intervals, all disjoint, all placed earlier.
            let mut bottom = v;
            loop {
                let ch = &forest.children[bottom as usize - 1];
                match ch.first() {
                    Some(&c) if ch.len() == 1 && span_eq(bottom, c) => bottom = c,
                    _ => break,
                }
            }
            let covered: i64 = forest.children[bottom as usize - 1]
                .iter()
                .map(|&c| inst.interval(c).len())
                .sum();
            exposed_of[vi] = inst.interval(v).len() - covered;
        }
    } else {
        for &r in &forest.roots {
            exposed_of[r as usize - 1] = inst.interval(r).len();
        }
    }
    let exposed: Vec<i64> = order.iter().map(|&id| exposed_of[id as usize - 1]).collect();
    let result = finalize_ordering(inst, order, exposed)?;
    Ok(finish(inst, Algorithm::LaminarSort, Objective::Sum, Optimality::ExactOptimal, result, t0))
}

// ---------------------------------------------------------------------------
// Exposed-part greedy
// ---------------------------------------------------------------------------

/// Forward greedy: repeatedly place the remaining interval with the
/// smallest exposed part relative to the already-covered region (ties by
/// smallest id). Minimizes the worst step for non-decreasing costs.
fn greedy_smallest_first(inst: &Instance) -> Result<OrderingResult> {
    let n = inst.n();
    let mut covered = CoveredSet::new();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut exposed = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(i64, IntervalId)> = None;
        for id in 1..=n as IntervalId {
            if placed[id as usize - 1] {
                continue;
            }
            let e = exposed_length(inst.interval(id), &covered);
            if best.as_ref().is_none_or(|&(be, _)| e < be) {
                best = Some((e, id));
            }
        }
        let (e, id) = best.expect("an unplaced interval remains");
        placed[id as usize - 1] = true;
        let iv = inst.interval(id);
        covered.insert(iv.a, iv.b);
        order.push(id);
        exposed.push(e);
    }
    finalize_ordering(inst, order, exposed)
}

/// Backward greedy for non-increasing costs, where the objective equals
/// f(smallest exposed part) and the goal is to make the smallest step as
/// long as possible.
///
/// The interval sent to the back exposes exactly its residual: the part
/// covered by no other remaining interval. Moving the interval with the
/// largest residual to the last position never hurts — every other
/// interval loses a predecessor and exposes at least as much — so picking
/// the max-residual interval (ties by smallest id) and recursing on the
/// rest is exact. Selecting the *largest current exposed part first*
/// instead is not: on {[15,25), [15,21), [11,14)} it starts with [15,25)
/// and forces [15,21) to expose nothing, while starting with [15,21)
/// keeps every exposure at 3 or more.
///
/// Residuals are recomputed per step by one sweep over the remaining
/// endpoints, attributing depth-1 segments to their unique owner, O(n²)
/// overall.
fn greedy_largest_residual_last(inst: &Instance) -> Result<OrderingResult> {
    let n = inst.n();
    let mut events: Vec<(i64, i32, IntervalId)> = Vec::with_capacity(2 * n);
    for iv in inst.intervals() {
        if !iv.is_empty() {
            events.push((iv.a, 1, iv.id));
            events.push((iv.b, -1, iv.id));
        }
    }
    // Closers before openers at equal coordinates: touching intervals share
    // no points.
    events.sort_unstable_by_key(|&(pos, delta, _)| (pos, delta));

    let mut active = vec![true; n];
    let mut order: Vec<IntervalId> = vec![0; n];
    let mut residual: Vec<i64> = vec![0; n];
    for slot in (0..n).rev() {
        residual.fill(0);
        let mut depth = 0i64;
        let mut owner_xor: IntervalId = 0;
        let mut prev_pos = 0i64;
        for &(pos, delta, id) in &events {
            if !active[id as usize - 1] {
                continue;
            }
            if depth == 1 {
                residual[owner_xor as usize - 1] += pos - prev_pos;
            }
            depth += i64::from(delta);
            owner_xor ^= id;
            prev_pos = pos;
        }
        let pick = (1..=n as IntervalId)
            .filter(|&id| active[id as usize - 1])
            .max_by_key(|&id| (residual[id as usize - 1], std::cmp::Reverse(id)))
            .expect("an unplaced interval remains");
        active[pick as usize - 1] = false;
        order[slot] = pick;
    }
    evaluate_ordering(inst, &order)
}

fn greedy_run(inst: &Instance) -> Result<OrderingResult> {
    if inst.cost.flags.non_increasing && !inst.cost.flags.non_decreasing {
        greedy_largest_residual_last(inst)
    } else {
        greedy_smallest_first(inst)
    }
}

/// Exact bottleneck solver for monotone costs: smallest-exposed-part-first
/// for non-decreasing f, largest-residual-last for non-increasing f.
pub fn solve_bottleneck_greedy(inst: &Instance) -> Result<SolveReport> {
    let t0 = Instant::now();
    let flags = &inst.cost.flags;
    if !flags.non_decreasing && !flags.non_increasing {
        return Err(Error::Precondition(
            "bottleneck greedy requires a monotone cost flag".into(),
        ));
    }
    let result = greedy_run(inst)?;
    Ok(finish(
        inst,
        Algorithm::Greedy,
        Objective::Bottleneck,
        Optimality::ExactOptimal,
        result,
        t0,
    ))
}

/// The same greedy selection rule offered without preconditions, honestly
/// labeled: exact only for the bottleneck objective with a monotone cost.
pub fn solve_greedy(inst: &Instance, objective: Objective) -> Result<SolveReport> {
    let t0 = Instant::now();
    let flags = &inst.cost.flags;
    let monotone = flags.non_decreasing || flags.non_increasing;
    let status = if objective == Objective::Bottleneck && monotone {
        Optimality::ExactOptimal
    } else {
        Optimality::Heuristic
    };
    let result = greedy_run(inst)?;
    Ok(finish(inst, Algorithm::Greedy, objective, status, result, t0))
}

// ---------------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------------

/// Picks the strongest applicable algorithm and never fails: structure-aware
/// exact solvers first, the exponential oracle for small unstructured
/// instances, and the greedy (labeled HEURISTIC) as the fallback.
pub fn auto_solve(inst: &Instance, objective: Objective) -> Result<SolveReport> {
    auto_solve_with_cap(inst, objective, None)
}

pub fn auto_solve_with_cap(
    inst: &Instance,
    objective: Objective,
    cap: Option<usize>,
) -> Result<SolveReport> {
    let flags = &inst.cost.flags;
    let monotone = flags.non_decreasing || flags.non_increasing;
    let within_cap = inst.n() <= effective_cap(inst.mode, cap);
    match objective {
        Objective::Bottleneck => {
            if monotone {
                solve_bottleneck_greedy(inst)
            } else if within_cap {
                oracle_bottleneck_with_cap(inst, cap)
            } else {
                solve_greedy(inst, objective)
            }
        }
        Objective::Sum => {
            let laminar = matches!(detect_laminar(inst), Laminarity::Forest(_));
            if laminar && (flags.g_superadditive || flags.g_subadditive) {
                return solve_laminar(inst);
            }
            let agreeable = detect_agreeable(inst).is_some();
            if agreeable && flags.convex_continuous {
                solve_agreeable_convex(inst)
            } else if agreeable {
                solve_agreeable(inst)
            } else if within_cap {
                oracle_sum_with_cap(inst, cap)
            } else {
                solve_greedy(inst, objective)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costfn::{CostFunction, EvalMode};
    use crate::generators::{gen_agreeable, gen_general, gen_greedy_gap, gen_laminar, SplitMix64};
    use num::BigInt;

    fn pow2_inst(spans: &[(i64, i64)], mode: EvalMode) -> Instance {
        Instance::new(spans, CostFunction::pow2(), mode).unwrap()
    }

    fn cluster5(mode: EvalMode) -> Instance {
        pow2_inst(&[(0, 1), (1, 2), (2, 3), (3, 6), (0, 5)], mode)
    }

    fn exact_int(v: i64) -> CostValue {
        CostValue::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    fn rel_close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
    }

    fn all_orders(n: usize) -> Vec<Vec<IntervalId>> {
        fn rec(prefix: &mut Vec<IntervalId>, used: &mut Vec<bool>, out: &mut Vec<Vec<IntervalId>>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for id in 1..=n as IntervalId {
                if !used[id as usize - 1] {
                    used[id as usize - 1] = true;
                    prefix.push(id);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[id as usize - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn brute_force(inst: &Instance, objective: Objective) -> CostValue {
        let mut best: Option<CostValue> = None;
        for order in all_orders(inst.n()) {
            let r = evaluate_ordering(inst, &order).unwrap();
            let v = match objective {
                Objective::Sum => r.sum_cost,
                Objective::Bottleneck => r.bottleneck_cost,
            };
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        best.unwrap()
    }

    fn random_table(rng: &mut SplitMix64) -> CostFunction {
        let t = 2 + rng.below(3) as usize;
        let breakpoints: Vec<BigRational> = (0..t as i64)
            .map(|i| BigRational::from_integer(BigInt::from(i * 3)))
            .collect();
        let values: Vec<BigRational> = (0..t)
            .map(|_| BigRational::from_integer(BigInt::from(rng.below(20) as i64)))
            .collect();
        CostFunction::table(breakpoints, values).unwrap()
    }

    #[test]
    fn oracle_matches_brute_force() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 5) as usize;
            for mode in [EvalMode::Exact, EvalMode::Float] {
                let inst = gen_general(n, 18, seed, CostFunction::pow2(), mode).unwrap();
                for objective in [Objective::Sum, Objective::Bottleneck] {
                    let rep = match objective {
                        Objective::Sum => oracle_sum(&inst).unwrap(),
                        Objective::Bottleneck => oracle_bottleneck(&inst).unwrap(),
                    };
                    let got = match objective {
                        Objective::Sum => rep.result.sum_cost.clone(),
                        Objective::Bottleneck => rep.result.bottleneck_cost.clone(),
                    };
                    let want = brute_force(&inst, objective);
                    match mode {
                        EvalMode::Exact => assert_eq!(got, want, "seed {seed} {objective}"),
                        EvalMode::Float => assert!(
                            rel_close(got.to_f64(), want.to_f64(), 1e-12),
                            "seed {seed} {objective}: {got} vs {want}"
                        ),
                    }
                }
            }
            // A cost with no structure flags at all.
            let inst = gen_general(n, 14, seed, CostFunction::p2free(), EvalMode::Exact).unwrap();
            let rep = oracle_sum(&inst).unwrap();
            assert_eq!(rep.result.sum_cost, brute_force(&inst, Objective::Sum), "p2free {seed}");
        }
    }

    #[test]
    fn oracle_cluster_values() {
        let inst = cluster5(EvalMode::Exact);
        let rep = oracle_sum(&inst).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(12));
        assert_eq!(rep.status, Optimality::ExactOptimal);
        assert_eq!(rep.algorithm, Algorithm::Oracle);
        // The known-good permutation is among the optima.
        let known = evaluate_ordering(&inst, &[1, 2, 3, 5, 4]).unwrap();
        assert_eq!(known.sum_cost, rep.result.sum_cost);

        let rep = oracle_bottleneck(&inst).unwrap();
        assert_eq!(rep.result.bottleneck_cost, exact_int(4));

        let single = pow2_inst(&[(0, 5)], EvalMode::Exact);
        assert_eq!(oracle_sum(&single).unwrap().result.sum_cost, exact_int(32));

        let disjoint = pow2_inst(&[(0, 1), (2, 5)], EvalMode::Exact);
        assert_eq!(
            oracle_bottleneck(&disjoint).unwrap().result.bottleneck_cost,
            exact_int(8)
        );
    }

    #[test]
    fn oracle_gap_instance() {
        let inst = gen_greedy_gap(2, 1, 4).unwrap();
        let rep = oracle_sum(&inst).unwrap();
        let want = 2f64.powf(4.25) + 4.0 + 2f64.powf(1.75);
        assert!(rel_close(rep.result.sum_cost.to_f64(), want, 1e-9));
    }

    #[test]
    fn oracle_size_caps() {
        let spans: Vec<(i64, i64)> = (0..23).map(|i| (2 * i, 2 * i + 1)).collect();
        let inst = pow2_inst(&spans, EvalMode::Float);
        assert!(matches!(oracle_sum(&inst), Err(Error::TooLarge { n: 23, cap: 22 })));

        let spans: Vec<(i64, i64)> = (0..19).map(|i| (2 * i, 2 * i + 1)).collect();
        let inst = pow2_inst(&spans, EvalMode::Exact);
        assert!(matches!(oracle_sum(&inst), Err(Error::TooLarge { n: 19, cap: 18 })));
        // Explicit override both lifts and lowers the default.
        assert!(oracle_sum_with_cap(&inst, Some(19)).is_ok());
        let small = pow2_inst(&[(0, 1), (1, 2), (2, 3)], EvalMode::Exact);
        assert!(matches!(
            oracle_sum_with_cap(&small, Some(2)),
            Err(Error::TooLarge { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn window_dp_hand_example() {
        // {[0,3),[2,5),[4,7)} with f(x) = x^2: optimum 17.
        let inst = Instance::new(
            &[(0, 3), (2, 5), (4, 7)],
            CostFunction::power_int(2).unwrap(),
            EvalMode::Exact,
        )
        .unwrap();
        let rep = solve_agreeable(&inst).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(17));
        assert_eq!(rep.result.sum_cost, oracle_sum(&inst).unwrap().result.sum_cost);
        assert_eq!(rep.algorithm, Algorithm::AgreeableDp);
    }

    #[test]
    fn window_dp_single_and_components() {
        let one = pow2_inst(&[(0, 4)], EvalMode::Exact);
        assert_eq!(solve_agreeable(&one).unwrap().result.sum_cost, exact_int(16));

        // Two disjoint components: total is the sum of per-component optima.
        let both = pow2_inst(&[(0, 2), (1, 3), (10, 12), (11, 13)], EvalMode::Exact);
        let left = pow2_inst(&[(0, 2), (1, 3)], EvalMode::Exact);
        let l = solve_agreeable(&left).unwrap().result.sum_cost;
        let total = solve_agreeable(&both).unwrap().result.sum_cost;
        assert_eq!(total, l.add(&l));
    }

    #[test]
    fn window_dp_matches_oracle_on_random_agreeable() {
        for seed in 0..40u64 {
            let n = 2 + (seed % 8) as usize;
            let mut rng = SplitMix64::new(seed.wrapping_mul(0x9E3779B97F4A7C15));
            let cost = match seed % 3 {
                0 => CostFunction::pow2(),
                1 => CostFunction::p2free(),
                _ => random_table(&mut rng),
            };
            let inst = gen_agreeable(n, 40, seed, cost, EvalMode::Exact).unwrap();
            let dp = solve_agreeable(&inst).unwrap();
            let oracle = oracle_sum(&inst).unwrap();
            assert_eq!(dp.result.sum_cost, oracle.result.sum_cost, "seed {seed}");
        }
    }

    #[test]
    fn window_dp_rejects_non_agreeable() {
        assert!(matches!(
            solve_agreeable(&cluster5(EvalMode::Exact)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn convex_dp_hand_example_and_oracle() {
        let inst = Instance::new(
            &[(0, 3), (2, 5), (4, 7)],
            CostFunction::power_int(2).unwrap(),
            EvalMode::Exact,
        )
        .unwrap();
        let rep = solve_agreeable_convex(&inst).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(17));
        assert_eq!(rep.algorithm, Algorithm::AgreeableConvexDp);

        for seed in 0..60u64 {
            let n = 2 + (seed % 9) as usize;
            // Exact squares.
            let inst =
                gen_agreeable(n, 40, seed, CostFunction::power_int(2).unwrap(), EvalMode::Exact)
                    .unwrap();
            let convex = solve_agreeable_convex(&inst).unwrap();
            let cubic = solve_agreeable(&inst).unwrap();
            let oracle = oracle_sum(&inst).unwrap();
            assert_eq!(convex.result.sum_cost, oracle.result.sum_cost, "sq seed {seed}");
            assert_eq!(cubic.result.sum_cost, oracle.result.sum_cost, "sq seed {seed}");
            // Float powers of two.
            let inst = gen_agreeable(n, 30, seed, CostFunction::pow2(), EvalMode::Float).unwrap();
            let convex = solve_agreeable_convex(&inst).unwrap();
            let oracle = oracle_sum(&inst).unwrap();
            assert!(
                rel_close(
                    convex.result.sum_cost.to_f64(),
                    oracle.result.sum_cost.to_f64(),
                    1e-9
                ),
                "pow2 seed {seed}: {} vs {}",
                convex.result.sum_cost,
                oracle.result.sum_cost
            );
        }
    }

    #[test]
    fn convex_dp_decreasing_convex_cost() {
        // Convex but non-increasing: f starts at 10, slope -2 until 4, then
        // flat at 2. The chain DP must still match the oracle.
        let to_r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let cost = CostFunction::table(
            vec![to_r(0), to_r(4), to_r(5)],
            vec![to_r(10), to_r(2), to_r(2)],
        )
        .unwrap();
        assert!(cost.flags.convex_continuous && cost.flags.non_increasing);
        for seed in 0..40u64 {
            let n = 2 + (seed % 7) as usize;
            let inst = gen_agreeable(n, 25, seed, cost.clone(), EvalMode::Exact).unwrap();
            let convex = solve_agreeable_convex(&inst).unwrap();
            let oracle = oracle_sum(&inst).unwrap();
            assert_eq!(convex.result.sum_cost, oracle.result.sum_cost, "seed {seed}");
        }
    }

    #[test]
    fn convex_dp_linear_cost_conserves() {
        // With f(x) = x the total is the union measure for every ordering.
        let inst = Instance::new(
            &[(0, 4), (2, 7), (5, 9), (8, 11)],
            CostFunction::linear_int(1, 0),
            EvalMode::Exact,
        )
        .unwrap();
        let rep = solve_agreeable_convex(&inst).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(11));
    }

    #[test]
    fn convex_dp_gates() {
        let inst = gen_agreeable(5, 20, 1, CostFunction::p2free(), EvalMode::Exact).unwrap();
        assert!(matches!(solve_agreeable_convex(&inst), Err(Error::Precondition(_))));
        assert!(matches!(
            solve_agreeable_convex(&cluster5(EvalMode::Exact)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn laminar_hand_examples() {
        let inst = pow2_inst(&[(0, 8), (0, 3), (4, 8), (0, 1), (4, 6)], EvalMode::Exact);
        let rep = solve_laminar(&inst).unwrap();
        assert_eq!(rep.result.order, vec![4, 5, 2, 3, 1]);
        assert_eq!(rep.result.exposed, vec![1, 2, 2, 2, 1]);
        assert_eq!(rep.result.sum_cost, exact_int(16));
        assert_eq!(rep.result.sum_cost, oracle_sum(&inst).unwrap().result.sum_cost);

        // Nested prefixes: every step exposes exactly one unit.
        let prefixes = pow2_inst(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], EvalMode::Exact);
        let rep = solve_laminar(&prefixes).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(10));
    }

    #[test]
    fn laminar_replay_is_bit_exact() {
        for seed in 0..20u64 {
            let inst = gen_laminar(30, 4, seed, CostFunction::pow2(), EvalMode::Float).unwrap();
            let rep = solve_laminar(&inst).unwrap();
            let replay = evaluate_ordering(&inst, &rep.result.order).unwrap();
            assert_eq!(rep.result.exposed, replay.exposed, "seed {seed}");
            assert_eq!(rep.result.sum_cost, replay.sum_cost, "seed {seed}");
            assert_eq!(rep.result.bottleneck_cost, replay.bottleneck_cost, "seed {seed}");
        }
    }

    #[test]
    fn laminar_matches_oracle_both_directions() {
        for seed in 0..40u64 {
            let n = 1 + (seed % 9) as usize;
            let inst = gen_laminar(n, 3, seed, CostFunction::pow2(), EvalMode::Exact).unwrap();
            let rep = solve_laminar(&inst).unwrap();
            assert_eq!(
                rep.result.sum_cost,
                oracle_sum(&inst).unwrap().result.sum_cost,
                "increasing seed {seed}"
            );

            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            let inst =
                gen_laminar(n, 3, seed, CostFunction::power(half).unwrap(), EvalMode::Float)
                    .unwrap();
            let rep = solve_laminar(&inst).unwrap();
            let oracle = oracle_sum(&inst).unwrap();
            assert!(
                rel_close(
                    rep.result.sum_cost.to_f64(),
                    oracle.result.sum_cost.to_f64(),
                    1e-9
                ),
                "decreasing seed {seed}"
            );
        }
    }

    #[test]
    fn laminar_handles_duplicates() {
        let inst = pow2_inst(&[(0, 4), (0, 4), (1, 2)], EvalMode::Exact);
        let rep = solve_laminar(&inst).unwrap();
        // Lengths (4, 4, 1): increasing order is (3, 1, 2); the duplicate
        // pays f(0) = 1.
        assert_eq!(rep.result.order, vec![3, 1, 2]);
        assert_eq!(rep.result.exposed, vec![1, 3, 0]);
        assert_eq!(rep.result.sum_cost, oracle_sum(&inst).unwrap().result.sum_cost);
    }

    #[test]
    fn laminar_gates() {
        let not_laminar = pow2_inst(&[(0, 3), (2, 5)], EvalMode::Exact);
        assert!(matches!(solve_laminar(&not_laminar), Err(Error::Precondition(_))));
        let no_flags = Instance::new(&[(0, 4), (1, 2)], CostFunction::p2free(), EvalMode::Exact)
            .unwrap();
        assert!(matches!(solve_laminar(&no_flags), Err(Error::Precondition(_))));
    }

    #[test]
    fn greedy_cluster_and_gap() {
        let inst = cluster5(EvalMode::Exact);
        let rep = solve_bottleneck_greedy(&inst).unwrap();
        assert_eq!(rep.result.order[0], 1); // three unit intervals tie; id wins
        assert_eq!(rep.result.bottleneck_cost, exact_int(4));
        assert_eq!(
            rep.result.bottleneck_cost,
            oracle_bottleneck(&inst).unwrap().result.bottleneck_cost
        );

        let gap = gen_greedy_gap(2, 1, 4).unwrap();
        let rep = solve_bottleneck_greedy(&gap).unwrap();
        assert_eq!(rep.result.order, vec![1, 2, 3]);
        assert_eq!(rep.result.sum_cost, CostValue::Float(33.0));
    }

    #[test]
    fn greedy_matches_bottleneck_oracle() {
        for seed in 0..40u64 {
            let n = 2 + (seed % 9) as usize;
            let inst = gen_general(n, 30, seed, CostFunction::pow2(), EvalMode::Exact).unwrap();
            let greedy = solve_bottleneck_greedy(&inst).unwrap();
            let oracle = oracle_bottleneck(&inst).unwrap();
            assert_eq!(
                greedy.result.bottleneck_cost, oracle.result.bottleneck_cost,
                "non-decreasing seed {seed}"
            );
        }
        // Largest-residual-last with a non-increasing cost.
        let to_r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let cost = CostFunction::table(
            vec![to_r(0), to_r(6), to_r(7)],
            vec![to_r(30), to_r(3), to_r(3)],
        )
        .unwrap();
        assert!(cost.flags.non_increasing && !cost.flags.non_decreasing);
        for seed in 0..60u64 {
            let n = 2 + (seed % 8) as usize;
            let inst = gen_general(n, 25, seed, cost.clone(), EvalMode::Exact).unwrap();
            let greedy = solve_bottleneck_greedy(&inst).unwrap();
            let oracle = oracle_bottleneck(&inst).unwrap();
            assert_eq!(
                greedy.result.bottleneck_cost, oracle.result.bottleneck_cost,
                "non-increasing seed {seed}"
            );
        }
    }

    #[test]
    fn greedy_non_increasing_nested_trap() {
        // [15,21) nests inside [15,25). Placing the longest interval first
        // zeroes the nested one's exposure (cost f(0) = 30); the optimum
        // keeps every exposure at 3 or more for a bottleneck of 33/2.
        let to_r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let cost = CostFunction::table(
            vec![to_r(0), to_r(6), to_r(7)],
            vec![to_r(30), to_r(3), to_r(3)],
        )
        .unwrap();
        let inst =
            Instance::new(&[(15, 25), (15, 21), (11, 14)], cost, EvalMode::Exact).unwrap();
        let rep = solve_bottleneck_greedy(&inst).unwrap();
        assert_eq!(rep.status, Optimality::ExactOptimal);
        assert_eq!(
            rep.result.bottleneck_cost,
            CostValue::Exact(BigRational::new(BigInt::from(33), BigInt::from(2)))
        );
        assert_eq!(rep.result.exposed.iter().min(), Some(&3));
    }

    #[test]
    fn greedy_gate_and_heuristic_labeling() {
        let inst = gen_general(5, 20, 3, CostFunction::p2free(), EvalMode::Exact).unwrap();
        assert!(matches!(solve_bottleneck_greedy(&inst), Err(Error::Precondition(_))));
        // The unconditional variant runs anyway, labeled honestly.
        let rep = solve_greedy(&inst, Objective::Bottleneck).unwrap();
        assert_eq!(rep.status, Optimality::Heuristic);
        let rep = solve_greedy(&cluster5(EvalMode::Exact), Objective::Sum).unwrap();
        assert_eq!(rep.status, Optimality::Heuristic);
    }

    #[test]
    fn auto_dispatch() {
        // Unstructured small instance: oracle.
        let rep = auto_solve(&cluster5(EvalMode::Exact), Objective::Sum).unwrap();
        assert_eq!(rep.algorithm, Algorithm::Oracle);
        assert_eq!(rep.result.sum_cost, exact_int(12));
        assert!(!rep.evidence.agreeable && !rep.evidence.laminar);
        assert_eq!(rep.evidence.components, 1);

        // Laminar with a super-additive cost: length sort.
        let lam = pow2_inst(&[(0, 8), (1, 3), (4, 7)], EvalMode::Exact);
        let rep = auto_solve(&lam, Objective::Sum).unwrap();
        assert_eq!(rep.algorithm, Algorithm::LaminarSort);
        assert_eq!(rep.status, Optimality::ExactOptimal);

        // Agreeable, strictly overlapping (not laminar), convex cost.
        let agr = pow2_inst(&[(0, 3), (2, 5), (4, 7)], EvalMode::Exact);
        let rep = auto_solve(&agr, Objective::Sum).unwrap();
        assert_eq!(rep.algorithm, Algorithm::AgreeableConvexDp);

        // Agreeable with an unstructured (zigzag, non-convex) cost: the
        // cubic DP.
        let to_r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let tbl = CostFunction::table(
            vec![to_r(0), to_r(2), to_r(4)],
            vec![to_r(0), to_r(9), to_r(1)],
        )
        .unwrap();
        assert!(!tbl.flags.convex_continuous);
        let agr = Instance::new(&[(0, 3), (2, 5), (4, 7)], tbl, EvalMode::Exact).unwrap();
        let rep = auto_solve(&agr, Objective::Sum).unwrap();
        assert_eq!(rep.algorithm, Algorithm::AgreeableDp);

        // Large unstructured: greedy heuristic.
        let spans: Vec<(i64, i64)> = (0..30)
            .map(|i| if i % 2 == 0 { (i, i + 5) } else { (i + 2, i + 3) })
            .collect();
        let big = pow2_inst(&spans, EvalMode::Float);
        let rep = auto_solve(&big, Objective::Sum).unwrap();
        assert_eq!(rep.algorithm, Algorithm::Greedy);
        assert_eq!(rep.status, Optimality::Heuristic);

        // Bottleneck with monotone cost: greedy, exact.
        let rep = auto_solve(&cluster5(EvalMode::Exact), Objective::Bottleneck).unwrap();
        assert_eq!(rep.algorithm, Algorithm::Greedy);
        assert_eq!(rep.status, Optimality::ExactOptimal);

        // Bottleneck with a non-monotone cost: oracle under the cap.
        let inst = gen_general(6, 20, 8, CostFunction::p2free(), EvalMode::Exact).unwrap();
        let rep = auto_solve(&inst, Objective::Bottleneck).unwrap();
        assert_eq!(rep.algorithm, Algorithm::Oracle);

        // Empty instance solves to zero.
        let empty = pow2_inst(&[], EvalMode::Exact);
        let rep = auto_solve(&empty, Objective::Sum).unwrap();
        assert_eq!(rep.result.sum_cost, exact_int(0));
        let rep = auto_solve(&empty, Objective::Bottleneck).unwrap();
        assert_eq!(rep.result.bottleneck_cost, exact_int(0));
    }

    #[test]
    fn window_table_shape() {
        let inst = pow2_inst(&[(0, 3), (2, 5)], EvalMode::Exact);
        let gamma = detect_agreeable(&inst).unwrap().gamma;
        let table = fill_window_table(&inst, &gamma).unwrap();
        assert_eq!(table.m(), 2);
        assert_eq!(*table.cost(0, 1), CostValue::zero(EvalMode::Exact));
        assert!(table.choice(0, 1).is_none());
        assert!(table.choice(0, 3).is_some());
    }
}
