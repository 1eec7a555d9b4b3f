//! Deterministic instance generators.
//!
//! Every random family is driven by [`SplitMix64`] so that a `(parameters,
//! seed)` pair produces the same instance on every platform. The structured
//! families (`gen_greedy_gap`, `gen_partition_gadget`, `gen_sorting_family`)
//! are fully determined by their parameters.

use crate::costfn::{CostFunction, EvalMode};
use crate::error::{Error, Result};
use crate::interval::Instance;

/// SplitMix64 pseudo-random generator.
///
/// The algorithm is fixed and bit-exact; generated instances depend on it:
///
/// ```text
/// next():
///   state += 0x9E3779B97F4A7C15                (mod 2^64)
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
///   return z ^ (z >> 31)
/// ```
///
/// Bounded draws use plain reduction, `below(n) = next() % n`; the modulo
/// bias is irrelevant for test-instance generation. Shuffling is
/// Fisher-Yates from the top: for i = len-1 .. 1, swap(i, below(i+1)).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        self.next_u64() % n
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

fn check_family_params(n: usize, coord_max: i64) -> Result<()> {
    if n == 0 {
        return Err(Error::Params("n must be >= 1".into()));
    }
    if coord_max < 1 {
        return Err(Error::Params("coordinate range must be >= 1".into()));
    }
    Ok(())
}

/// Random agreeable family: left and right endpoints are drawn and sorted
/// independently, then paired, which always yields a < b and an agreeable
/// order equal to the id order.
pub fn gen_agreeable(
    n: usize,
    coord_max: i64,
    seed: u64,
    cost: CostFunction,
    mode: EvalMode,
) -> Result<Instance> {
    check_family_params(n, coord_max)?;
    let mut rng = SplitMix64::new(seed);
    let mut lefts: Vec<i64> = (0..n).map(|_| rng.below(coord_max as u64) as i64).collect();
    lefts.sort_unstable();
    // b_i > a_i before sorting implies b_(i) > a_(i) after sorting both.
    let mut rights: Vec<i64> = lefts
        .iter()
        .map(|&a| a + 1 + rng.below((coord_max - a) as u64) as i64)
        .collect();
    rights.sort_unstable();
    let spans: Vec<(i64, i64)> = lefts.into_iter().zip(rights).collect();
    Instance::new(&spans, cost, mode)
}

/// Random laminar forest: a parent structure bounded by `depth_max` is drawn
/// first, then coordinates are assigned so children sit strictly inside their
/// parents with unit gaps.
pub fn gen_laminar(
    n: usize,
    depth_max: usize,
    seed: u64,
    cost: CostFunction,
    mode: EvalMode,
) -> Result<Instance> {
    if depth_max == 0 {
        return Err(Error::Params("depth_max must be >= 1".into()));
    }
    check_family_params(n, 1)?;
    let mut rng = SplitMix64::new(seed);

    // Shape: node 1 is a root; each later node is a fresh root with
    // probability 1/3, otherwise a child of an earlier node (walking up from
    // a uniformly drawn node until the depth budget allows children).
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth: Vec<usize> = vec![1; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        if depth_max == 1 || rng.below(3) == 0 {
            continue;
        }
        let mut p = rng.below(i as u64) as usize;
        while depth[p] >= depth_max {
            p = parent[p].expect("roots have depth 1 < depth_max");
        }
        parent[i] = Some(p);
        depth[i] = depth[p] + 1;
        children[p].push(i);
    }

    // Widths bottom-up (children always have larger indices).
    let mut width: Vec<i64> = vec![0; n];
    for v in (0..n).rev() {
        let need: i64 = children[v].iter().map(|&c| width[c] + 1).sum::<i64>() + 1;
        width[v] = need.max(1 + rng.below(3) as i64);
    }

    // Placement top-down: roots left to right, children packed from the
    // parent's left edge plus one.
    let mut spans: Vec<(i64, i64)> = vec![(0, 0); n];
    let mut next_free: Vec<i64> = vec![0; n];
    let mut cursor: i64 = 0;
    for v in 0..n {
        let a = match parent[v] {
            None => {
                let a = cursor;
                cursor = a + width[v] + 1 + rng.below(2) as i64;
                a
            }
            Some(p) => {
                let a = next_free[p];
                next_free[p] = a + width[v] + 1;
                a
            }
        };
        spans[v] = (a, a + width[v]);
        next_free[v] = a + 1;
    }
    Instance::new(&spans, cost, mode)
}

/// Unstructured family: independent uniform intervals in `[0, coord_max]`.
pub fn gen_general(
    n: usize,
    coord_max: i64,
    seed: u64,
    cost: CostFunction,
    mode: EvalMode,
) -> Result<Instance> {
    check_family_params(n, coord_max)?;
    let mut rng = SplitMix64::new(seed);
    let spans: Vec<(i64, i64)> = (0..n)
        .map(|_| {
            let a = rng.below(coord_max as u64) as i64;
            (a, a + 1 + rng.below((coord_max - a) as u64) as i64)
        })
        .collect();
    Instance::new(&spans, cost, mode)
}

/// The staircase family on which smallest-exposed-first greedy overshoots the
/// optimal total cost by an unbounded factor.
///
/// For `k >= 2` and an offset `eps = eps_num / eps_den` in (0, 1), builds the
/// 2k-1 intervals (in units, stored as ticks at scale `eps_den`)
///
/// ```text
/// A_1 = [0, 2k)
/// A_i = [2k(i-1) - eps, 2ki)         i = 2..k      (ids 1..k)
/// B_j = [(2j-1)k - eps, 2k^2)        j = 1..k-1    (ids k+1..2k-1)
/// ```
///
/// with f(x) = 2^x in float mode (the interesting exposures are fractional).
pub fn gen_greedy_gap(k: u32, eps_num: i64, eps_den: i64) -> Result<Instance> {
    if k < 2 {
        return Err(Error::Params("k must be >= 2".into()));
    }
    if eps_den < 1 || eps_num < 1 || eps_num >= eps_den {
        return Err(Error::Params("eps must satisfy 0 < eps_num/eps_den < 1".into()));
    }
    let k = k as i128;
    let s = eps_den as i128;
    let e = eps_num as i128;
    let fit = |v: i128| -> Result<i64> {
        i64::try_from(v).map_err(|_| Error::Params("parameters overflow the tick range".into()))
    };
    let mut spans = Vec::with_capacity(2 * k as usize - 1);
    spans.push((fit(0)?, fit(2 * k * s)?));
    for i in 2..=k {
        spans.push((fit(2 * k * (i - 1) * s - e)?, fit(2 * k * i * s)?));
    }
    for j in 1..=k - 1 {
        spans.push((fit(((2 * j - 1) * k) * s - e)?, fit(2 * k * k * s)?));
    }
    Instance::with_scale(&spans, CostFunction::pow2(), EvalMode::Float, eps_den)
}

/// The derived numbers of one reduction instance (see
/// [`gen_partition_gadget`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionGadget {
    pub q: Vec<u64>,
    /// Half the sum of q: the subset target.
    pub target: u64,
    /// Required subset size.
    pub k: usize,
    /// The power-of-two exponent N sizing the dummy interval.
    pub n_exp: u32,
    pub element_lengths: Vec<i64>,
    pub dummy_length: i64,
    pub main_length: i64,
    /// End of the element tiling: elements cover [0, tile_end).
    pub tile_end: i64,
}

impl PartitionGadget {
    /// Optimal cost is at most this when a size-k subset of q sums to target.
    pub fn yes_bound(&self) -> i64 {
        // main_length = 2^N + 2^n*Q + n - k; the bound is 2^n*Q + n - k.
        self.main_length - (1i64 << self.n_exp)
    }

    /// Optimal cost is at least this (in fact exactly this) otherwise.
    pub fn no_bound(&self) -> i64 {
        self.main_length
    }
}

/// Builds the interval family that encodes a cardinality-constrained
/// PARTITION question: q must split into a size-k part and a size-(n-k) part
/// of equal sums exactly when the family can be ordered at cost
/// <= `yes_bound` under f = "zero on powers of two, identity elsewhere".
///
/// Element i gets length `2^n * q_i + 1`; the elements tile `[0, L)`. A dummy
/// interval of length `2^N - 2^n*Q - k` follows, and a main interval spans
/// everything. `n_exp` overrides N, which must satisfy `2^(N-1) > 2^n*Q + k`;
/// by default the smallest such N is used.
pub fn gen_partition_gadget(
    q: &[u64],
    k: usize,
    n_exp: Option<u32>,
) -> Result<(Instance, PartitionGadget)> {
    let n = q.len();
    if n == 0 || n > 32 {
        return Err(Error::Params("need 1 to 32 element weights".into()));
    }
    if q.contains(&0) {
        return Err(Error::Params("element weights must be positive".into()));
    }
    if k > n {
        return Err(Error::Params(format!("subset size {k} exceeds n = {n}")));
    }
    let sum: u128 = q.iter().map(|&qi| qi as u128).sum();
    if !sum.is_multiple_of(2) {
        return Err(Error::Params("element weights must have an even sum".into()));
    }
    let target = sum / 2;
    let pow_n: u128 = 1u128 << n;
    let x = pow_n * target + k as u128;
    let n_exp = match n_exp {
        Some(v) => {
            if v == 0 || v > 127 || (1u128 << (v - 1)) <= x {
                return Err(Error::Params(format!(
                    "n_exp = {v} violates 2^(n_exp-1) > 2^n*Q + k = {x}"
                )));
            }
            v
        }
        None => (128 - x.leading_zeros()) + 1,
    };
    let fit = |v: u128| -> Result<i64> {
        i64::try_from(v).map_err(|_| Error::Params("gadget does not fit the tick range".into()))
    };
    let element_lengths: Vec<i64> = q
        .iter()
        .map(|&qi| fit(pow_n * qi as u128 + 1))
        .collect::<Result<_>>()?;
    let tile_end = fit(2 * pow_n * target + n as u128)?;
    let dummy_length = fit((1u128 << n_exp) - pow_n * target - k as u128)?;
    let main_length = fit((1u128 << n_exp) + pow_n * target + n as u128 - k as u128)?;

    let mut spans = Vec::with_capacity(n + 2);
    let mut offset = 0i64;
    for &len in &element_lengths {
        spans.push((offset, offset + len));
        offset += len;
    }
    debug_assert_eq!(offset, tile_end);
    spans.push((tile_end, tile_end + dummy_length));
    spans.push((0, tile_end + dummy_length));
    debug_assert_eq!(tile_end + dummy_length, main_length);

    let inst = Instance::new(&spans, CostFunction::p2free(), EvalMode::Exact)?;
    let gadget = PartitionGadget {
        q: q.to_vec(),
        target: u64::try_from(target).map_err(|_| Error::Params("weights too large".into()))?,
        k,
        n_exp,
        element_lengths,
        dummy_length,
        main_length,
        tile_end,
    };
    Ok((inst, gadget))
}

/// Nested prefixes `[0, x_j)` with f = 2^x: the unique optimal ordering sorts
/// the lengths increasingly, so exact solvers on this family sort.
pub fn gen_sorting_family(x: &[i64]) -> Result<Instance> {
    if x.is_empty() {
        return Err(Error::Params("need at least one length".into()));
    }
    if x.iter().any(|&v| v < 1) {
        return Err(Error::Params("lengths must be >= 1".into()));
    }
    let spans: Vec<(i64, i64)> = x.iter().map(|&v| (0, v)).collect();
    Instance::new(&spans, CostFunction::pow2(), EvalMode::Exact)
}
