#![allow(dead_code)]

use interval_ordering::costfn::CostFunction;
use interval_ordering::generators::SplitMix64;
use interval_ordering::IntervalId;
use num::{BigInt, BigRational};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn exact_int(v: i64) -> interval_ordering::CostValue {
    interval_ordering::CostValue::Exact(rat(v, 1))
}

/// Random `(a, b)` spans with `a <= b`; roughly one in eight is empty.
pub fn random_spans(rng: &mut SplitMix64, n: usize, coord_max: i64) -> Vec<(i64, i64)> {
    (0..n)
        .map(|_| {
            let a = rng.below(coord_max as u64) as i64;
            if rng.below(8) == 0 {
                (a, a)
            } else {
                (a, a + 1 + rng.below((coord_max - a) as u64) as i64)
            }
        })
        .collect()
}

pub fn random_perm(rng: &mut SplitMix64, n: usize) -> Vec<IntervalId> {
    let mut order: Vec<IntervalId> = (1..=n as IntervalId).collect();
    rng.shuffle(&mut order);
    order
}

/// Exposed lengths by per-tick membership counting (integer coordinates
/// only — every unit cell [t, t+1) is checked against all predecessors).
pub fn naive_exposed(spans: &[(i64, i64)], order: &[IntervalId]) -> Vec<i64> {
    order
        .iter()
        .enumerate()
        .map(|(pos, &id)| {
            let (a, b) = spans[id as usize - 1];
            (a..b)
                .filter(|&t| {
                    !order[..pos]
                        .iter()
                        .any(|&p| spans[p as usize - 1].0 <= t && t < spans[p as usize - 1].1)
                })
                .count() as i64
        })
        .collect()
}

pub fn rel_err(actual: f64, reference: f64) -> f64 {
    (actual - reference).abs() / reference.abs().max(1.0)
}

/// A random exactly-evaluable cost for oracle comparisons: 2^x, the
/// power-of-two-free cost, a random line, or a random piecewise-linear
/// table (arbitrary shape).
pub fn random_exact_cost(rng: &mut SplitMix64) -> CostFunction {
    match rng.below(4) {
        0 => CostFunction::pow2(),
        1 => CostFunction::p2free(),
        2 => CostFunction::linear_int(rng.below(9) as i64 - 4, rng.below(20) as i64),
        _ => random_table(rng),
    }
}

/// Piecewise-linear table through random points; breakpoints start at 0.
pub fn random_table(rng: &mut SplitMix64) -> CostFunction {
    let pieces = 2 + rng.below(3) as usize;
    let mut x = 0i64;
    let mut breakpoints = Vec::with_capacity(pieces);
    let mut values = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        breakpoints.push(rat(x, 1));
        values.push(rat(rng.below(41) as i64 - 20, 1));
        x += 1 + rng.below(6) as i64;
    }
    CostFunction::table(breakpoints, values).expect("breakpoints are strictly increasing from 0")
}

/// A random strictly non-increasing table cost.
pub fn random_decreasing_table(rng: &mut SplitMix64) -> CostFunction {
    let pieces = 2 + rng.below(3) as usize;
    let mut x = 0i64;
    let mut v = 20 + rng.below(30) as i64;
    let mut breakpoints = Vec::with_capacity(pieces);
    let mut values = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        breakpoints.push(rat(x, 1));
        values.push(rat(v, 1));
        x += 1 + rng.below(6) as i64;
        v -= rng.below(10) as i64;
    }
    let cf = CostFunction::table(breakpoints, values).expect("valid table");
    assert!(cf.flags.non_increasing);
    cf
}
