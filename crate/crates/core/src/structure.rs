//! Recognition of the interval-family shapes that admit fast exact solvers:
//! agreeable families (left and right endpoints sorted the same way),
//! laminar families (any two intervals nested or disjoint), and the
//! decomposition of a family into independent overlap components.

use crate::error::{Error, Result};
use crate::interval::{Instance, Interval, IntervalId};

/// Witness that a family is agreeable: ids listed so that both left and
/// right endpoints are non-decreasing along the list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreeableOrder {
    pub gamma: Vec<IntervalId>,
}

/// Containment forest of a laminar family, indexed by `id - 1`.
///
/// Equal intervals are laminar; by convention the one with the smaller id
/// becomes the parent of the later duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarForest {
    pub parent: Vec<Option<IntervalId>>,
    pub children: Vec<Vec<IntervalId>>,
    pub roots: Vec<IntervalId>,
}

/// Result of laminarity detection: either the containment forest or the ids
/// of a strictly crossing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Laminarity {
    Forest(LaminarForest),
    Violation(IntervalId, IntervalId),
}

fn sorted_ids(inst: &Instance, mut cmp: impl FnMut(&Interval, &Interval) -> std::cmp::Ordering) -> Vec<IntervalId> {
    let mut ids: Vec<IntervalId> = (1..=inst.n() as IntervalId).collect();
    ids.sort_by(|&x, &y| cmp(inst.interval(x), inst.interval(y)));
    ids
}

/// Checks whether sorting by left endpoint also sorts the right endpoints.
/// Ties are broken by right endpoint, then id, so duplicates are handled.
pub fn detect_agreeable(inst: &Instance) -> Option<AgreeableOrder> {
    let gamma = sorted_ids(inst, |p, q| (p.a, p.b, p.id).cmp(&(q.a, q.b, q.id)));
    let ok = gamma
        .windows(2)
        .all(|w| inst.interval(w[0]).b <= inst.interval(w[1]).b);
    ok.then_some(AgreeableOrder { gamma })
}

/// Checks whether every two intervals are nested or disjoint, building the
/// containment forest when they are.
///
/// Intervals are scanned by (left asc, right desc, id asc) with a stack of
/// currently open ancestors, so the whole check is one sorted sweep.
pub fn detect_laminar(inst: &Instance) -> Laminarity {
    let order = sorted_ids(inst, |p, q| (p.a, std::cmp::Reverse(p.b), p.id).cmp(&(q.a, std::cmp::Reverse(q.b), q.id)));
    let n = inst.n();
    let mut parent: Vec<Option<IntervalId>> = vec![None; n];
    let mut children: Vec<Vec<IntervalId>> = vec![Vec::new(); n];
    let mut roots: Vec<IntervalId> = Vec::new();
    let mut stack: Vec<IntervalId> = Vec::new();

    for &id in &order {
        let cur = inst.interval(id);
        loop {
            match stack.last() {
                None => {
                    roots.push(id);
                    break;
                }
                Some(&top_id) => {
                    let top = inst.interval(top_id);
                    if top.contains(cur) {
                        parent[id as usize - 1] = Some(top_id);
                        children[top_id as usize - 1].push(id);
                        break;
                    } else if top.b <= cur.a {
                        stack.pop();
                    } else {
                        return Laminarity::Violation(top_id, id);
                    }
                }
            }
        }
        stack.push(id);
    }
    Laminarity::Forest(LaminarForest { parent, children, roots })
}

/// One overlap component extracted from a larger family: a standalone
/// instance plus the original id of each local interval (`ids[local - 1]`).
#[derive(Clone, Debug)]
pub struct Component {
    pub instance: Instance,
    pub ids: Vec<IntervalId>,
}

/// Splits a family into independent components. Two non-empty intervals are
/// connected when they strictly overlap (sharing only an endpoint does not
/// connect them, but equal intervals do overlap). Empty intervals expose
/// nothing regardless of position, so each becomes its own component.
pub fn split_components(inst: &Instance) -> Vec<Component> {
    let order = sorted_ids(inst, |p, q| (p.a, p.b, p.id).cmp(&(q.a, q.b, q.id)));
    let mut groups: Vec<Vec<IntervalId>> = Vec::new();
    let mut open: Option<(usize, i64)> = None; // (group index, sweep frontier)
    for &id in &order {
        let iv = inst.interval(id);
        if iv.is_empty() {
            groups.push(vec![id]);
            continue;
        }
        match open {
            Some((g, hi)) if iv.a < hi => {
                groups[g].push(id);
                open = Some((g, hi.max(iv.b)));
            }
            _ => {
                groups.push(vec![id]);
                open = Some((groups.len() - 1, iv.b));
            }
        }
    }

    groups
        .into_iter()
        .map(|ids| {
            let spans: Vec<(i64, i64)> = ids
                .iter()
                .map(|&id| {
                    let iv = inst.interval(id);
                    (iv.a, iv.b)
                })
                .collect();
            let instance =
                Instance::with_scale(&spans, inst.cost.clone(), inst.mode, inst.scale)
                    .expect("sub-instance of a valid instance is valid");
            Component { instance, ids }
        })
        .collect()
}

/// Maps a permutation expressed in a component's local ids back to the
/// original instance's ids.
pub fn to_global_order(component: &Component, local_order: &[IntervalId]) -> Vec<IntervalId> {
    local_order
        .iter()
        .map(|&local| component.ids[local as usize - 1])
        .collect()
}

/// Convenience used by solvers that require agreeability up front.
pub fn require_agreeable(inst: &Instance) -> Result<AgreeableOrder> {
    detect_agreeable(inst).ok_or_else(|| {
        Error::Precondition("instance is not agreeable (endpoint orders disagree)".into())
    })
}

/// Convenience used by solvers that require laminarity up front.
pub fn require_laminar(inst: &Instance) -> Result<LaminarForest> {
    match detect_laminar(inst) {
        Laminarity::Forest(f) => Ok(f),
        Laminarity::Violation(i, j) => Err(Error::Precondition(format!(
            "instance is not laminar: intervals {i} and {j} cross"
        ))),
    }
}
