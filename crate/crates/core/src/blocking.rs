//! Minimum blocking arc sets for k-union-arborescences and
//! k-union-r-arborescences, plus the reductions between the rooted and
//! unrooted minimum-cost variants.
//!
//! Every solver returns the removed arc units together with a certificate:
//! a subpartition violating `Σ ϱ(X) ≥ k(|𝒳| - 1)` in `D - H`, or a set
//! `X ⊆ V - r` with `ϱ(X) < k` in `D - H`.

use rayon::prelude::*;

use crate::digraph::{ArcSelection, Digraph, Mode, NodeSet, Subpartition};
use crate::error::{input, Error, Result};
use crate::flownet::rooted_min_cut;
use crate::insolid::build_tree;
use crate::scalar::Scalar;
use crate::subpart::{
    constr_subpart_on_tree, fixed_subpart, subpart_on_tree, verdict_from_best, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Frank-violating subpartition of `D - H`.
    Subpartition(Subpartition),
    /// Edmonds-violating set of `D - H`.
    Set(NodeSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingResult<W> {
    pub removed: ArcSelection,
    /// Number of removed units, or their weight for the weighted solvers.
    pub total: W,
    pub certificate: Certificate,
    pub k: u64,
    pub root: Option<usize>,
    pub mode: Mode,
}

impl<W: Scalar> BlockingResult<W> {
    /// Checks `total` against `removed` and that the certificate is violated
    /// in `d - removed`.
    pub fn verify(&self, d: &Digraph<W>) -> Result<()> {
        let rest = d.remove(&self.removed)?;
        let total = self.removed.total(d, self.mode);
        if total != self.total {
            return Err(Error::Internal(format!(
                "reported total {} but removed arcs sum to {}",
                self.total, total
            )));
        }
        let k = W::from_count(self.k);
        match (&self.certificate, self.root) {
            (Certificate::Set(x), Some(r)) => {
                if x.is_empty() || x.contains(r) {
                    return Err(Error::Internal(format!(
                        "{} is not a non-empty set avoiding the root",
                        x
                    )));
                }
                let cut = rest.indegree(x, Mode::Unit)?;
                if cut >= k {
                    return Err(Error::Internal(format!(
                        "{} still has in-degree {} after removal",
                        x, cut
                    )));
                }
            }
            (Certificate::Subpartition(parts), None) => {
                let lhs = parts.indegree_sum(&rest, Mode::Unit)?;
                let rhs = W::from_count(self.k * (parts.len() as u64).saturating_sub(1));
                if lhs >= rhs {
                    return Err(Error::Internal(format!(
                        "subpartition has in-degree sum {} against bound {}",
                        lhs, rhs
                    )));
                }
            }
            _ => {
                return Err(Error::Internal(
                    "certificate kind does not match the problem".into(),
                ))
            }
        }
        Ok(())
    }
}

fn check_blockable<W: Scalar>(d: &Digraph<W>, k: u64, what: &str) -> Result<()> {
    if k == 0 {
        return input("k must be positive");
    }
    if d.node_count() < 2 {
        return Err(Error::Unblockable(format!(
            "{}-union-{} of a single-node digraph",
            k, what
        )));
    }
    Ok(())
}

/// Arc units entering some part, as (record, units) in record order.
fn entering_units<W: Scalar>(d: &Digraph<W>, parts: &[NodeSet]) -> Vec<(usize, u64)> {
    let n = d.node_count();
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for v in p.iter() {
            owner[v] = i;
        }
    }
    d.arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| owner[a.head] != usize::MAX && owner[a.tail] != owner[a.head])
        .map(|(i, a)| (i, a.multiplicity))
        .collect()
}

/// Removes every entering unit except the first `keep` in record order.
fn remove_all_but(entering: &[(usize, u64)], mut keep: u64) -> ArcSelection {
    let mut removed = ArcSelection::new();
    for &(r, m) in entering {
        let kept = keep.min(m);
        keep -= kept;
        removed.add(r, m - kept);
    }
    removed
}

/// Minimum number of arc units whose removal leaves no k-union-arborescence.
pub fn block_karb_cardinality<W: Scalar>(d: &Digraph<W>, k: u64) -> Result<BlockingResult<W>> {
    check_blockable(d, k, "arborescence")?;
    let tree = build_tree(d, Mode::Unit)?;
    let whole = subpart_on_tree(d, &tree, &d.all_nodes(), k, Mode::Unit)?;
    let finish = |removed: ArcSelection, total: W, parts: Subpartition| {
        let out = BlockingResult {
            removed,
            total,
            certificate: Certificate::Subpartition(parts),
            k,
            root: None,
            mode: Mode::Unit,
        };
        out.verify(d)?;
        Ok(out)
    };
    if let Verdict::Violated(parts) = verdict_from_best(whole.clone()) {
        return finish(ArcSelection::new(), W::zero(), parts);
    }
    let best = constr_subpart_on_tree(d, &tree, k, Mode::Unit, whole)?;
    let parts = best.parts;
    let members = parts.len() as u64;
    let keep = k * (members - 1) - 1;
    let total = W::from_count(k + 1) - best.objective;
    let indegree = parts.indegree_sum(d, Mode::Unit)?;
    if total != indegree - W::from_count(keep) {
        return Err(Error::Internal(format!(
            "blocking total {} disagrees with the subpartition's in-degree",
            total
        )));
    }
    let removed = remove_all_but(&entering_units(d, parts.parts()), keep);
    finish(removed, total, parts)
}

/// Minimum number of arc units whose removal leaves no k-union-r-arborescence:
/// all but `k - 1` units entering a minimum cut.
pub fn block_krarb_uniform<W: Scalar>(
    d: &Digraph<W>,
    r: usize,
    k: u64,
) -> Result<BlockingResult<W>> {
    check_blockable(d, k, "r-arborescence")?;
    d.check_node(r)?;
    let cut = rooted_min_cut(d, &d.all_nodes().without(r), Mode::Unit)?;
    let kw = W::from_count(k);
    let (removed, total) = if cut.value < kw {
        (ArcSelection::new(), W::zero())
    } else {
        let removed = remove_all_but(&entering_units(d, std::slice::from_ref(&cut.side)), k - 1);
        let total = cut.value - (kw - W::one());
        (removed, total)
    };
    let out = BlockingResult {
        removed,
        total,
        certificate: Certificate::Set(cut.side),
        k,
        root: Some(r),
        mode: Mode::Unit,
    };
    out.verify(d)?;
    Ok(out)
}

/// Minimum-weight arc units whose removal leaves no k-union-r-arborescence.
///
/// Arcs entering `r` never matter and are set aside. For every choice `E` of
/// `k - 1` surviving units, the cheapest cut of `D - E` over `V - r` is
/// removed in full; the best choice wins, earliest `E` on ties.
pub fn block_krarb_weighted<W: Scalar>(
    d: &Digraph<W>,
    r: usize,
    k: u64,
) -> Result<BlockingResult<W>> {
    check_blockable(d, k, "r-arborescence")?;
    d.check_node(r)?;
    let outside = d.all_nodes().without(r);
    let kept_records: Vec<usize> = (0..d.arcs().len())
        .filter(|&i| d.arc(i).head != r)
        .collect();
    let base = d.without_arcs_entering(r);
    let finish = |removed: ArcSelection, total: W, side: NodeSet| {
        let out = BlockingResult {
            removed,
            total,
            certificate: Certificate::Set(side),
            k,
            root: Some(r),
            mode: Mode::Weighted,
        };
        out.verify(d)?;
        Ok(out)
    };
    let cut = rooted_min_cut(&base, &outside, Mode::Unit)?;
    if cut.value < W::from_count(k) {
        return finish(ArcSelection::new(), W::zero(), cut.side);
    }
    let mults: Vec<u64> = base.arcs().iter().map(|a| a.multiplicity).collect();
    let subsets = unit_subsets(&mults, k - 1);
    let candidates: Vec<Result<(W, ArcSelection, NodeSet)>> = subsets
        .par_iter()
        .map(|e| {
            let (rest, map) = base.remove_with_map(&selection_of(e));
            let cut = rooted_min_cut(&rest, &outside, Mode::Weighted)?;
            let h = remove_all_but(&entering_units(&rest, std::slice::from_ref(&cut.side)), 0);
            Ok((cut.value, h.mapped(&map).mapped(&kept_records), cut.side))
        })
        .collect();
    let (total, removed, side) = first_min(candidates)?.expect("at least one unit subset");
    finish(removed, total, side)
}

/// Minimum-weight arc units whose removal leaves no k-union-arborescence.
///
/// An optimal blocker leaves a subpartition of `2..=k+1` members with exactly
/// `k(|𝒳| - 1) - 1` units entering it. So for every size `t` and every choice
/// `E` of that many surviving units, the cheapest `t`-member subpartition of
/// `D - E` gives a candidate; everything entering it, outside `E`, is removed.
pub fn block_karb_weighted<W: Scalar>(d: &Digraph<W>, k: u64) -> Result<BlockingResult<W>> {
    check_blockable(d, k, "arborescence")?;
    let finish = |removed: ArcSelection, total: W, parts: Subpartition| {
        let out = BlockingResult {
            removed,
            total,
            certificate: Certificate::Subpartition(parts),
            k,
            root: None,
            mode: Mode::Weighted,
        };
        out.verify(d)?;
        Ok(out)
    };
    let tree = build_tree(d, Mode::Unit)?;
    let whole = subpart_on_tree(d, &tree, &d.all_nodes(), k, Mode::Unit)?;
    if let Verdict::Violated(parts) = verdict_from_best(whole) {
        return finish(ArcSelection::new(), W::zero(), parts);
    }
    let mults: Vec<u64> = d.arcs().iter().map(|a| a.multiplicity).collect();
    let units = d.unit_count();
    let mut jobs: Vec<(usize, Vec<u64>)> = Vec::new();
    for t in 2..=(k as usize + 1).min(d.node_count()) {
        let size = k * (t as u64 - 1) - 1;
        if size <= units {
            jobs.extend(unit_subsets(&mults, size).into_iter().map(|e| (t, e)));
        }
    }
    let candidates: Vec<Result<(W, ArcSelection, Subpartition)>> = jobs
        .par_iter()
        .map(|(t, e)| {
            let (rest, map) = d.remove_with_map(&selection_of(e));
            let best = fixed_subpart(&rest, Mode::Weighted, *t)?;
            let h = remove_all_but(&entering_units(&rest, best.parts.parts()), 0);
            Ok((best.objective, h.mapped(&map), best.parts))
        })
        .collect();
    let (_, mut removed, parts) = first_min(candidates)?
        .ok_or_else(|| Error::Internal("no candidate subpartition size".into()))?;

    // Put back the cheapest removed units until exactly k(|𝒳| - 1) - 1 enter the parts.
    let target = k * (parts.len() as u64 - 1) - 1;
    let mut left = d.remove(&removed)?;
    let mut entering = parts.indegree_sum(&left, Mode::Unit)?;
    let mut order: Vec<(W, usize)> = removed
        .iter()
        .map(|(r, _)| (d.arc(r).weight.clone(), r))
        .collect();
    order.sort();
    for (_, r) in order {
        while entering < W::from_count(target) && removed.count(r) > 0 {
            removed.take(r, 1);
            entering += W::one();
        }
    }
    left = d.remove(&removed)?;
    if parts.indegree_sum(&left, Mode::Unit)? != W::from_count(target) {
        return Err(Error::Internal(
            "could not restore the certificate to its tight size".into(),
        ));
    }
    let total = removed.total(d, Mode::Weighted);
    finish(removed, total, parts)
}

/// Earliest candidate with the smallest value.
fn first_min<W: Scalar, A, B>(candidates: Vec<Result<(W, A, B)>>) -> Result<Option<(W, A, B)>> {
    let mut best: Option<(W, A, B)> = None;
    for c in candidates {
        let c = c?;
        if best.as_ref().is_none_or(|b| c.0 < b.0) {
            best = Some(c);
        }
    }
    Ok(best)
}

fn selection_of(counts: &[u64]) -> ArcSelection {
    let mut s = ArcSelection::new();
    for (r, &c) in counts.iter().enumerate() {
        s.add(r, c);
    }
    s
}

/// Every way to pick `size` arc units from records with the given
/// multiplicities, as per-record counts. Units of one record are
/// interchangeable, so each multiset appears once. Lexicographic order with
/// larger counts on earlier records first.
pub fn unit_subsets(mults: &[u64], size: u64) -> Vec<Vec<u64>> {
    fn go(
        mults: &[u64],
        suffix: &[u64],
        i: usize,
        left: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == mults.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if suffix[i] < left {
            return;
        }
        for c in (0..=mults[i].min(left)).rev() {
            cur.push(c);
            go(mults, suffix, i + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut suffix = vec![0u64; mults.len() + 1];
    for i in (0..mults.len()).rev() {
        suffix[i] = suffix[i + 1] + mults[i];
    }
    let mut out = Vec::new();
    go(
        mults,
        &suffix,
        0,
        size,
        &mut Vec::with_capacity(mults.len()),
        &mut out,
    );
    out
}

/// Turns a rooted instance into an unrooted one by deleting the arcs entering `r`.
pub fn reduce_rooted_to_unrooted<W: Scalar>(d: &Digraph<W>, r: usize) -> Result<Digraph<W>> {
    d.check_node(r)?;
    Ok(d.without_arcs_entering(r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedReduction<W> {
    pub digraph: Digraph<W>,
    pub root: usize,
    /// Cost of each new arc: total cost of the original arcs plus one.
    pub new_arc_cost: W,
    /// Weight of each new arc: total weight of the original arcs plus one.
    pub new_arc_weight: W,
    /// Index of the first new arc record; the new records follow in node order.
    pub first_new_record: usize,
}

/// Turns a minimum-cost unrooted instance into a rooted one: a new root `r`
/// with `k` parallel arcs to every original node, each too costly to use more
/// than `k` of and too heavy to be worth removing. Missing costs count as zero.
pub fn reduce_unrooted_to_rooted<W: Scalar>(d: &Digraph<W>, k: u64) -> Result<RootedReduction<W>> {
    if k == 0 {
        return input("k must be positive");
    }
    let mut cost = W::one();
    let mut weight = W::one();
    for a in d.arcs() {
        let m = W::from_count(a.multiplicity);
        if let Some(c) = &a.cost {
            cost += m.clone() * c.clone();
        }
        weight += m * a.weight.clone();
    }
    let mut out = d.clone();
    let root = out.add_node();
    let first_new_record = out.arcs().len();
    for v in 0..d.node_count() {
        out.add_costed_arc(root, v, k, weight.clone(), cost.clone())?;
    }
    Ok(RootedReduction {
        digraph: out,
        root,
        new_arc_cost: cost,
        new_arc_weight: weight,
        first_new_record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::tests::triangle;

    fn star() -> Digraph<i64> {
        let mut d = Digraph::new(3);
        d.add_arc(0, 1, 1, 1).unwrap();
        d.add_arc(0, 2, 1, 1).unwrap();
        d
    }

    #[test]
    fn cardinality_examples() {
        let r = block_karb_cardinality(&triangle(3), 4).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.removed.unit_count(), 2);
        assert_eq!(block_karb_cardinality(&triangle(1), 1).unwrap().total, 2);
        let r = block_karb_cardinality(&triangle(1), 2).unwrap();
        assert_eq!(r.total, 0);
        assert!(r.removed.is_empty());
        assert!(matches!(
            block_karb_cardinality(&Digraph::<i64>::new(1), 1),
            Err(Error::Unblockable(_))
        ));
    }

    #[test]
    fn rooted_uniform_examples() {
        assert_eq!(block_krarb_uniform(&star(), 0, 1).unwrap().total, 1);
        let r = block_krarb_uniform(&triangle(3), 0, 2).unwrap();
        assert_eq!((r.total, r.removed.unit_count()), (2, 2));
        assert_eq!(block_krarb_uniform(&triangle(3), 0, 4).unwrap().total, 0);
    }

    #[test]
    fn rooted_weighted_examples() {
        let mut d: Digraph<i64> = Digraph::new(2);
        d.add_arc(0, 1, 1, 1).unwrap();
        d.add_arc(0, 1, 1, 5).unwrap();
        let r = block_krarb_weighted(&d, 0, 2).unwrap();
        assert_eq!(r.total, 1);
        assert_eq!(r.removed.iter().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(block_krarb_weighted(&d, 0, 1).unwrap().total, 6);
        assert_eq!(block_krarb_weighted(&d, 0, 3).unwrap().total, 0);
    }

    #[test]
    fn rooted_weighted_ignores_arcs_into_root() {
        let mut d = star();
        d.add_arc(1, 0, 4, 1).unwrap();
        let r = block_krarb_weighted(&d, 0, 1).unwrap();
        assert_eq!(r.total, 1);
        assert_eq!(r.removed.count(2), 0);
    }

    #[test]
    fn unrooted_weighted_examples() {
        let r = block_karb_weighted(&triangle(1), 1).unwrap();
        assert_eq!(r.total, 2);
        let r = block_karb_weighted(&triangle(3), 4).unwrap();
        assert_eq!(r.total, 2);
        match &r.certificate {
            Certificate::Subpartition(p) => assert!((2..=5).contains(&p.len())),
            other => panic!("unexpected certificate {:?}", other),
        }
        assert_eq!(block_karb_weighted(&triangle(1), 2).unwrap().total, 0);
    }

    #[test]
    fn unit_subset_enumeration() {
        assert_eq!(unit_subsets(&[2, 1], 2), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(unit_subsets(&[1, 1], 0), vec![vec![0, 0]]);
        assert!(unit_subsets(&[1], 2).is_empty());
        assert_eq!(unit_subsets(&[3, 3, 3], 4).len(), 12);
    }

    #[test]
    fn reductions() {
        let mut d = star();
        d.add_arc(1, 0, 1, 1).unwrap();
        let u = reduce_rooted_to_unrooted(&d, 0).unwrap();
        assert_eq!(u.arcs().len(), 2);
        assert_eq!(reduce_rooted_to_unrooted(&star(), 0).unwrap(), star());

        let red = reduce_unrooted_to_rooted(&star(), 2).unwrap();
        assert_eq!(red.new_arc_cost, 1);
        assert_eq!(red.new_arc_weight, 3);
        assert_eq!(red.root, 3);
        assert_eq!(red.digraph.arcs().len(), 5);
        assert!(red.digraph.arcs()[red.first_new_record..]
            .iter()
            .all(|a| a.tail == 3 && a.multiplicity == 2));
    }
}
