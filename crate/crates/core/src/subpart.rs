//! Optimal subpartitions: unconstrained, at least two members, exactly `t`
//! members, and the two existence tests built on them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::digraph::{Digraph, Mode, NodeSet, Subpartition};
use crate::error::{input, Error, Result};
use crate::flownet::rooted_min_cut;
use crate::insolid::{build_tree, RepresentativeTree};
use crate::matching::{max_weight_matching, InsolidOracle};
use crate::scalar::Scalar;

/// What the stored objective of a [`ValuedSubpartition`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `Σ (k - ϱ(X))`, to be maximized.
    Surplus { k: u64 },
    /// `Σ ϱ(X)`, to be minimized.
    Indegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedSubpartition<W> {
    pub parts: Subpartition,
    pub objective: W,
    pub kind: Objective,
    pub mode: Mode,
}

impl<W: Scalar> ValuedSubpartition<W> {
    pub fn recompute(&self, d: &Digraph<W>) -> Result<W> {
        match self.kind {
            Objective::Surplus { k } => self.parts.surplus(d, &W::from_count(k), self.mode),
            Objective::Indegree => self.parts.indegree_sum(d, self.mode),
        }
    }

    /// Fails unless the stored objective matches a fresh evaluation on `d`.
    pub fn verify(&self, d: &Digraph<W>) -> Result<()> {
        let fresh = self.recompute(d)?;
        if fresh != self.objective {
            return Err(Error::Internal(format!(
                "stored objective {} but parts evaluate to {}",
                self.objective, fresh
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Outcome of an existence test. A negative answer carries the set or
/// subpartition that violates the cut condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<C> {
    Exists,
    Violated(C),
}

impl<C> Verdict<C> {
    pub fn exists(&self) -> bool {
        matches!(self, Verdict::Exists)
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return input("k must be positive");
    }
    Ok(())
}

/// Maximizes `Σ (k - ϱ(X))` over subpartitions of `ground`.
///
/// The empty subpartition (objective 0) is returned exactly when every
/// non-empty subset of `ground` has in-degree at least `k`.
pub fn best_subpart<W: Scalar>(
    d: &Digraph<W>,
    ground: &NodeSet,
    k: u64,
    mode: Mode,
) -> Result<ValuedSubpartition<W>> {
    check_k(k)?;
    if ground.is_empty() {
        return input("best subpartition over an empty ground set");
    }
    d.check_set(ground)?;
    let tree = build_tree(d, mode)?;
    subpart_on_tree(d, &tree, ground, k, mode)
}

/// [`best_subpart`] against a representative tree already built for `d` in `mode`.
pub(crate) fn subpart_on_tree<W: Scalar>(
    d: &Digraph<W>,
    tree: &RepresentativeTree,
    ground: &NodeSet,
    k: u64,
    mode: Mode,
) -> Result<ValuedSubpartition<W>> {
    let mut parts = Vec::new();
    let mut objective = W::zero();
    for component in tree.components(ground) {
        let mut oracle = InsolidOracle::new(d, k, mode);
        let big = oracle.big();
        let result = max_weight_matching(tree, &component, &mut oracle, big)?;
        objective += result.value;
        parts.extend(result.chosen);
    }
    let out = ValuedSubpartition {
        parts: Subpartition::new(parts)?.canonical(),
        objective,
        kind: Objective::Surplus { k },
        mode,
    };
    out.verify(d)?;
    Ok(out)
}

/// Maximizes `Σ (k - ϱ(X))` over subpartitions of `V` with at least two members.
pub fn best_constr_subpart<W: Scalar>(
    d: &Digraph<W>,
    k: u64,
    mode: Mode,
) -> Result<ValuedSubpartition<W>> {
    check_k(k)?;
    if d.node_count() < 2 {
        return input("a subpartition with two members needs at least two nodes");
    }
    let tree = build_tree(d, mode)?;
    let whole = subpart_on_tree(d, &tree, &d.all_nodes(), k, mode)?;
    constr_subpart_on_tree(d, &tree, k, mode, whole)
}

/// The constrained search given the unconstrained optimum `whole` over `V`.
///
/// Each tree edge splits `V` into `V₁, V₂`; the candidates are the two
/// minimum-in-degree sets `{X₁, X₂}` and each side's optimum completed by the
/// other side's minimum set. Ties go to the earliest edge, then candidate.
pub(crate) fn constr_subpart_on_tree<W: Scalar>(
    d: &Digraph<W>,
    tree: &RepresentativeTree,
    k: u64,
    mode: Mode,
    whole: ValuedSubpartition<W>,
) -> Result<ValuedSubpartition<W>> {
    if whole.len() >= 2 {
        return Ok(whole);
    }
    let kw = W::from_count(k);
    let per_edge: Vec<Result<Option<Candidate<W>>>> = (0..tree.edges().len())
        .into_par_iter()
        .map(|i| {
            let (v1, v2) = tree.split(i);
            let x1 = rooted_min_cut(d, &v1, mode)?;
            let x2 = rooted_min_cut(d, &v2, mode)?;
            let p1 = subpart_on_tree(d, tree, &v1, k, mode)?;
            let p2 = subpart_on_tree(d, tree, &v2, k, mode)?;
            let s1 = kw.clone() - x1.value;
            let s2 = kw.clone() - x2.value;
            let mut candidates = vec![(
                s1.clone() + s2.clone(),
                vec![x1.side.clone(), x2.side.clone()],
            )];
            if !p1.is_empty() {
                let mut parts = p1.parts.parts().to_vec();
                parts.push(x2.side);
                candidates.push((p1.objective + s2, parts));
            }
            if !p2.is_empty() {
                let mut parts = p2.parts.parts().to_vec();
                parts.push(x1.side);
                candidates.push((p2.objective + s1, parts));
            }
            Ok(pick_max(candidates))
        })
        .collect();
    let mut candidates = Vec::with_capacity(per_edge.len());
    for r in per_edge {
        candidates.extend(r?);
    }
    let (objective, parts) = pick_max(candidates)
        .ok_or_else(|| Error::Internal("no candidate subpartition with two members".into()))?;
    let out = ValuedSubpartition {
        parts: Subpartition::new(parts)?.canonical(),
        objective,
        kind: Objective::Surplus { k },
        mode,
    };
    out.verify(d)?;
    Ok(out)
}

/// A candidate objective with the parts achieving it.
type Candidate<W> = (W, Vec<NodeSet>);

fn pick_max<W: Scalar, T>(candidates: Vec<(W, T)>) -> Option<(W, T)> {
    let mut best: Option<(W, T)> = None;
    for c in candidates {
        if best.as_ref().is_none_or(|b| c.0 > b.0) {
            best = Some(c);
        }
    }
    best
}

/// Minimizes `Σ ϱ(X)` over subpartitions of `V` with exactly `t ≥ 2` members.
pub fn best_fixed_subpart<W: Scalar>(
    d: &Digraph<W>,
    mode: Mode,
    t: usize,
) -> Result<ValuedSubpartition<W>> {
    if t < 2 {
        return input("exact subpartition size must be at least 2");
    }
    fixed_subpart(d, mode, t)
}

/// [`best_fixed_subpart`] without the lower bound on `t`.
///
/// Every optimum may be taken in-solid, and `t` disjoint in-solid sets are
/// separated by some `t - 1` edges of the representative tree, so it suffices
/// to try each such edge set and take the cheapest non-empty set inside each
/// resulting component. Edge sets go in lexicographic order and a partial sum
/// that reaches the incumbent abandons the edge set.
pub(crate) fn fixed_subpart<W: Scalar>(
    d: &Digraph<W>,
    mode: Mode,
    t: usize,
) -> Result<ValuedSubpartition<W>> {
    let n = d.node_count();
    if t == 0 {
        return input("exact subpartition size must be positive");
    }
    if t > n {
        return Err(Error::Infeasible(format!(
            "no subpartition of {} nodes has {} members",
            n, t
        )));
    }
    let tree = build_tree(d, mode)?;
    let mut cache: HashMap<NodeSet, (W, NodeSet)> = HashMap::new();
    let mut best: Option<(W, Vec<NodeSet>)> = None;
    let mut chosen: Vec<usize> = (0..t - 1).collect();
    let m = tree.edges().len();
    loop {
        let mut sum = W::zero();
        let mut parts = Vec::with_capacity(t);
        let mut pruned = false;
        for component in tree.components_without(&chosen) {
            if !cache.contains_key(&component) {
                let cut = rooted_min_cut(d, &component, mode)?;
                cache.insert(component.clone(), (cut.value, cut.side));
            }
            let (value, side) = &cache[&component];
            sum += value.clone();
            parts.push(side.clone());
            if best.as_ref().is_some_and(|(b, _)| sum >= *b) {
                pruned = true;
                break;
            }
        }
        if !pruned {
            best = Some((sum, parts));
        }
        if !next_combination(&mut chosen, m) {
            break;
        }
    }
    let (objective, parts) = best.expect("at least one edge subset");
    let out = ValuedSubpartition {
        parts: Subpartition::new(parts)?.canonical(),
        objective,
        kind: Objective::Indegree,
        mode,
    };
    out.verify(d)?;
    Ok(out)
}

/// Advances a sorted index combination drawn from `0..m`; false after the last.
pub(crate) fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    for i in (0..r).rev() {
        if idx[i] < m - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Whether `d` contains `k` arc-disjoint spanning arborescences rooted at `r`.
/// A negative answer carries a minimal non-empty `X ⊆ V - r` with `ϱ(X) < k`.
pub fn exists_k_union_r_arb<W: Scalar>(
    d: &Digraph<W>,
    r: usize,
    k: u64,
) -> Result<Verdict<NodeSet>> {
    check_k(k)?;
    d.check_node(r)?;
    if d.node_count() == 1 {
        return Ok(Verdict::Exists);
    }
    let cut = rooted_min_cut(d, &d.all_nodes().without(r), Mode::Unit)?;
    Ok(if cut.value >= W::from_count(k) {
        Verdict::Exists
    } else {
        Verdict::Violated(cut.side)
    })
}

/// Whether `d` contains `k` arc-disjoint spanning arborescences with any roots.
/// A negative answer carries a subpartition with `Σ ϱ(X) < k(|𝒳| - 1)`.
pub fn exists_k_union_arb<W: Scalar>(d: &Digraph<W>, k: u64) -> Result<Verdict<Subpartition>> {
    check_k(k)?;
    let tree = build_tree(d, Mode::Unit)?;
    let whole = subpart_on_tree(d, &tree, &d.all_nodes(), k, Mode::Unit)?;
    Ok(verdict_from_best(whole))
}

pub(crate) fn verdict_from_best<W: Scalar>(whole: ValuedSubpartition<W>) -> Verdict<Subpartition> {
    let Objective::Surplus { k } = whole.kind else {
        unreachable!("existence is decided on a surplus objective")
    };
    if whole.objective > W::from_count(k) {
        Verdict::Violated(whole.parts)
    } else {
        Verdict::Exists
    }
}
