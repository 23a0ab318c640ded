//! Maximum-value collections of disjoint hyperedges in a subtree hypergraph,
//! computed by a primal–dual sweep over a representative tree.
//!
//! Node potentials `y` start high and are lowered leaf-first, each node as far
//! as dual feasibility inside its subtree allows; a root-first pass then picks
//! the tight hyperedges. The hypergraph is only reached through a
//! [`TighteningOracle`], so it never has to be listed explicitly.

use std::collections::VecDeque;

use crate::digraph::{Digraph, Mode, NodeSet};
use crate::error::{input, Error, Result};
use crate::flownet::lattice_min_cut;
use crate::insolid::RepresentativeTree;
use crate::scalar::Scalar;

/// Answer of a tightening step at node `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tightening<W> {
    /// The hyperedge `e ∋ v` minimizing `y(e) - val(e)` inside the subtree,
    /// with its value; `None` when no hyperedge constrains `v`.
    pub edge: Option<(NodeSet, W)>,
    /// `max(val(e) - y(e - v), 0)`.
    pub new_y: W,
}

pub trait TighteningOracle<W> {
    /// Lowers `y[pin]` as far as feasibility for hyperedges `e` with
    /// `pin ∈ e ⊆ ground` permits. `y` holds the current potentials.
    fn tighten(&mut self, pin: usize, ground: &NodeSet, y: &[W]) -> Result<Tightening<W>>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution<W> {
    /// Potentials indexed by node id; nodes outside the matched ground set are zero.
    pub y: Vec<W>,
}

impl<W: Scalar> DualSolution<W> {
    pub fn sum_over(&self, set: &NodeSet) -> W {
        set.iter().fold(W::zero(), |acc, v| acc + self.y[v].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult<W> {
    pub chosen: Vec<NodeSet>,
    pub value: W,
    pub dual: DualSolution<W>,
}

/// Runs the primal–dual sweep on the subtree of `tree` spanned by `ground`.
///
/// The tree is rooted at the lowest node of `ground` and nodes are ordered
/// breadth-first with children by id. `big` must exceed every hyperedge value
/// the oracle can report. The result satisfies `Σ val(chosen) = Σ y` exactly;
/// a gap, overlapping choices, or a potential the oracle computed wrongly all
/// surface as [`Error::OracleContract`].
pub fn max_weight_matching<W: Scalar, O: TighteningOracle<W>>(
    tree: &RepresentativeTree,
    ground: &NodeSet,
    oracle: &mut O,
    big: W,
) -> Result<MatchingResult<W>> {
    let n = tree.node_count();
    if ground.is_empty() {
        return input("matching over an empty ground set");
    }
    if ground.iter().any(|v| v >= n) {
        return input("ground set outside the tree");
    }
    if !tree.induces_subtree(ground) {
        return input(format!("{} does not induce a subtree", ground));
    }

    let inside = ground.mask(n);
    let root = ground.first().expect("non-empty");
    let mut order = Vec::with_capacity(ground.len());
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::from([root]);
    parent[root] = root;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in tree.neighbors(u) {
            if inside[v] && parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }

    let mut y = vec![W::zero(); n];
    for v in ground.iter() {
        y[v] = big.clone();
    }
    let mut tight: Vec<Option<(NodeSet, W)>> = vec![None; order.len()];
    for i in (0..order.len()).rev() {
        let v = order[i];
        let subtree = descendants(tree, v, &parent, &inside);
        let step = oracle.tighten(v, &subtree, &y)?;
        if step.new_y < W::zero() {
            return Err(Error::OracleContract(format!(
                "negative potential at node {}",
                v
            )));
        }
        match &step.edge {
            Some((e, val)) => {
                if !e.contains(v) || !e.is_subset(&subtree) {
                    return Err(Error::OracleContract(format!(
                        "{} is not a hyperedge at {} in its subtree",
                        e, v
                    )));
                }
                let rest = e
                    .iter()
                    .filter(|&u| u != v)
                    .fold(W::zero(), |acc, u| acc + y[u].clone());
                let expected = val.clone() - rest;
                let expected = if expected > W::zero() {
                    expected
                } else {
                    W::zero()
                };
                if expected != step.new_y {
                    return Err(Error::OracleContract(format!(
                        "potential {} at node {} should be {}",
                        step.new_y, v, expected
                    )));
                }
            }
            None if !step.new_y.is_zero() => {
                return Err(Error::OracleContract(format!(
                    "unconstrained node {} kept a positive potential",
                    v
                )));
            }
            None => {}
        }
        y[v] = step.new_y;
        if y[v] > W::zero() {
            tight[i] = step.edge;
        }
    }

    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    let mut value = W::zero();
    for (i, &v) in order.iter().enumerate() {
        if y[v] > W::zero() && !covered[v] {
            let (e, val) = tight[i]
                .take()
                .expect("positive potentials come with a tight hyperedge");
            if e.iter().any(|u| covered[u]) {
                return Err(Error::OracleContract(format!(
                    "{} overlaps an earlier choice",
                    e
                )));
            }
            for u in e.iter() {
                covered[u] = true;
            }
            value += val;
            chosen.push(e);
        }
    }
    let dual = DualSolution { y };
    let dual_value = dual.sum_over(ground);
    if dual_value != value {
        return Err(Error::OracleContract(format!(
            "duality gap: primal {} vs dual {}",
            value, dual_value
        )));
    }
    Ok(MatchingResult {
        chosen,
        value,
        dual,
    })
}

fn descendants(tree: &RepresentativeTree, v: usize, parent: &[usize], inside: &[bool]) -> NodeSet {
    let mut out = vec![v];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in tree.neighbors(u) {
            if inside[w] && parent[w] == u && w != u {
                out.push(w);
                stack.push(w);
            }
        }
    }
    out.into_iter().collect()
}

/// Oracle over an explicitly listed hypergraph. Meant for small families.
#[derive(Debug, Clone)]
pub struct ExplicitOracle<W> {
    pub edges: Vec<(NodeSet, W)>,
}

impl<W: Scalar> TighteningOracle<W> for ExplicitOracle<W> {
    fn tighten(&mut self, pin: usize, ground: &NodeSet, y: &[W]) -> Result<Tightening<W>> {
        let mut best: Option<(W, &NodeSet, &W)> = None;
        for (e, val) in &self.edges {
            if !e.contains(pin) || !e.is_subset(ground) {
                continue;
            }
            let slack = e.iter().fold(W::zero(), |acc, u| acc + y[u].clone()) - val.clone();
            if best.as_ref().is_none_or(|(s, _, _)| slack < *s) {
                best = Some((slack, e, val));
            }
        }
        Ok(match best {
            None => Tightening {
                edge: None,
                new_y: W::zero(),
            },
            Some((_, e, val)) => {
                let rest = e
                    .iter()
                    .filter(|&u| u != pin)
                    .fold(W::zero(), |acc, u| acc + y[u].clone());
                let new_y = val.clone() - rest;
                let new_y = if new_y > W::zero() { new_y } else { W::zero() };
                Tightening {
                    edge: Some((e.clone(), val.clone())),
                    new_y,
                }
            }
        })
    }
}

/// Oracle for in-solid sets with value `k - ϱ(e)`.
///
/// Adds an outside source with an arc of capacity `y_u` into every `u` of the
/// subtree and takes the minimal minimizer `Z` of `min{ϱ'(Z) : pin ∈ Z ⊆ V_i}`
/// in that augmented digraph. Since `ϱ'(Z) = ϱ(Z) + y(Z)`, `Z` minimizes
/// `y(Z) - (k - ϱ(Z))`, and it is in-solid whenever the new potential stays
/// positive.
pub struct InsolidOracle<'a, W> {
    digraph: &'a Digraph<W>,
    k: W,
    mode: Mode,
}

impl<'a, W: Scalar> InsolidOracle<'a, W> {
    pub fn new(digraph: &'a Digraph<W>, k: u64, mode: Mode) -> Self {
        InsolidOracle {
            digraph,
            k: W::from_count(k),
            mode,
        }
    }

    /// The starting potential: one more than the largest possible value `k`.
    pub fn big(&self) -> W {
        self.k.clone() + W::one()
    }
}

impl<W: Scalar> TighteningOracle<W> for InsolidOracle<'_, W> {
    fn tighten(&mut self, pin: usize, ground: &NodeSet, y: &[W]) -> Result<Tightening<W>> {
        let n = self.digraph.node_count();
        let mask = ground.mask(n);
        let source: Vec<W> = (0..n)
            .map(|u| if mask[u] { y[u].clone() } else { W::zero() })
            .collect();
        let (_, zmask) = lattice_min_cut(self.digraph, self.mode, &[pin], &mask, Some(&source));
        let z = NodeSet::from_mask(&zmask);
        let val = self.k.clone() - self.digraph.indegree_mask(&zmask, self.mode);
        let rest = z
            .iter()
            .filter(|&u| u != pin)
            .fold(W::zero(), |acc, u| acc + y[u].clone());
        let new_y = val.clone() - rest;
        let new_y = if new_y > W::zero() { new_y } else { W::zero() };
        Ok(Tightening {
            edge: Some((z, val)),
            new_y,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::tests::triangle;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::from_iter(v.iter().copied())
    }

    #[test]
    fn empty_family_gives_empty_matching() {
        let tree = RepresentativeTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut oracle = ExplicitOracle::<i64> { edges: vec![] };
        let r = max_weight_matching(&tree, &NodeSet::full(3), &mut oracle, 5).unwrap();
        assert!(r.chosen.is_empty());
        assert_eq!(r.value, 0);
        assert_eq!(r.dual.y, vec![0, 0, 0]);
    }

    #[test]
    fn single_node_single_edge() {
        let tree = RepresentativeTree::new(1, vec![]).unwrap();
        let mut oracle = ExplicitOracle::<i64> {
            edges: vec![(set(&[0]), 1)],
        };
        let r = max_weight_matching(&tree, &set(&[0]), &mut oracle, 2).unwrap();
        assert_eq!(r.chosen, vec![set(&[0])]);
        assert_eq!(r.value, 1);
        assert_eq!(r.dual.y, vec![1]);
    }

    #[test]
    fn triangle_hand_execution() {
        // Triangle with multiplicity 3, k = 4, path tree 0-1-2 rooted at 0.
        let d = triangle(3);
        let tree = RepresentativeTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut oracle = InsolidOracle::new(&d, 4, Mode::Unit);
        let big = oracle.big();
        let r = max_weight_matching(&tree, &d.all_nodes(), &mut oracle, big).unwrap();
        assert_eq!(r.dual.y, vec![2, 1, 1]);
        assert_eq!(r.chosen, vec![d.all_nodes()]);
        assert_eq!(r.value, 4);
    }

    #[test]
    fn insolid_oracle_examples() {
        let d = triangle(3);
        let mut oracle = InsolidOracle::new(&d, 4, Mode::Unit);
        // Leaf {2}: only candidate, new y = 4 - 3.
        let t = oracle.tighten(2, &set(&[2]), &[5, 5, 5]).unwrap();
        assert_eq!(t.edge, Some((set(&[2]), 1)));
        assert_eq!(t.new_y, 1);
        // Root with y(1) = y(2) = 1: Z = V, new y = 4 - 0 - 2.
        let t = oracle.tighten(0, &d.all_nodes(), &[5, 1, 1]).unwrap();
        assert_eq!(t.edge, Some((d.all_nodes(), 4)));
        assert_eq!(t.new_y, 2);
        // In-degree at least k drives the potential to zero.
        let mut low = InsolidOracle::new(&d, 3, Mode::Unit);
        assert_eq!(low.tighten(1, &set(&[1]), &[4, 4, 4]).unwrap().new_y, 0);
    }

    #[test]
    fn lying_oracle_is_caught() {
        struct Liar;
        impl TighteningOracle<i64> for Liar {
            fn tighten(&mut self, pin: usize, _: &NodeSet, _: &[i64]) -> Result<Tightening<i64>> {
                Ok(Tightening {
                    edge: Some((NodeSet::singleton(pin), 1)),
                    new_y: 3,
                })
            }
        }
        let tree = RepresentativeTree::new(1, vec![]).unwrap();
        assert!(matches!(
            max_weight_matching(&tree, &set(&[0]), &mut Liar, 4),
            Err(Error::OracleContract(_))
        ));
    }

    #[test]
    fn rejects_disconnected_ground() {
        let tree = RepresentativeTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut oracle = ExplicitOracle::<i64> { edges: vec![] };
        assert!(max_weight_matching(&tree, &set(&[0, 2]), &mut oracle, 1).is_err());
    }
}
