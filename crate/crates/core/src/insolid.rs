//! In-solid sets and their representative tree.
//!
//! A non-empty `X` is in-solid when every non-empty proper subset has strictly
//! larger in-degree. The family of in-solid sets is a subtree hypergraph: some
//! spanning tree on the nodes makes every in-solid set induce a subtree. That
//! tree drives the matching and subpartition algorithms.
//!
//! Two enumerations are provided. [`enumerate_insolid`] scans every subset of
//! a small ground set from an in-degree table and serves as the reference.
//! [`insolid_family`] finds the same family with minimum cuts, branching only
//! where an in-solid set can still exist, and is what [`build_tree`] uses.

use crate::digraph::{Digraph, Mode, NodeSet};
use crate::error::{input, Error, Result};
use crate::flownet::lattice_min_cut;
use crate::scalar::Scalar;

/// Largest ground set [`enumerate_insolid`] scans.
pub const ENUMERATION_CAP: usize = 14;

/// Search nodes [`insolid_family`] may visit before giving up.
pub const SEARCH_BUDGET: usize = 2_000_000;

/// Exhaustive tree search in [`build_tree`] is only attempted up to this size.
const EXHAUSTIVE_TREE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeTree {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl RepresentativeTree {
    /// Validates that `edges` form a spanning tree on `0..node_count`.
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return input("tree on zero nodes");
        }
        if edges.len() + 1 != node_count {
            return input(format!(
                "{} edges cannot span {} nodes",
                edges.len(),
                node_count
            ));
        }
        let mut uf = UnionFind::new(node_count);
        let mut adjacency = vec![Vec::new(); node_count];
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= node_count || v >= node_count || u == v {
                return input(format!("invalid tree edge {}-{}", u, v));
            }
            if !uf.union(u, v) {
                return input(format!("tree edge {}-{} closes a cycle", u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalized.push((u.min(v), u.max(v)));
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(RepresentativeTree {
            node_count,
            edges: normalized,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// True iff `set` is empty or induces a connected subgraph.
    pub fn induces_subtree(&self, set: &NodeSet) -> bool {
        if set.is_empty() {
            return true;
        }
        let inside = set.mask(self.node_count);
        let internal = self
            .edges
            .iter()
            .filter(|&&(u, v)| inside[u] && inside[v])
            .count();
        internal + 1 == set.len()
    }

    /// Connected components of the forest induced by `within`, ordered by
    /// their smallest node.
    pub fn components(&self, within: &NodeSet) -> Vec<NodeSet> {
        let inside = within.mask(self.node_count);
        self.components_where(&inside, |_| true)
    }

    /// Components of the tree after deleting the edges with the given indices.
    pub fn components_without(&self, removed: &[usize]) -> Vec<NodeSet> {
        let cut: Vec<(usize, usize)> = removed.iter().map(|&i| self.edges[i]).collect();
        let all = vec![true; self.node_count];
        self.components_where(&all, |e| !cut.contains(&e))
    }

    /// The two sides of the tree after deleting edge `index`; the first
    /// contains the edge's smaller endpoint.
    pub fn split(&self, index: usize) -> (NodeSet, NodeSet) {
        let comps = self.components_without(&[index]);
        let (u, _) = self.edges[index];
        if comps[0].contains(u) {
            (comps[0].clone(), comps[1].clone())
        } else {
            (comps[1].clone(), comps[0].clone())
        }
    }

    fn components_where(
        &self,
        inside: &[bool],
        keep: impl Fn((usize, usize)) -> bool,
    ) -> Vec<NodeSet> {
        let mut seen = vec![false; self.node_count];
        let mut out = Vec::new();
        for start in 0..self.node_count {
            if !inside[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adjacency[u] {
                    if inside[v] && !seen[v] && keep((u.min(v), u.max(v))) {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn mask_eq(mask: &[bool], set: &NodeSet) -> bool {
    mask.iter().filter(|&&b| b).count() == set.len() && set.iter().all(|v| mask[v])
}

/// Cut-based test: `X` is in-solid iff for every `v ∈ X` the minimal minimizer
/// of `min{ϱ(Y) : v ∈ Y ⊆ X}` is `X` itself.
pub fn is_insolid<W: Scalar>(d: &Digraph<W>, set: &NodeSet, mode: Mode) -> Result<bool> {
    if set.is_empty() {
        return input("in-solidity of the empty set");
    }
    d.check_set(set)?;
    Ok(insolid_unchecked(d, set, mode, None))
}

fn insolid_unchecked<W: Scalar>(
    d: &Digraph<W>,
    set: &NodeSet,
    mode: Mode,
    singles: Option<&[W]>,
) -> bool {
    if set.len() == 1 {
        return true;
    }
    let n = d.node_count();
    let mask = set.mask(n);
    if let Some(singles) = singles {
        let own = d.indegree_mask(&mask, mode);
        if set.iter().any(|v| singles[v] <= own) {
            return false;
        }
    }
    set.iter().all(|v| {
        let (_, side) = lattice_min_cut(d, mode, &[v], &mask, None);
        mask_eq(&side, set)
    })
}

/// An in-solid subset of `set` whose in-degree is at most that of `set`.
///
/// Descends through pinned minimal minimizers: while some `v ∈ X` has a
/// minimal minimizer of `min{ϱ(Y) : v ∈ Y ⊆ X}` other than `X`, replace `X` by
/// it (lowest such `v` first).
pub fn shrink_to_insolid<W: Scalar>(d: &Digraph<W>, set: &NodeSet, mode: Mode) -> Result<NodeSet> {
    if set.is_empty() {
        return input("cannot shrink the empty set");
    }
    d.check_set(set)?;
    let n = d.node_count();
    let mut current = set.clone();
    'descend: loop {
        let mask = current.mask(n);
        for v in current.clone().iter() {
            let (_, side) = lattice_min_cut(d, mode, &[v], &mask, None);
            if !mask_eq(&side, &current) {
                current = NodeSet::from_mask(&side);
                continue 'descend;
            }
        }
        return Ok(current);
    }
}

/// Every in-solid set inside `ground`, by size then lexicographically.
/// Scans all `2^|ground|` subsets, so `ground` is capped at [`ENUMERATION_CAP`].
pub fn enumerate_insolid<W: Scalar>(
    d: &Digraph<W>,
    ground: &NodeSet,
    mode: Mode,
) -> Result<Vec<NodeSet>> {
    enumerate_insolid_capped(d, ground, mode, ENUMERATION_CAP)
}

pub fn enumerate_insolid_capped<W: Scalar>(
    d: &Digraph<W>,
    ground: &NodeSet,
    mode: Mode,
    cap: usize,
) -> Result<Vec<NodeSet>> {
    d.check_set(ground)?;
    let p = ground.len();
    if p > cap {
        return Err(Error::Capacity(format!(
            "in-solid enumeration over {} nodes exceeds the cap of {}; use the cut-based family search",
            p, cap
        )));
    }
    let members: Vec<usize> = ground.iter().collect();
    let n = d.node_count();
    let full = 1usize << p;
    let to_mask = |bits: usize| {
        let mut m = vec![false; n];
        for (i, &v) in members.iter().enumerate() {
            if bits >> i & 1 == 1 {
                m[v] = true;
            }
        }
        m
    };
    let indeg: Vec<W> = (0..full)
        .map(|bits| d.indegree_mask(&to_mask(bits), mode))
        .collect();
    // least[b]: minimum in-degree over the non-empty subsets of b (b included).
    let mut least: Vec<Option<W>> = vec![None; full];
    let mut out = Vec::new();
    for bits in 1..full {
        let mut proper: Option<W> = None;
        for i in 0..p {
            if bits >> i & 1 == 1 {
                if let Some(v) = &least[bits ^ (1 << i)] {
                    if proper.as_ref().is_none_or(|p| v < p) {
                        proper = Some(v.clone());
                    }
                }
            }
        }
        let own = indeg[bits].clone();
        if proper.as_ref().is_none_or(|p| *p > own) {
            out.push(NodeSet::from_mask(&to_mask(bits)));
        }
        least[bits] = Some(match proper {
            Some(p) if p < own => p,
            _ => own,
        });
    }
    for set in &out {
        if !insolid_unchecked(d, set, mode, None) {
            return Err(Error::Internal(format!(
                "subset scan and cut test disagree on {}",
                set
            )));
        }
    }
    out.sort();
    Ok(out)
}

/// Every in-solid set of `d`, found with minimum cuts.
///
/// Each set is reported once, from the search pinned at its smallest node.
/// A search state fixes `required ⊆ X` and excludes some nodes; every in-solid
/// set of the state lies inside the minimal minimizer `Z` of the state's cut
/// problem, so the state either yields `Z` or branches on which node of
/// `Z ∖ required` is missing. A state stops once its cut value reaches the
/// in-degree of `required` or of one of its nodes, since a larger in-solid
/// set would need strictly smaller in-degree than both.
pub fn insolid_family<W: Scalar>(d: &Digraph<W>, mode: Mode) -> Result<Vec<NodeSet>> {
    insolid_family_budget(d, mode, SEARCH_BUDGET)
}

pub fn insolid_family_budget<W: Scalar>(
    d: &Digraph<W>,
    mode: Mode,
    budget: usize,
) -> Result<Vec<NodeSet>> {
    let n = d.node_count();
    let singles: Vec<W> = (0..n)
        .map(|v| {
            let mut m = vec![false; n];
            m[v] = true;
            d.indegree_mask(&m, mode)
        })
        .collect();
    let mut search = FamilySearch {
        d,
        mode,
        singles,
        found: Vec::new(),
        visited: 0,
        budget,
    };
    for v in 0..n {
        let mut excluded = vec![false; n];
        excluded[..v].fill(true);
        search.explore(vec![v], excluded)?;
    }
    let mut found = search.found;
    found.sort();
    found.dedup();
    Ok(found)
}

struct FamilySearch<'a, W> {
    d: &'a Digraph<W>,
    mode: Mode,
    singles: Vec<W>,
    found: Vec<NodeSet>,
    visited: usize,
    budget: usize,
}

impl<W: Scalar> FamilySearch<'_, W> {
    fn explore(&mut self, required: Vec<usize>, excluded: Vec<bool>) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Capacity(format!(
                "in-solid search exceeded {} states",
                self.budget
            )));
        }
        let n = self.d.node_count();
        let ground: Vec<bool> = excluded.iter().map(|&x| !x).collect();
        let (value, zmask) = lattice_min_cut(self.d, self.mode, &required, &ground, None);
        let z = NodeSet::from_mask(&zmask);
        if insolid_unchecked(self.d, &z, self.mode, Some(&self.singles)) {
            self.found.push(z.clone());
        }

        let req_set: NodeSet = required.iter().copied().collect();
        let mut bound = self.d.indegree_mask(&req_set.mask(n), self.mode);
        for &w in &required {
            if self.singles[w] < bound {
                bound = self.singles[w].clone();
            }
        }
        if value >= bound {
            if z.len() != req_set.len()
                && insolid_unchecked(self.d, &req_set, self.mode, Some(&self.singles))
            {
                self.found.push(req_set);
            }
            return Ok(());
        }

        let mut base = excluded;
        for v in 0..n {
            if !zmask[v] {
                base[v] = true;
            }
        }
        let mut req = required;
        for v in z.iter().filter(|v| !req_set.contains(*v)) {
            let mut ex = base.clone();
            ex[v] = true;
            self.explore(req.clone(), ex)?;
            req.push(v);
        }
        Ok(())
    }
}

/// Builds a representative tree for the in-solid sets of `d`.
pub fn build_tree<W: Scalar>(d: &Digraph<W>, mode: Mode) -> Result<RepresentativeTree> {
    Ok(build_tree_with_family(d, mode)?.0)
}

/// [`build_tree`] together with the in-solid family it was verified against.
pub fn build_tree_with_family<W: Scalar>(
    d: &Digraph<W>,
    mode: Mode,
) -> Result<(RepresentativeTree, Vec<NodeSet>)> {
    let family = insolid_family(d, mode)?;
    let tree = tree_for_family(d.node_count(), &family)?;
    Ok((tree, family))
}

/// A spanning tree in which every member of `family` induces a subtree.
///
/// Takes a maximum-weight spanning tree of the co-occurrence graph (edge
/// weight: number of members containing both endpoints), ties broken by the
/// smaller endpoint pair. If the result fails verification and the node set
/// is small, every spanning tree is tried.
pub fn tree_for_family(node_count: usize, family: &[NodeSet]) -> Result<RepresentativeTree> {
    if node_count == 0 {
        return input("tree on zero nodes");
    }
    let mut weight = vec![vec![0u64; node_count]; node_count];
    for set in family.iter().filter(|s| s.len() >= 2) {
        let members = set.as_slice();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                weight[u][v] += 1;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..node_count)
        .flat_map(|u| (u + 1..node_count).map(move |v| (u, v)))
        .collect();
    pairs.sort_by(|a, b| weight[b.0][b.1].cmp(&weight[a.0][a.1]).then(a.cmp(b)));
    let mut uf = UnionFind::new(node_count);
    let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|&(u, v)| uf.union(u, v)).collect();
    let tree = RepresentativeTree::new(node_count, edges)?;
    if verify_tree(&tree, family) {
        return Ok(tree);
    }
    if node_count <= EXHAUSTIVE_TREE_CAP {
        if let Some(tree) = exhaustive_tree(node_count, family) {
            return Ok(tree);
        }
    }
    Err(Error::Internal(format!(
        "no representative tree found for a family of {} sets on {} nodes",
        family.len(),
        node_count
    )))
}

fn exhaustive_tree(n: usize, family: &[NodeSet]) -> Option<RepresentativeTree> {
    if n <= 2 {
        let edges = if n == 2 { vec![(0, 1)] } else { vec![] };
        return RepresentativeTree::new(n, edges)
            .ok()
            .filter(|t| verify_tree(t, family));
    }
    let len = n - 2;
    let mut code = vec![0usize; len];
    loop {
        let tree = RepresentativeTree::new(n, prufer_edges(n, &code))
            .expect("Prüfer codes decode to trees");
        if verify_tree(&tree, family) {
            return Some(tree);
        }
        let mut i = 0;
        while i < len && code[i] == n - 1 {
            code[i] = 0;
            i += 1;
        }
        if i == len {
            return None;
        }
        code[i] += 1;
    }
}

fn prufer_edges(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// True iff every member of `family` induces a connected subgraph of `tree`.
pub fn verify_tree(tree: &RepresentativeTree, family: &[NodeSet]) -> bool {
    family.iter().all(|s| tree.induces_subtree(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::tests::triangle;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::from_iter(v.iter().copied())
    }

    fn two_nodes() -> Digraph<i64> {
        let mut d = Digraph::new(2);
        d.add_arc(0, 1, 1, 1).unwrap();
        d
    }

    #[test]
    fn insolid_examples() {
        let d = triangle(3);
        assert!(is_insolid(&d, &set(&[2]), Mode::Unit).unwrap());
        assert!(!is_insolid(&d, &set(&[0, 1]), Mode::Unit).unwrap());
        assert!(is_insolid(&d, &set(&[0, 1, 2]), Mode::Unit).unwrap());
        assert!(is_insolid(&d, &NodeSet::empty(), Mode::Unit).is_err());
    }

    #[test]
    fn shrink_examples() {
        let d = triangle(3);
        assert_eq!(
            shrink_to_insolid(&d, &d.all_nodes(), Mode::Unit).unwrap(),
            d.all_nodes()
        );
        assert_eq!(
            shrink_to_insolid(&d, &set(&[0, 1]), Mode::Unit).unwrap(),
            set(&[0])
        );
        // Node 0 has no entering arc.
        let u = two_nodes();
        let s = shrink_to_insolid(&u, &set(&[0, 1]), Mode::Unit).unwrap();
        assert_eq!(s, set(&[0]));
    }

    #[test]
    fn enumeration_examples() {
        let d = triangle(3);
        let sets = enumerate_insolid(&d, &d.all_nodes(), Mode::Unit).unwrap();
        assert_eq!(sets, vec![set(&[0]), set(&[1]), set(&[2]), set(&[0, 1, 2])]);

        let one: Digraph<i64> = Digraph::new(1);
        assert_eq!(
            enumerate_insolid(&one, &one.all_nodes(), Mode::Unit).unwrap(),
            vec![set(&[0])]
        );

        let u = two_nodes();
        assert_eq!(
            enumerate_insolid(&u, &u.all_nodes(), Mode::Unit).unwrap(),
            vec![set(&[0]), set(&[1])]
        );

        let big: Digraph<i64> = Digraph::new(ENUMERATION_CAP + 1);
        assert!(matches!(
            enumerate_insolid(&big, &big.all_nodes(), Mode::Unit),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn family_search_matches_scan_on_examples() {
        for d in [triangle(3), triangle(1), two_nodes(), Digraph::new(1)] {
            assert_eq!(
                insolid_family(&d, Mode::Unit).unwrap(),
                enumerate_insolid(&d, &d.all_nodes(), Mode::Unit).unwrap()
            );
        }
    }

    #[test]
    fn tree_examples() {
        let d = triangle(3);
        let t = build_tree(&d, Mode::Unit).unwrap();
        assert_eq!(t.edges().len(), 2);

        let one: Digraph<i64> = Digraph::new(1);
        assert!(build_tree(&one, Mode::Unit).unwrap().edges().is_empty());

        assert_eq!(
            build_tree(&two_nodes(), Mode::Unit).unwrap().edges(),
            &[(0, 1)]
        );
    }

    #[test]
    fn verify_examples() {
        let path = RepresentativeTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(verify_tree(&path, &[set(&[0]), set(&[1]), set(&[2])]));
        assert!(!verify_tree(&path, &[set(&[0, 2])]));

        let star = RepresentativeTree::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let with_center: Vec<NodeSet> = (1..16usize)
            .map(|b| (0..4).filter(|i| b >> i & 1 == 1).collect::<NodeSet>())
            .filter(|s| s.contains(0))
            .collect();
        assert!(verify_tree(&star, &with_center));
    }

    #[test]
    fn tree_validation() {
        assert!(RepresentativeTree::new(3, vec![(0, 1)]).is_err());
        assert!(RepresentativeTree::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(RepresentativeTree::new(2, vec![(0, 0)]).is_err());
    }

    #[test]
    fn exhaustive_fallback_finds_a_tree() {
        // {0,2} and {1,2} force 2 into the middle; the family has a host tree.
        let family = vec![set(&[0, 2]), set(&[1, 2]), set(&[0, 1, 2])];
        let t = exhaustive_tree(3, &family).unwrap();
        assert!(verify_tree(&t, &family));
        assert!(exhaustive_tree(3, &[set(&[0, 1]), set(&[1, 2]), set(&[0, 2])]).is_none());
    }

    #[test]
    fn prufer_decoding_spans() {
        for code in [[0usize, 0], [1, 2], [3, 3], [2, 0]] {
            assert!(RepresentativeTree::new(4, prufer_edges(4, &code)).is_ok());
        }
    }
}
