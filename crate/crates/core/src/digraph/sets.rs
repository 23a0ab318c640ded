use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{input, Result};
use crate::scalar::Scalar;

use super::{Digraph, Mode};

/// A set of node ids, kept sorted and free of duplicates.
///
/// Sets order by size first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet {
            members: Vec::new(),
        }
    }

    pub fn singleton(v: usize) -> Self {
        NodeSet { members: vec![v] }
    }

    /// `{0, 1, ..., n-1}`
    pub fn full(n: usize) -> Self {
        NodeSet {
            members: (0..n).collect(),
        }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        NodeSet {
            members: (0..mask.len()).filter(|&v| mask[v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn first(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.members {
            if v < n {
                m[v] = true;
            }
        }
        m
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn with(&self, v: usize) -> NodeSet {
        self.iter().chain(std::iter::once(v)).collect()
    }

    pub fn without(&self, v: usize) -> NodeSet {
        self.iter().filter(|&u| u != v).collect()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        NodeSet { members }
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

/// Pairwise disjoint, non-empty node sets. The empty collection is valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Subpartition {
    parts: Vec<NodeSet>,
}

impl Subpartition {
    pub fn new(parts: Vec<NodeSet>) -> Result<Self> {
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return input("subpartition with an empty part");
            }
            if parts[..i].iter().any(|q| !q.is_disjoint(p)) {
                return input(format!("subpartition parts overlap at {}", p));
            }
        }
        Ok(Subpartition { parts })
    }

    pub fn empty() -> Self {
        Subpartition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[NodeSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of in-degrees of the parts.
    pub fn indegree_sum<W: Scalar>(&self, d: &Digraph<W>, mode: Mode) -> Result<W> {
        self.parts
            .iter()
            .try_fold(W::zero(), |acc, p| Ok(acc + d.indegree(p, mode)?))
    }

    /// `sum over parts of (k - in-degree)`.
    pub fn surplus<W: Scalar>(&self, d: &Digraph<W>, k: &W, mode: Mode) -> Result<W> {
        self.parts.iter().try_fold(W::zero(), |acc, p| {
            Ok(acc + k.clone() - d.indegree(p, mode)?)
        })
    }

    /// Union of the parts.
    pub fn support(&self) -> NodeSet {
        self.parts.iter().flat_map(|p| p.iter()).collect()
    }

    /// Parts sorted into canonical order.
    pub fn canonical(mut self) -> Self {
        self.parts.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        self
    }
}

impl IntoIterator for Subpartition {
    type Item = NodeSet;
    type IntoIter = std::vec::IntoIter<NodeSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.parts.into_iter()
    }
}

/// A multiset of arc units: record index to number of units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArcSelection {
    units: BTreeMap<usize, u64>,
}

impl ArcSelection {
    pub fn new() -> Self {
        ArcSelection {
            units: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, record: usize, count: u64) {
        if count > 0 {
            *self.units.entry(record).or_insert(0) += count;
        }
    }

    /// Takes `count` units of `record` back out. Panics if fewer are selected.
    pub fn take(&mut self, record: usize, count: u64) {
        let c = self.units.get_mut(&record).expect("record not selected");
        *c = c
            .checked_sub(count)
            .expect("taking more units than selected");
        if *c == 0 {
            self.units.remove(&record);
        }
    }

    pub fn count(&self, record: usize) -> u64 {
        self.units.get(&record).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.units.iter().map(|(&r, &c)| (r, c))
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn unit_count(&self) -> u64 {
        self.units.values().sum()
    }

    pub fn total<W: Scalar>(&self, d: &Digraph<W>, mode: Mode) -> W {
        self.iter()
            .fold(W::zero(), |acc, (r, c)| acc + d.arc(r).capacity_of(c, mode))
    }

    pub fn validate<W: Scalar>(&self, d: &Digraph<W>) -> Result<()> {
        for (r, c) in self.iter() {
            if r >= d.arcs().len() {
                return input(format!("arc record {} does not exist", r));
            }
            if c > d.arc(r).multiplicity {
                return input(format!(
                    "removing {} units of record {} with multiplicity {}",
                    c,
                    r,
                    d.arc(r).multiplicity
                ));
            }
        }
        Ok(())
    }

    /// Re-indexes records through `map` (new index to old index).
    pub(crate) fn mapped(&self, map: &[usize]) -> ArcSelection {
        let mut out = ArcSelection::new();
        for (r, c) in self.iter() {
            out.add(map[r], c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_set_order_is_size_then_lex() {
        let mut sets = [
            NodeSet::from_iter([0, 1, 2]),
            NodeSet::from_iter([2]),
            NodeSet::from_iter([0, 2]),
            NodeSet::from_iter([0]),
            NodeSet::from_iter([1, 0]),
        ];
        sets.sort();
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{0}", "{2}", "{0, 1}", "{0, 2}", "{0, 1, 2}"]);
    }

    #[test]
    fn subpartition_validation() {
        assert!(Subpartition::new(vec![]).is_ok());
        assert!(Subpartition::new(vec![NodeSet::empty()]).is_err());
        assert!(
            Subpartition::new(vec![NodeSet::from_iter([0, 1]), NodeSet::from_iter([1])]).is_err()
        );
        let sp =
            Subpartition::new(vec![NodeSet::from_iter([0, 1]), NodeSet::from_iter([2])]).unwrap();
        assert_eq!(sp.support(), NodeSet::full(3));
    }

    #[test]
    fn selection_bookkeeping() {
        let mut s = ArcSelection::new();
        s.add(3, 2);
        s.add(1, 1);
        s.add(3, 1);
        assert_eq!(s.unit_count(), 4);
        s.take(3, 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(1, 1)]);
    }
}
