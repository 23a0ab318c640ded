//! Directed multigraphs with per-record multiplicities and exact weights.

mod format;
mod sets;

pub use format::{parse, serialize};
pub use sets::{ArcSelection, NodeSet, Subpartition};

use crate::error::{input, Result};
use crate::scalar::Scalar;

/// Which in-degree a query counts: arc units, or arc units times weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Unit,
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcRecord<W> {
    pub tail: usize,
    pub head: usize,
    pub multiplicity: u64,
    pub weight: W,
    pub cost: Option<W>,
}

impl<W: Scalar> ArcRecord<W> {
    /// Capacity of the whole record under `mode`.
    pub fn capacity(&self, mode: Mode) -> W {
        self.capacity_of(self.multiplicity, mode)
    }

    pub fn capacity_of(&self, units: u64, mode: Mode) -> W {
        match mode {
            Mode::Unit => W::from_count(units),
            Mode::Weighted => W::from_count(units) * self.weight.clone(),
        }
    }
}

/// Nodes are `0..node_count`; parallel arcs live in one record with a
/// multiplicity, and each unit of multiplicity is removable on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph<W> {
    node_count: usize,
    arcs: Vec<ArcRecord<W>>,
}

impl<W: Scalar> Digraph<W> {
    pub fn new(node_count: usize) -> Self {
        Digraph {
            node_count,
            arcs: Vec::new(),
        }
    }

    /// Adds an arc record and returns its index.
    pub fn add_arc(
        &mut self,
        tail: usize,
        head: usize,
        multiplicity: u64,
        weight: W,
    ) -> Result<usize> {
        self.push(ArcRecord {
            tail,
            head,
            multiplicity,
            weight,
            cost: None,
        })
    }

    pub fn add_costed_arc(
        &mut self,
        tail: usize,
        head: usize,
        multiplicity: u64,
        weight: W,
        cost: W,
    ) -> Result<usize> {
        self.push(ArcRecord {
            tail,
            head,
            multiplicity,
            weight,
            cost: Some(cost),
        })
    }

    fn push(&mut self, arc: ArcRecord<W>) -> Result<usize> {
        if arc.tail >= self.node_count || arc.head >= self.node_count {
            return input(format!(
                "arc {}->{} refers to a node outside 0..{}",
                arc.tail, arc.head, self.node_count
            ));
        }
        if arc.tail == arc.head {
            return input(format!("self-loop at node {}", arc.tail));
        }
        if arc.multiplicity == 0 {
            return input(format!(
                "arc {}->{} has zero multiplicity",
                arc.tail, arc.head
            ));
        }
        if arc.weight < W::zero() {
            return input(format!(
                "arc {}->{} has negative weight",
                arc.tail, arc.head
            ));
        }
        self.arcs.push(arc);
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[ArcRecord<W>] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> &ArcRecord<W> {
        &self.arcs[index]
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count)
    }

    /// Total number of arc units (sum of multiplicities).
    pub fn unit_count(&self) -> u64 {
        self.arcs.iter().map(|a| a.multiplicity).sum()
    }

    /// Sum of capacities of all records under `mode`.
    pub fn total_capacity(&self, mode: Mode) -> W {
        self.arcs
            .iter()
            .fold(W::zero(), |acc, a| acc + a.capacity(mode))
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.node_count {
            return input(format!("node {} is not in 0..{}", v, self.node_count));
        }
        Ok(())
    }

    pub fn check_set(&self, set: &NodeSet) -> Result<()> {
        match set.iter().find(|&v| v >= self.node_count) {
            Some(v) => input(format!("node {} is not in 0..{}", v, self.node_count)),
            None => Ok(()),
        }
    }

    /// In-degree of `set`: arc units (or their weight) with tail outside and
    /// head inside. The empty set has in-degree zero.
    pub fn indegree(&self, set: &NodeSet, mode: Mode) -> Result<W> {
        self.check_set(set)?;
        Ok(self.indegree_mask(&set.mask(self.node_count), mode))
    }

    pub(crate) fn indegree_mask(&self, inside: &[bool], mode: Mode) -> W {
        self.arcs
            .iter()
            .filter(|a| inside[a.head] && !inside[a.tail])
            .fold(W::zero(), |acc, a| acc + a.capacity(mode))
    }

    /// Indices of the arc records entering `set`.
    pub fn entering(&self, set: &NodeSet) -> Vec<usize> {
        let inside = set.mask(self.node_count);
        self.entering_mask(&inside)
    }

    pub(crate) fn entering_mask(&self, inside: &[bool]) -> Vec<usize> {
        (0..self.arcs.len())
            .filter(|&i| inside[self.arcs[i].head] && !inside[self.arcs[i].tail])
            .collect()
    }

    /// The digraph with the units of `selection` deleted. Records that reach
    /// multiplicity zero are dropped; the node set is unchanged.
    pub fn remove(&self, selection: &ArcSelection) -> Result<Digraph<W>> {
        selection.validate(self)?;
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| {
                let left = a.multiplicity - selection.count(i);
                (left > 0).then(|| ArcRecord {
                    multiplicity: left,
                    ..a.clone()
                })
            })
            .collect();
        Ok(Digraph {
            node_count: self.node_count,
            arcs,
        })
    }

    /// [`Digraph::remove`] for a selection already known to be valid, plus
    /// the map from each surviving record index to its index in `self`.
    pub(crate) fn remove_with_map(&self, selection: &ArcSelection) -> (Digraph<W>, Vec<usize>) {
        let mut arcs = Vec::with_capacity(self.arcs.len());
        let mut map = Vec::with_capacity(self.arcs.len());
        for (i, a) in self.arcs.iter().enumerate() {
            let left = a.multiplicity - selection.count(i);
            if left > 0 {
                arcs.push(ArcRecord {
                    multiplicity: left,
                    ..a.clone()
                });
                map.push(i);
            }
        }
        (
            Digraph {
                node_count: self.node_count,
                arcs,
            },
            map,
        )
    }

    /// The subdigraph induced by `set`, renumbered densely. The second value
    /// maps each new node id to its id in `self`.
    pub fn induced(&self, set: &NodeSet) -> Result<(Digraph<W>, Vec<usize>)> {
        if set.is_empty() {
            return input("induced subgraph of the empty node set");
        }
        self.check_set(set)?;
        let mut new_id = vec![usize::MAX; self.node_count];
        let old_ids: Vec<usize> = set.iter().collect();
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|a| new_id[a.tail] != usize::MAX && new_id[a.head] != usize::MAX)
            .map(|a| ArcRecord {
                tail: new_id[a.tail],
                head: new_id[a.head],
                ..a.clone()
            })
            .collect();
        Ok((
            Digraph {
                node_count: old_ids.len(),
                arcs,
            },
            old_ids,
        ))
    }

    /// Same digraph with every arc entering `root` deleted.
    pub fn without_arcs_entering(&self, root: usize) -> Digraph<W> {
        let arcs = self
            .arcs
            .iter()
            .filter(|a| a.head != root)
            .cloned()
            .collect();
        Digraph {
            node_count: self.node_count,
            arcs,
        }
    }

    pub fn map_weights<U: Scalar>(&self, mut f: impl FnMut(&W) -> U) -> Digraph<U> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| ArcRecord {
                tail: a.tail,
                head: a.head,
                multiplicity: a.multiplicity,
                weight: f(&a.weight),
                cost: a.cost.as_ref().map(&mut f),
            })
            .collect();
        Digraph {
            node_count: self.node_count,
            arcs,
        }
    }

    /// Appends a fresh node and returns its id.
    pub(crate) fn add_node(&mut self) -> usize {
        self.node_count += 1;
        self.node_count - 1
    }
}
