//! Exact maximum flow (Dinic) and the cut-minimizer queries built on it.
//!
//! All queries minimize the in-degree `ϱ(X)` over a lattice of node sets
//! `required ⊆ X ⊆ ground` and report the inclusionwise minimal minimizer:
//! the nodes that can still reach the sink in the residual network.

use std::collections::VecDeque;

use crate::digraph::{Digraph, Mode, NodeSet};
use crate::error::{input, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult<W> {
    pub value: W,
    /// The sink-side set achieving the minimum.
    pub side: NodeSet,
    /// Whether `side` is the inclusionwise minimal minimizer.
    pub minimal: bool,
}

struct Network<W> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<W>,
}

impl<W: Scalar> Network<W> {
    fn new(n: usize) -> Self {
        Network {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: W) {
        if cap <= W::zero() {
            return;
        }
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.residual.push(cap);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.residual.push(W::zero());
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if level[v] == usize::MAX && self.residual[e] > W::zero() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, limit: W, level: &[usize], next: &mut [usize]) -> W {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.to[e];
            if level[v] == level[u] + 1 && self.residual[e] > W::zero() {
                let cap = if self.residual[e] < limit {
                    self.residual[e].clone()
                } else {
                    limit.clone()
                };
                let pushed = self.augment(v, t, cap, level, next);
                if pushed > W::zero() {
                    self.residual[e] -= pushed.clone();
                    self.residual[e ^ 1] += pushed.clone();
                    return pushed;
                }
            }
            next[u] += 1;
        }
        W::zero()
    }

    fn max_flow(&mut self, s: usize, t: usize, unbounded: W) -> W {
        let mut flow = W::zero();
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return flow;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, unbounded.clone(), &level, &mut next);
                if pushed.is_zero() {
                    break;
                }
                flow += pushed;
            }
        }
    }

    /// Nodes that can reach `t` through edges with positive residual capacity.
    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                // e is v -> u; its partner u -> v carries the residual we need.
                let u = self.to[e];
                if !seen[u] && self.residual[e ^ 1] > W::zero() {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// Minimizes `ϱ(X) + source(X)` over `required ⊆ X ⊆ ground`, where
/// `source[v]` is the capacity of an extra arc entering `v` from outside the
/// digraph. Returns the value and the minimal minimizer as a mask.
pub(crate) fn lattice_min_cut<W: Scalar>(
    d: &Digraph<W>,
    mode: Mode,
    required: &[usize],
    ground: &[bool],
    source: Option<&[W]>,
) -> (W, Vec<bool>) {
    let n = d.node_count();
    let (sigma, tau) = (n, n + 1);
    let mut net = Network::new(n + 2);
    let mut big = W::one();
    for a in d.arcs() {
        let cap = a.capacity(mode);
        big += cap.clone();
        net.add_edge(a.tail, a.head, cap);
    }
    if let Some(src) = source {
        for (v, c) in src.iter().enumerate() {
            if ground[v] {
                big += c.clone();
                net.add_edge(sigma, v, c.clone());
            }
        }
    }
    for (v, &inside) in ground.iter().enumerate().take(n) {
        if !inside {
            net.add_edge(sigma, v, big.clone());
        }
    }
    for &v in required {
        net.add_edge(v, tau, big.clone());
    }
    let value = net.max_flow(sigma, tau, big + W::one());
    let mut side = net.reaching(tau);
    side.truncate(n);
    (value, side)
}

/// `min{ϱ(X) : required ⊆ X ⊆ ground}` with its minimal minimizer.
pub fn constrained_min_cut<W: Scalar>(
    d: &Digraph<W>,
    required: &NodeSet,
    ground: &NodeSet,
    mode: Mode,
) -> Result<CutResult<W>> {
    d.check_set(ground)?;
    if required.is_empty() {
        return input("constrained cut needs a non-empty required set");
    }
    if !required.is_subset(ground) {
        return input(format!(
            "required set {} is not inside the ground set",
            required
        ));
    }
    let (value, side) = lattice_min_cut(
        d,
        mode,
        required.as_slice(),
        &ground.mask(d.node_count()),
        None,
    );
    Ok(CutResult {
        value,
        side: NodeSet::from_mask(&side),
        minimal: true,
    })
}

/// Minimum `s`-`t` cut: `min{ϱ(X) : t ∈ X, s ∉ X}`.
pub fn min_st_cut<W: Scalar>(
    d: &Digraph<W>,
    s: usize,
    t: usize,
    mode: Mode,
) -> Result<CutResult<W>> {
    d.check_node(s)?;
    d.check_node(t)?;
    if s == t {
        return input("source and sink coincide");
    }
    constrained_min_cut(d, &NodeSet::singleton(t), &d.all_nodes().without(s), mode)
}

/// `min{ϱ(X) : pin ∈ X ⊆ ground}`.
pub fn pinned_min_cut<W: Scalar>(
    d: &Digraph<W>,
    pin: usize,
    ground: &NodeSet,
    mode: Mode,
) -> Result<CutResult<W>> {
    if !ground.contains(pin) {
        return input(format!("pin {} is not in the ground set", pin));
    }
    constrained_min_cut(d, &NodeSet::singleton(pin), ground, mode)
}

/// `min{ϱ(X) : ∅ ≠ X ⊆ ground}`, returning an inclusionwise minimal minimizer.
///
/// One pinned cut per ground node. Among pins reaching the minimum, sides that
/// strictly contain another minimizing side are skipped; the lowest remaining
/// pin wins.
pub fn rooted_min_cut<W: Scalar>(
    d: &Digraph<W>,
    ground: &NodeSet,
    mode: Mode,
) -> Result<CutResult<W>> {
    if ground.is_empty() {
        return input("rooted cut over an empty ground set");
    }
    d.check_set(ground)?;
    let mask = ground.mask(d.node_count());
    let mut best: Option<W> = None;
    let mut sides: Vec<Vec<bool>> = Vec::new();
    for v in ground.iter() {
        let (value, side) = lattice_min_cut(d, mode, &[v], &mask, None);
        match &best {
            Some(b) if value > *b => continue,
            Some(b) if value == *b => sides.push(side),
            _ => {
                best = Some(value);
                sides = vec![side];
            }
        }
    }
    let sizes: Vec<usize> = sides
        .iter()
        .map(|s| s.iter().filter(|&&x| x).count())
        .collect();
    let proper_superset = |i: usize| {
        (0..sides.len())
            .any(|j| sizes[j] < sizes[i] && sides[j].iter().zip(&sides[i]).all(|(&a, &b)| !a || b))
    };
    let pick = (0..sides.len())
        .find(|&i| !proper_superset(i))
        .expect("at least one pin");
    Ok(CutResult {
        value: best.expect("non-empty ground"),
        side: NodeSet::from_mask(&sides[pick]),
        minimal: true,
    })
}
