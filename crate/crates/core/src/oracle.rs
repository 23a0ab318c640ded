//! Exhaustive reference implementations for testing.
//!
//! Nothing here touches the flow, in-solid, matching or subpartition code: in-degrees
//! are tabulated over bitmasks straight from the arc list, and every quantifier
//! is expanded literally. All routines are exponential and refuse inputs
//! beyond their caps instead of truncating.

use crate::digraph::{ArcSelection, Digraph, Mode, NodeSet, Subpartition};
use crate::error::{input, Error, Result};
use crate::scalar::Scalar;

pub const SUBPARTITION_CAP: usize = 8;
pub const PACK_NODE_CAP: usize = 4;
pub const PACK_UNIT_CAP: u64 = 8;
pub const PACK_K_CAP: u64 = 2;
pub const BLOCKING_NODE_CAP: usize = 5;
pub const BLOCKING_UNIT_CAP: u64 = 12;
pub const COSTED_UNIT_CAP: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeFilter {
    Any,
    Exact(usize),
    AtLeast(usize),
}

impl SizeFilter {
    fn admits(self, size: usize) -> bool {
        match self {
            SizeFilter::Any => true,
            SizeFilter::Exact(t) => size == t,
            SizeFilter::AtLeast(t) => size >= t,
        }
    }
}

fn capacity(what: &str, cap: impl std::fmt::Display, got: impl std::fmt::Display) -> Error {
    Error::Capacity(format!("{} limited to {}, got {}", what, cap, got))
}

/// Subpartitions of `0..n` as lists of bitmasks, via restricted-growth labels
/// where label 0 leaves a node uncovered. Each one appears exactly once.
fn subpartition_masks(n: usize) -> Vec<Vec<u32>> {
    fn go(v: usize, n: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == n {
            out.push(blocks.clone());
            return;
        }
        go(v + 1, n, blocks, out);
        for b in 0..blocks.len() {
            blocks[b] |= 1 << v;
            go(v + 1, n, blocks, out);
            blocks[b] &= !(1 << v);
        }
        blocks.push(1 << v);
        go(v + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every subpartition of `ground` (the empty one included) passing `filter`.
pub fn enum_subpartitions(ground: &NodeSet, filter: SizeFilter) -> Result<Vec<Subpartition>> {
    if ground.len() > SUBPARTITION_CAP {
        return Err(capacity(
            "subpartition enumeration",
            SUBPARTITION_CAP,
            ground.len(),
        ));
    }
    let elems = ground.as_slice();
    subpartition_masks(elems.len())
        .into_iter()
        .filter(|blocks| filter.admits(blocks.len()))
        .map(|blocks| {
            let parts = blocks
                .iter()
                .map(|&m| {
                    (0..elems.len())
                        .filter(|&i| m >> i & 1 == 1)
                        .map(|i| elems[i])
                        .collect()
                })
                .collect();
            Subpartition::new(parts)
        })
        .collect()
}

/// In-degree of every node subset, indexed by bitmask, with arc units
/// reduced by `removed[i]` per record.
fn indegree_table<W: Scalar>(d: &Digraph<W>, removed: &[u64], mode: Mode) -> Vec<W> {
    let n = d.node_count();
    let mut table = vec![W::zero(); 1 << n];
    for (i, a) in d.arcs().iter().enumerate() {
        let units = a.multiplicity - removed.get(i).copied().unwrap_or(0);
        if units == 0 {
            continue;
        }
        let cap = a.capacity_of(units, mode);
        for (mask, slot) in table.iter_mut().enumerate() {
            if mask >> a.head & 1 == 1 && mask >> a.tail & 1 == 0 {
                *slot += cap.clone();
            }
        }
    }
    table
}

fn frank_holds<W: Scalar>(table: &[W], subparts: &[Vec<u32>], k: u64) -> bool {
    subparts.iter().all(|blocks| {
        let lhs = blocks
            .iter()
            .fold(W::zero(), |acc, &m| acc + table[m as usize].clone());
        lhs >= W::from_count(k * (blocks.len() as u64).saturating_sub(1))
    })
}

fn edmonds_holds<W: Scalar>(table: &[W], n: usize, root: usize, k: u64) -> bool {
    let kw = W::from_count(k);
    (1..1usize << n)
        .filter(|m| m >> root & 1 == 0)
        .all(|m| table[m] >= kw)
}

fn check_node_cap<W: Scalar>(d: &Digraph<W>, cap: usize, what: &str) -> Result<()> {
    if d.node_count() > cap {
        return Err(capacity(what, format!("{} nodes", cap), d.node_count()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrankCheck<W> {
    /// Whether `Σ ϱ(X) ≥ k(|𝒳| - 1)` holds for every subpartition.
    pub holds: bool,
    /// A subpartition maximizing `Σ (k - ϱ(X))`, first in enumeration order.
    pub witness: Subpartition,
    pub surplus: W,
}

/// Evaluates the subpartition inequality over every subpartition of `V`.
pub fn brute_frank_check<W: Scalar>(d: &Digraph<W>, k: u64) -> Result<FrankCheck<W>> {
    check_node_cap(d, SUBPARTITION_CAP, "subpartition check")?;
    let n = d.node_count();
    let table = indegree_table(d, &[], Mode::Unit);
    let kw = W::from_count(k);
    let mut best: Option<(W, &Vec<u32>)> = None;
    let subparts = subpartition_masks(n);
    for blocks in &subparts {
        let s = blocks.iter().fold(W::zero(), |acc, &m| {
            acc + kw.clone() - table[m as usize].clone()
        });
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, blocks));
        }
    }
    let (surplus, blocks) = best.expect("the empty subpartition always exists");
    let witness = Subpartition::new(
        blocks
            .iter()
            .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
            .collect(),
    )?;
    Ok(FrankCheck {
        holds: surplus <= kw,
        witness,
        surplus,
    })
}

/// Spanning arborescences as per-record unit counts, rooted at `root` or anywhere.
fn arborescences<W: Scalar>(d: &Digraph<W>, root: Option<usize>) -> Vec<Vec<u64>> {
    let n = d.node_count();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in d.arcs().iter().enumerate() {
        into[a.head].push(i);
    }
    let roots: Vec<usize> = match root {
        Some(r) => vec![r],
        None => (0..n).collect(),
    };
    let mut out = Vec::new();
    for r in roots {
        let others: Vec<usize> = (0..n).filter(|&v| v != r).collect();
        let mut pick = vec![0usize; others.len()];
        if others.iter().any(|&v| into[v].is_empty()) {
            continue;
        }
        loop {
            let mut parent = vec![usize::MAX; n];
            for (j, &v) in others.iter().enumerate() {
                parent[v] = d.arc(into[v][pick[j]]).tail;
            }
            let reaches_root = others.iter().all(|&v| {
                let mut u = v;
                for _ in 0..n {
                    if u == r {
                        return true;
                    }
                    u = parent[u];
                }
                u == r
            });
            if reaches_root {
                let mut counts = vec![0u64; d.arcs().len()];
                for (j, &v) in others.iter().enumerate() {
                    counts[into[v][pick[j]]] += 1;
                }
                out.push(counts);
            }
            let mut j = 0;
            while j < others.len() {
                pick[j] += 1;
                if pick[j] < into[others[j]].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == others.len() {
                break;
            }
        }
    }
    out
}

/// Whether `d` contains `k` arc-disjoint spanning arborescences (all rooted at
/// `root` if given), found by direct search.
pub fn brute_arborescence_pack<W: Scalar>(
    d: &Digraph<W>,
    k: u64,
    root: Option<usize>,
) -> Result<bool> {
    check_node_cap(d, PACK_NODE_CAP, "arborescence packing")?;
    if d.unit_count() > PACK_UNIT_CAP {
        return Err(capacity(
            "arborescence packing",
            format!("{} arc units", PACK_UNIT_CAP),
            d.unit_count(),
        ));
    }
    if k > PACK_K_CAP {
        return Err(capacity(
            "arborescence packing",
            format!("k = {}", PACK_K_CAP),
            k,
        ));
    }
    if let Some(r) = root {
        d.check_node(r)?;
    }
    if d.node_count() == 0 {
        return input("empty digraph");
    }
    let arbs = arborescences(d, root);
    let mults: Vec<u64> = d.arcs().iter().map(|a| a.multiplicity).collect();
    fn pack(arbs: &[Vec<u64>], from: usize, left: u64, used: &mut [u64], mults: &[u64]) -> bool {
        if left == 0 {
            return true;
        }
        for i in from..arbs.len() {
            if arbs[i]
                .iter()
                .zip(used.iter())
                .zip(mults)
                .all(|((a, u), m)| a + u <= *m)
            {
                used.iter_mut().zip(&arbs[i]).for_each(|(u, a)| *u += a);
                let ok = pack(arbs, i, left - 1, used, mults);
                used.iter_mut().zip(&arbs[i]).for_each(|(u, a)| *u -= a);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    Ok(pack(&arbs, 0, k, &mut vec![0; mults.len()], &mults))
}

/// All per-record count vectors `c` with `c[i] ≤ mults[i]`.
fn all_selections(mults: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(mults.len())];
    for &m in mults {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=m).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

fn to_selection(counts: &[u64]) -> ArcSelection {
    let mut s = ArcSelection::new();
    for (r, &c) in counts.iter().enumerate() {
        s.add(r, c);
    }
    s
}

/// Removal candidates sorted by weight, then unit count, then counts.
fn by_weight<W: Scalar>(d: &Digraph<W>) -> Vec<(W, Vec<u64>)> {
    let mults: Vec<u64> = d.arcs().iter().map(|a| a.multiplicity).collect();
    let mut all: Vec<(W, u64, Vec<u64>)> = all_selections(&mults)
        .into_iter()
        .map(|c| {
            let w = c.iter().enumerate().fold(W::zero(), |acc, (i, &u)| {
                acc + d.arc(i).capacity_of(u, Mode::Weighted)
            });
            (w, c.iter().sum(), c)
        })
        .collect();
    all.sort();
    all.into_iter().map(|(w, _, c)| (w, c)).collect()
}

/// Minimum-weight arc units whose removal leaves no k-union-arborescence
/// (no k-union-`root`-arborescence if a root is given). `Mode::Unit` counts
/// units instead of weight. `None` when no removal suffices: a single node.
pub fn brute_min_blocking<W: Scalar>(
    d: &Digraph<W>,
    k: u64,
    root: Option<usize>,
    mode: Mode,
) -> Result<Option<(W, ArcSelection)>> {
    check_node_cap(d, BLOCKING_NODE_CAP, "brute-force blocking")?;
    if d.unit_count() > BLOCKING_UNIT_CAP {
        return Err(capacity(
            "brute-force blocking",
            format!("{} arc units", BLOCKING_UNIT_CAP),
            d.unit_count(),
        ));
    }
    if let Some(r) = root {
        d.check_node(r)?;
    }
    let n = d.node_count();
    if n < 2 {
        return Ok(None);
    }
    let graph = match mode {
        Mode::Unit => d.map_weights(|_| W::one()),
        Mode::Weighted => d.clone(),
    };
    let subparts = subpartition_masks(n);
    for (w, counts) in by_weight(&graph) {
        let table = indegree_table(&graph, &counts, Mode::Unit);
        let holds = match root {
            Some(r) => edmonds_holds(&table, n, r, k),
            None => frank_holds(&table, &subparts, k),
        };
        if !holds {
            return Ok(Some((w, to_selection(&counts))));
        }
    }
    Ok(None)
}

/// Minimum-weight arc units meeting every minimum-cost k-union-arborescence
/// (k-union-`root`-arborescence if a root is given). Missing costs count as
/// zero. `None` when no removal suffices.
///
/// Candidate structures are the `k(n-1)`-unit selections satisfying the cut
/// conditions, so a structure is exactly a union of `k` spanning arborescences.
pub fn brute_min_blocking_costed<W: Scalar>(
    d: &Digraph<W>,
    k: u64,
    root: Option<usize>,
) -> Result<Option<(W, ArcSelection)>> {
    check_node_cap(d, BLOCKING_NODE_CAP, "brute-force costed blocking")?;
    if d.unit_count() > COSTED_UNIT_CAP {
        return Err(capacity(
            "brute-force costed blocking",
            format!("{} arc units", COSTED_UNIT_CAP),
            d.unit_count(),
        ));
    }
    if let Some(r) = root {
        d.check_node(r)?;
    }
    let n = d.node_count();
    if n < 2 {
        return Ok(None);
    }
    let size = k * (n as u64 - 1);
    let mults: Vec<u64> = d.arcs().iter().map(|a| a.multiplicity).collect();
    let subparts = subpartition_masks(n);
    let mut cheapest: Option<W> = None;
    let mut structures: Vec<Vec<u64>> = Vec::new();
    for f in all_selections(&mults) {
        if f.iter().sum::<u64>() != size {
            continue;
        }
        let removed: Vec<u64> = mults.iter().zip(&f).map(|(m, c)| m - c).collect();
        let table = indegree_table(d, &removed, Mode::Unit);
        let valid = match root {
            Some(r) => table[1 << r].is_zero() && edmonds_holds(&table, n, r, k),
            None => frank_holds(&table, &subparts, k),
        };
        if !valid {
            continue;
        }
        let cost = f.iter().enumerate().fold(W::zero(), |acc, (i, &c)| {
            acc + W::from_count(c) * d.arc(i).cost.clone().unwrap_or_else(W::zero)
        });
        match &cheapest {
            Some(c) if cost > *c => {}
            Some(c) if cost == *c => structures.push(f),
            _ => {
                cheapest = Some(cost);
                structures = vec![f];
            }
        }
    }
    for (w, h) in by_weight(d) {
        let hits_all = structures
            .iter()
            .all(|f| f.iter().zip(&mults).zip(&h).any(|((c, m), x)| *c > m - x));
        if hits_all {
            return Ok(Some((w, to_selection(&h))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::tests::triangle;

    #[test]
    fn subpartition_counts_are_bell_numbers() {
        for (n, want) in [(0, 1), (1, 2), (2, 5), (3, 15), (4, 52)] {
            assert_eq!(
                enum_subpartitions(&NodeSet::full(n), SizeFilter::Any)
                    .unwrap()
                    .len(),
                want
            );
        }
        let g = NodeSet::full(3);
        assert_eq!(
            enum_subpartitions(&g, SizeFilter::Exact(2)).unwrap().len(),
            6
        );
        assert_eq!(
            enum_subpartitions(&g, SizeFilter::AtLeast(2))
                .unwrap()
                .len(),
            7
        );
        assert!(matches!(
            enum_subpartitions(&NodeSet::full(9), SizeFilter::Any),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn subpartitions_are_distinct() {
        let mut all: Vec<Subpartition> =
            enum_subpartitions(&NodeSet::from_iter([1, 4, 6, 7]), SizeFilter::Any)
                .unwrap()
                .into_iter()
                .map(Subpartition::canonical)
                .collect();
        let len = all.len();
        all.sort_by(|a, b| a.parts().cmp(b.parts()));
        all.dedup();
        assert_eq!(all.len(), len);
    }

    #[test]
    fn frank_examples() {
        assert!(brute_frank_check(&Digraph::<i64>::new(1), 3).unwrap().holds);
        let c = brute_frank_check(&triangle(1), 2).unwrap();
        assert!(!c.holds);
        assert_eq!(c.surplus, 3);
        assert!(brute_frank_check(&triangle(3), 3).unwrap().holds);
    }

    #[test]
    fn packing_examples() {
        assert!(brute_arborescence_pack(&triangle(1), 1, None).unwrap());
        assert!(!brute_arborescence_pack(&triangle(1), 2, None).unwrap());
        let mut two: Digraph<i64> = Digraph::new(2);
        two.add_arc(0, 1, 1, 1).unwrap();
        two.add_arc(1, 0, 1, 1).unwrap();
        assert!(brute_arborescence_pack(&two, 1, None).unwrap());
        assert!(brute_arborescence_pack(&two, 2, None).unwrap());
        assert!(!brute_arborescence_pack(&two, 2, Some(0)).unwrap());
        assert!(brute_arborescence_pack(&Digraph::<i64>::new(1), 2, None).unwrap());
        assert!(brute_arborescence_pack(&triangle(3), 3, None).is_err());
    }

    #[test]
    fn blocking_examples() {
        let (w, _) = brute_min_blocking(&triangle(1), 1, None, Mode::Unit)
            .unwrap()
            .unwrap();
        assert_eq!(w, 2);
        let (w, h) = brute_min_blocking(&triangle(1), 2, None, Mode::Unit)
            .unwrap()
            .unwrap();
        assert_eq!((w, h.is_empty()), (0, true));
        let (w, _) = brute_min_blocking(&triangle(3), 4, None, Mode::Unit)
            .unwrap()
            .unwrap();
        assert_eq!(w, 2);
        assert_eq!(
            brute_min_blocking(&Digraph::<i64>::new(1), 1, None, Mode::Unit).unwrap(),
            None
        );

        let mut d: Digraph<i64> = Digraph::new(2);
        d.add_arc(0, 1, 1, 1).unwrap();
        d.add_arc(0, 1, 1, 5).unwrap();
        let (w, _) = brute_min_blocking(&d, 2, Some(0), Mode::Weighted)
            .unwrap()
            .unwrap();
        assert_eq!(w, 1);
    }

    #[test]
    fn costed_blocking_prefers_cheap_structures() {
        // Two parallel 0 -> 1 arcs; only the cost-0 one is in a minimum-cost arborescence.
        let mut d: Digraph<i64> = Digraph::new(2);
        d.add_costed_arc(0, 1, 1, 3, 0).unwrap();
        d.add_costed_arc(0, 1, 1, 1, 2).unwrap();
        let (w, h) = brute_min_blocking_costed(&d, 1, Some(0)).unwrap().unwrap();
        assert_eq!((w, h.count(0)), (3, 1));
        let (w, _) = brute_min_blocking(&d, 1, Some(0), Mode::Weighted)
            .unwrap()
            .unwrap();
        assert_eq!(w, 4);
    }
}
