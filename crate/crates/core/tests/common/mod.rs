#![allow(dead_code)]

use arbblock::{Digraph, Mode, NodeSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph on `n` nodes with exactly `units` arc units, records of
/// multiplicity at most `max_mult`, and weights drawn from `0..=max_weight`
/// (all 1 when `max_weight` is `None`).
pub fn random_digraph(
    rng: &mut impl Rng,
    n: usize,
    units: u64,
    max_mult: u64,
    max_weight: Option<i64>,
) -> Digraph<i64> {
    let mut d = Digraph::new(n);
    if n < 2 {
        return d;
    }
    let mut left = units;
    while left > 0 {
        let t = rng.gen_range(0..n);
        let mut h = rng.gen_range(0..n - 1);
        if h >= t {
            h += 1;
        }
        let m = rng.gen_range(1..=max_mult.min(left));
        let w = max_weight.map_or(1, |top| rng.gen_range(0..=top));
        d.add_arc(t, h, m, w).unwrap();
        left -= m;
    }
    d
}

/// Like [`random_digraph`] but with costs in `0..=max_cost`, some left unset.
pub fn random_costed(
    rng: &mut impl Rng,
    n: usize,
    units: u64,
    max_weight: i64,
    max_cost: i64,
) -> Digraph<i64> {
    let plain = random_digraph(rng, n, units, 2, Some(max_weight));
    let mut d = Digraph::new(n);
    for a in plain.arcs() {
        if rng.gen_bool(0.2) {
            d.add_arc(a.tail, a.head, a.multiplicity, a.weight).unwrap();
        } else {
            d.add_costed_arc(
                a.tail,
                a.head,
                a.multiplicity,
                a.weight,
                rng.gen_range(0..=max_cost),
            )
            .unwrap();
        }
    }
    d
}

/// In-degree of every bitmask subset, straight from the arc list.
pub fn indegrees(d: &Digraph<i64>, mode: Mode) -> Vec<i64> {
    let n = d.node_count();
    (0..1usize << n)
        .map(|mask| {
            d.arcs()
                .iter()
                .filter(|a| mask >> a.head & 1 == 1 && mask >> a.tail & 1 == 0)
                .map(|a| a.capacity(mode))
                .sum()
        })
        .collect()
}

pub fn set_of(mask: usize, n: usize) -> NodeSet {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn mask_of(set: &NodeSet) -> usize {
    set.iter().fold(0, |m, v| m | 1 << v)
}

/// In-solid sets by definition: every non-empty proper subset has larger in-degree.
pub fn insolid_by_definition(d: &Digraph<i64>, mode: Mode) -> Vec<usize> {
    let table = indegrees(d, mode);
    (1..1usize << d.node_count())
        .filter(|&x| {
            let mut y = (x - 1) & x;
            while y > 0 {
                if table[y] <= table[x] {
                    return false;
                }
                y = (y - 1) & x;
            }
            true
        })
        .collect()
}
