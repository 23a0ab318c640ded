mod common;

use arbblock::blocking::{
    block_karb_cardinality, block_karb_weighted, block_krarb_uniform, block_krarb_weighted,
    Certificate,
};
use arbblock::flownet::{constrained_min_cut, pinned_min_cut, rooted_min_cut};
use arbblock::insolid::{
    build_tree, enumerate_insolid, insolid_family, is_insolid, shrink_to_insolid, verify_tree,
};
use arbblock::oracle::{
    brute_arborescence_pack, brute_frank_check, enum_subpartitions, SizeFilter,
};
use arbblock::subpart::{
    best_constr_subpart, best_fixed_subpart, best_subpart, exists_k_union_arb, exists_k_union_r_arb,
};
use arbblock::{ArcSelection, Digraph, Mode, NodeSet, Subpartition};
use proptest::prelude::*;

use common::{indegrees, insolid_by_definition, mask_of, set_of};

fn arb_digraph(
    nodes: std::ops::RangeInclusive<usize>,
    max_records: usize,
    max_weight: i64,
) -> impl Strategy<Value = Digraph<i64>> {
    nodes.prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1u64..=3, 0..=max_weight), 0..=max_records).prop_map(
            move |arcs| {
                let mut d = Digraph::new(n);
                for (t, h, m, w) in arcs {
                    if t != h {
                        d.add_arc(t, h, m, w).unwrap();
                    }
                }
                d
            },
        )
    })
}

fn arb_mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Unit), Just(Mode::Weighted)]
}

fn strongly_connected(d: &Digraph<i64>) -> bool {
    let n = d.node_count();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for a in d.arcs() {
                let (from, to) = if forward {
                    (a.tail, a.head)
                } else {
                    (a.head, a.tail)
                };
                if from == u && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

fn brute_surplus(d: &Digraph<i64>, ground: &NodeSet, k: u64, filter: SizeFilter) -> Option<i64> {
    enum_subpartitions(ground, filter)
        .unwrap()
        .iter()
        .map(|p| p.surplus(d, &(k as i64), Mode::Unit).unwrap())
        .max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn indegree_basics(d in arb_digraph(1..=6, 10, 4), mode in arb_mode(), picks in prop::collection::vec(0u64..3, 10)) {
        let n = d.node_count();
        prop_assert_eq!(d.induced(&d.all_nodes()).unwrap().0, d.clone());
        prop_assert_eq!(d.remove(&ArcSelection::new()).unwrap(), d.clone());
        let mut sel = ArcSelection::new();
        for (i, a) in d.arcs().iter().enumerate() {
            sel.add(i, picks[i].min(a.multiplicity));
        }
        let rest = d.remove(&sel).unwrap();
        let (before, after) = (indegrees(&d, mode), indegrees(&rest, mode));
        for mask in 1..1usize << n {
            let x = set_of(mask, n);
            prop_assert_eq!(d.indegree(&x, mode).unwrap(), before[mask]);
            prop_assert!(after[mask] <= before[mask]);
        }
    }

    #[test]
    fn subpartition_sums_recount(d in arb_digraph(1..=6, 10, 4), mode in arb_mode(), labels in prop::collection::vec(0usize..4, 6)) {
        let n = d.node_count();
        let parts: Vec<NodeSet> = (1..4)
            .map(|l| (0..n).filter(|&v| labels[v] == l).collect::<NodeSet>())
            .filter(|p| !p.is_empty())
            .collect();
        let p = Subpartition::new(parts.clone()).unwrap();
        let mut recount = 0;
        for a in d.arcs() {
            for part in &parts {
                if part.contains(a.head) && !part.contains(a.tail) {
                    recount += a.capacity(mode);
                }
            }
        }
        prop_assert_eq!(p.indegree_sum(&d, mode).unwrap(), recount);
    }

    #[test]
    fn constrained_cut_is_the_minimal_minimizer(d in arb_digraph(2..=6, 10, 4), mode in arb_mode(), req_bits in 1usize..64, ground_bits in 0usize..64) {
        let n = d.node_count();
        let full = (1usize << n) - 1;
        let required = req_bits & full;
        prop_assume!(required != 0);
        let ground = (ground_bits & full) | required;
        let table = indegrees(&d, mode);
        let lattice: Vec<usize> = (1..=full).filter(|&y| y & required == required && y & !ground == 0).collect();
        let best = lattice.iter().map(|&y| table[y]).min().unwrap();
        let cut = constrained_min_cut(&d, &set_of(required, n), &set_of(ground, n), mode).unwrap();
        prop_assert_eq!(cut.value, best);
        prop_assert_eq!(table[mask_of(&cut.side)], best);
        for &y in &lattice {
            if table[y] == best {
                prop_assert_eq!(mask_of(&cut.side) & !y, 0, "side {} not inside minimizer {}", cut.side, set_of(y, n));
            }
        }
    }

    #[test]
    fn rooted_cut_is_the_best_pinned_cut(d in arb_digraph(1..=6, 10, 4), mode in arb_mode(), ground_bits in 1usize..64) {
        let n = d.node_count();
        let ground = ground_bits & ((1usize << n) - 1);
        prop_assume!(ground != 0);
        let g = set_of(ground, n);
        let cut = rooted_min_cut(&d, &g, mode).unwrap();
        let pinned = g.iter().map(|v| pinned_min_cut(&d, v, &g, mode).unwrap().value).min().unwrap();
        prop_assert_eq!(cut.value, pinned);
        let table = indegrees(&d, mode);
        prop_assert_eq!(table[mask_of(&cut.side)], cut.value);
        prop_assert!(cut.side.is_subset(&g));
        // Inclusion-minimal: no non-empty proper subset attains the minimum.
        let s = mask_of(&cut.side);
        let mut y = (s - 1) & s;
        while y > 0 {
            prop_assert!(table[y] > cut.value);
            y = (y - 1) & s;
        }
    }

    #[test]
    fn insolid_enumeration_matches_definition(d in arb_digraph(1..=7, 14, 3), mode in arb_mode()) {
        let n = d.node_count();
        let want: Vec<NodeSet> = {
            let mut v: Vec<NodeSet> = insolid_by_definition(&d, mode).into_iter().map(|m| set_of(m, n)).collect();
            v.sort();
            v
        };
        let got = enumerate_insolid(&d, &d.all_nodes(), mode).unwrap();
        prop_assert_eq!(&got, &want);
        prop_assert_eq!(&insolid_family(&d, mode).unwrap(), &want);
        for v in 0..n {
            prop_assert!(got.contains(&NodeSet::singleton(v)));
        }
        if mode == Mode::Unit {
            prop_assert_eq!(got.contains(&d.all_nodes()), strongly_connected(&d));
        }
        for x in &want {
            prop_assert!(is_insolid(&d, x, mode).unwrap());
        }
    }

    #[test]
    fn trees_represent_the_insolid_sets(d in arb_digraph(1..=10, 25, 3), mode in arb_mode()) {
        let family = enumerate_insolid(&d, &d.all_nodes(), mode).unwrap();
        let tree = build_tree(&d, mode).unwrap();
        prop_assert!(verify_tree(&tree, &family));
    }

    #[test]
    fn shrinking_gives_a_cheaper_insolid_subset(d in arb_digraph(1..=10, 25, 3), mode in arb_mode(), bits in 1usize..1024) {
        let n = d.node_count();
        let x = bits & ((1usize << n) - 1);
        prop_assume!(x != 0);
        let set = set_of(x, n);
        let y = shrink_to_insolid(&d, &set, mode).unwrap();
        prop_assert!(y.is_subset(&set));
        prop_assert!(!y.is_empty());
        prop_assert!(d.indegree(&y, mode).unwrap() <= d.indegree(&set, mode).unwrap());
        prop_assert!(insolid_by_definition(&d, mode).contains(&mask_of(&y)));
    }

    #[test]
    fn best_subpart_matches_brute_force(d in arb_digraph(1..=6, 12, 1), k in 1u64..=4, bits in 1usize..64) {
        let n = d.node_count();
        let ground = bits & ((1usize << n) - 1);
        prop_assume!(ground != 0);
        let g = set_of(ground, n);
        let best = best_subpart(&d, &g, k, Mode::Unit).unwrap();
        prop_assert_eq!(Some(best.objective), brute_surplus(&d, &g, k, SizeFilter::Any));
        prop_assert!(best.parts.support().is_subset(&g));
        let all_large = (1..1usize << n).filter(|&m| m & !ground == 0).all(|m| indegrees(&d, Mode::Unit)[m] >= k as i64);
        prop_assert_eq!(best.is_empty(), all_large);
        if ground == (1usize << n) - 1 {
            prop_assert!(best.objective >= k as i64);
        }
    }

    #[test]
    fn constrained_subpart_matches_brute_force(d in arb_digraph(2..=6, 12, 1), k in 1u64..=4) {
        let best = best_constr_subpart(&d, k, Mode::Unit).unwrap();
        prop_assert!(best.len() >= 2);
        prop_assert_eq!(Some(best.objective), brute_surplus(&d, &d.all_nodes(), k, SizeFilter::AtLeast(2)));
    }

    #[test]
    fn fixed_subpart_matches_brute_force(d in arb_digraph(2..=6, 12, 4), mode in arb_mode(), t in 2usize..=4) {
        prop_assume!(t <= d.node_count());
        let best = best_fixed_subpart(&d, mode, t).unwrap();
        let brute = enum_subpartitions(&d.all_nodes(), SizeFilter::Exact(t))
            .unwrap()
            .iter()
            .map(|p| p.indegree_sum(&d, mode).unwrap())
            .min();
        prop_assert_eq!(best.len(), t);
        prop_assert_eq!(Some(best.objective), brute);
    }

    #[test]
    fn existence_matches_frank_and_is_monotone(d in arb_digraph(1..=6, 12, 1), k in 1u64..=4) {
        let fast = exists_k_union_arb(&d, k).unwrap();
        prop_assert_eq!(fast.exists(), brute_frank_check(&d, k).unwrap().holds);
        if !fast.exists() {
            for bigger in k + 1..=k + 3 {
                prop_assert!(!exists_k_union_arb(&d, bigger).unwrap().exists());
            }
        }
    }

    #[test]
    fn frank_check_matches_packing(d in arb_digraph(1..=4, 4, 1), k in 1u64..=2) {
        prop_assume!(d.unit_count() <= 8);
        prop_assert_eq!(brute_frank_check(&d, k).unwrap().holds, brute_arborescence_pack(&d, k, None).unwrap());
    }

    #[test]
    fn blockers_are_sound(d in arb_digraph(2..=6, 12, 4), k in 1u64..=3, root in 0usize..6) {
        let root = root % d.node_count();
        let card = block_karb_cardinality(&d, k).unwrap();
        let rest = d.remove(&card.removed).unwrap();
        prop_assert!(!exists_k_union_arb(&rest, k).unwrap().exists());
        if exists_k_union_arb(&d, k).unwrap().exists() {
            let constr = best_constr_subpart(&d, k, Mode::Unit).unwrap();
            prop_assert_eq!(card.total, k as i64 + 1 - constr.objective);
        } else {
            prop_assert_eq!(card.total, 0);
        }

        for res in [block_krarb_uniform(&d, root, k).unwrap(), block_krarb_weighted(&d, root, k).unwrap()] {
            let rest = d.remove(&res.removed).unwrap();
            prop_assert!(!exists_k_union_r_arb(&rest, root, k).unwrap().exists());
            res.verify(&d).unwrap();
        }
    }

    #[test]
    fn weighted_certificates_are_tight(d in arb_digraph(2..=4, 6, 4), k in 1u64..=2) {
        prop_assume!(d.unit_count() <= 10);
        let res = block_karb_weighted(&d, k).unwrap();
        let rest = d.remove(&res.removed).unwrap();
        prop_assert!(!exists_k_union_arb(&rest, k).unwrap().exists());
        if res.total > 0 {
            let Certificate::Subpartition(parts) = &res.certificate else { panic!("unrooted certificate") };
            let t = parts.len() as u64;
            prop_assert!((2..=k + 1).contains(&t));
            prop_assert_eq!(parts.indegree_sum(&rest, Mode::Unit).unwrap(), (k * (t - 1) - 1) as i64);
        }
    }
}
