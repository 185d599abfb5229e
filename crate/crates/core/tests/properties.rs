mod common;

use std::sync::Arc;

use bisubdiv::edgelist::{parse_edge_list, to_edge_list_string};
use bisubdiv::good_embed::{deficiency, extend_leaf, prune, verify_good};
use bisubdiv::joinedness::{extract_expander, is_alpha_joined};
use bisubdiv::quasirandom::{check_discrepancy, relative_deviation, DiscrepancyMode, QuasiParams};
use bisubdiv::subdiv::{embed_subdivision, EmbedOptions};
use bisubdiv::*;
use common::{members, random_embedding, random_host, rng, Oracle};
use proptest::prelude::*;

fn graph(max: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max, 1..=max, any::<u64>(), 0.0..=1.0f64)
        .prop_map(|(n1, n2, seed, p)| random_host(&mut rng(seed), n1, n2, p))
}

fn mask_set(part: PartId, size: usize, mask: u64) -> VertexSet {
    VertexSet::new(part, members(mask & ((1u64 << size) - 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adjacency_is_symmetric(g in graph(10)) {
        for i in 0..g.size1() {
            for j in 0..g.size2() {
                let (u, v) = (VertexRef::one(i), VertexRef::two(j));
                prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                prop_assert_eq!(g.row(u).contains(j), g.row(v).contains(i));
            }
        }
    }

    #[test]
    fn degree_sums_count_edges(g in graph(10)) {
        for part in PartId::BOTH {
            let s: usize = (0..g.size(part)).map(|i| g.degree(VertexRef::new(part, i))).sum();
            prop_assert_eq!(s, g.edge_count());
        }
    }

    #[test]
    fn neighbourhood_of_union(g in graph(10), a in any::<u64>(), b in any::<u64>()) {
        let x = mask_set(PartId::One, g.size1(), a);
        let y = mask_set(PartId::One, g.size1(), b);
        let lhs = g.neighborhood(&x.union(&y));
        let rhs = g.neighborhood(&x).union(&g.neighborhood(&y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn edge_list_round_trips(g in graph(10)) {
        let text = to_edge_list_string(&g);
        prop_assert_eq!(parse_edge_list(text.as_bytes()).unwrap(), g);
    }

    #[test]
    fn single_sets_expand_iff_min_degree(g in graph(8), d in 0i64..5) {
        let w = g
            .is_expanding(1, Rational::from_integer(d), ExpansionMode::Exhaustive, &mut Budget::default())
            .unwrap();
        let min = g.min_degree(PartId::One).min(g.min_degree(PartId::Two));
        prop_assert_eq!(w.is_none(), min as i64 >= d);
    }

    #[test]
    fn deficiency_is_submodular(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let mut r = rng(seed);
        let host = Arc::new(random_host(&mut r, 6, 6, 0.6));
        let e = random_embedding(&mut r, host, 3, 2, 6);
        for part in PartId::BOTH {
            let (x, y) = (mask_set(part, 6, a), mask_set(part, 6, b));
            let r = |s: &VertexSet| deficiency(&e, s, 2).unwrap();
            prop_assert!(r(&x.union(&y)) + r(&x.intersection(&y)) <= r(&x) + r(&y));
        }
    }

    #[test]
    fn zero_sets_close_under_union(seed in any::<u64>()) {
        let mut r = rng(seed);
        let host = Arc::new(random_host(&mut r, 6, 6, 0.95));
        let (n, d) = (1usize, 0usize);
        let e = random_embedding(&mut r, host.clone(), n, d, 2);
        let expanding = host
            .is_expanding(2 * n, Rational::from_integer(d as i64 + 2), ExpansionMode::Exhaustive, &mut Budget::default())
            .unwrap()
            .is_none();
        let oracle = Oracle::new(&e);
        prop_assume!(expanding && oracle.min_r(2 * n, d) >= 0);
        for part in PartId::BOTH {
            let zeros: Vec<u64> = (1u64..64)
                .filter(|&m| m.count_ones() as usize <= n && oracle.r(part, m, d) == 0)
                .collect();
            for &x in &zeros {
                for &y in &zeros {
                    prop_assert_eq!(oracle.r(part, x | y, d), 0);
                    prop_assert!((x | y).count_ones() as usize <= n);
                }
            }
        }
    }

    #[test]
    fn pruning_keeps_goodness(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let host = Arc::new(random_host(&mut r, 7, 7, 0.8));
        let e = random_embedding(&mut r, host, 3, 2, 8);
        let good = |e: &Embedding| verify_good(e, n, 2, GoodnessMode::Exhaustive, &mut Budget::default()).unwrap().good;
        prop_assume!(good(&e));
        for v in e.pattern().vertices().filter(|&v| e.pattern().degree(v) <= 1) {
            prop_assert!(good(&prune(&e, &[v]).unwrap()));
        }
    }

    #[test]
    fn extend_then_prune_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let host = Arc::new(random_host(&mut r, 10, 10, 0.9));
        let mut e = Embedding::empty(host);
        let w = e.add_isolated(VertexRef::one(0)).unwrap();
        if let Ok(x) = extend_leaf(&e, w, 1, 2, ExtendMode::Certified, &mut Budget::default()) {
            prop_assert_eq!(prune(&x.embedding, &[x.leaf]).unwrap().pairs(), e.pairs());
        }
    }

    #[test]
    fn joinedness_matches_double_enumeration(n in 2usize..=10, seed in any::<u64>(), p in 0.3..=1.0f64, den in 2i64..=5) {
        let g = random_host(&mut rng(seed), n, n, p);
        let alpha = Alpha::reciprocal(den).unwrap();
        let a = alpha.ceil_of(n);
        let mut empty_pair = false;
        'outer: for ma in 0u64..(1 << n) {
            if ma.count_ones() as usize != a {
                continue;
            }
            for mb in 0u64..(1 << n) {
                if mb.count_ones() as usize == a
                    && g.edge_count_between(&mask_set(PartId::One, n, ma), &mask_set(PartId::Two, n, mb)) == 0
                {
                    empty_pair = true;
                    break 'outer;
                }
            }
        }
        let v = is_alpha_joined(&g, alpha, &mut Budget::default()).unwrap();
        prop_assert_eq!(v.joined, !empty_pair);
        if let (Some(x), Some(y)) = (&v.witness_a, &v.witness_b) {
            prop_assert_eq!((x.len(), y.len()), (a, a));
            prop_assert_eq!(g.edge_count_between(x, y), 0);
        }
    }

    #[test]
    fn removal_log_accounts_for_every_deletion(n in 12usize..=16, seed in any::<u64>(), p in 0.5..=1.0f64) {
        let g = random_host(&mut rng(seed), n, n, p);
        let alpha = Alpha::reciprocal(6).unwrap();
        if let Ok(r) = extract_expander(&g, alpha, YChoice::First, &mut Budget::default()) {
            for part in PartId::BOTH {
                let logged: usize = r.removal_log.iter().filter(|s| s.part == part).map(|s| s.removed.len()).sum();
                prop_assert_eq!(logged, r.removed(part).len());
                prop_assert_eq!(r.kept(part).len() + r.removed(part).len(), n);
                prop_assert!(r.removed(part).members.iter().all(|&v| !r.kept(part).contains(v)));
                prop_assert!(r.y_prime(part).members.iter().all(|&v| r.kept(part).contains(v)));
            }
        }
    }
}

#[test]
fn discrepancy_agrees_with_brute_force() {
    for seed in 0..3 {
        let n = 12;
        let g = random_host(&mut rng(seed), n, n, 0.5);
        let q = QuasiParams {
            n_part: n,
            p: 0.5,
            epsilon: 0.1,
            delta: 0.5,
            c3n: 8,
        };
        let rep =
            check_discrepancy(&g, &q, DiscrepancyMode::Exhaustive, &mut Budget::default()).unwrap();
        let mut best = 0.0f64;
        let sets: Vec<u64> = (0u64..1 << n)
            .filter(|m| m.count_ones() as usize >= q.c3n)
            .collect();
        for &u in &sets {
            let us = mask_set(PartId::One, n, u);
            for &w in &sets {
                let ws = mask_set(PartId::Two, n, w);
                let d = relative_deviation(g.edge_count_between(&us, &ws), q.p, us.len(), ws.len());
                best = best.max(d);
            }
        }
        assert!(
            (rep.max_deviation - best).abs() < 1e-12,
            "{} vs {best}",
            rep.max_deviation
        );
        let e = g.edge_count_between(&rep.worst_u, &rep.worst_w);
        let d = relative_deviation(e, q.p, rep.worst_u.len(), rep.worst_w.len());
        assert!((d - best).abs() < 1e-12);
    }
}

#[test]
fn edge_order_does_not_affect_validity() {
    let spec = SubdivisionSpec::uniform(BaseGraph::cycle(4), 14).unwrap();
    let host = BipartiteGraph::complete(1792, 1792);
    let alpha = Alpha::reciprocal(32).unwrap();
    for order in [vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![2, 0, 3, 1]] {
        let opts = EmbedOptions {
            degree: Some(3),
            edge_order: Some(order.clone()),
            ..EmbedOptions::default()
        };
        let out = embed_subdivision(&host, &spec, alpha, &opts).unwrap();
        assert!(out.report.audit.pass, "{order:?}");
        assert_eq!(out.report.edge_order, order);
        assert_eq!(out.report.audit.image_size, spec.subdivided_vertex_count());
    }
}
