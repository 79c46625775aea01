use std::collections::BTreeMap;

use antimagic_core::constructions::{apply_crossing, apply_merge, build_base_graph, merge_groups};
use antimagic_core::formulas::pair_constant;
use antimagic_core::io::{decode_graph6, graph_from_json, graph_to_graph6, graph_to_json};
use antimagic_core::*;
use proptest::prelude::*;
use proptest::sample::Index;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::M2), Just(Family::M3)]
}

fn plain_params() -> impl Strategy<Value = FamilyParams> {
    (family(), 1u32..=6, 1u32..=10).prop_map(|(f, n, k)| FamilyParams::new(f, n, k).unwrap())
}

fn merged_params() -> impl Strategy<Value = FamilyParams> {
    (family(), 1u32..=5, 1u32..=2, 1u32..=2).prop_map(|(f, n, r, s)| FamilyParams::merged(f, n, r, s).unwrap())
}

fn sorted_labels(g: &LabeledGraph) -> Vec<Label> {
    let mut l = g.labels().unwrap();
    l.sort_unstable();
    l
}

/// Degree and color of every u/v vertex.
fn path_side(g: &LabeledGraph) -> BTreeMap<VertexId, (usize, Color)> {
    let colors = induced_colors(g).unwrap();
    g.vertices()
        .filter(|(v, _)| v.role().is_path_vertex())
        .map(|(v, _)| (v, (g.degree(v), colors[&v])))
        .collect()
}

/// A tripartite graph on up to seven vertices with at most `max_edges`
/// edges, each vertex carrying a random part.
fn small_graph(max_edges: usize) -> impl Strategy<Value = LabeledGraph> {
    (prop::collection::vec(1u8..=3, 2..=7), prop::collection::vec((0usize..7, 0usize..7), 1..=max_edges)).prop_map(
        |(parts, pairs)| {
            let mut g = LabeledGraph::new();
            for (i, &p) in parts.iter().enumerate() {
                g.add_vertex(VertexId::u(i as u32 + 1), PartClass::new(p).unwrap()).unwrap();
            }
            for (a, b) in pairs {
                let (a, b) = (a % parts.len(), b % parts.len());
                if parts[a] != parts[b] {
                    let _ = g.add_edge(VertexId::u(a as u32 + 1), VertexId::u(b as u32 + 1), None);
                }
            }
            g
        },
    )
}

fn permutations(items: &mut Vec<Label>, k: usize, out: &mut Vec<Vec<Label>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn handshake_holds_for_any_bijection(params in plain_params(), seed in any::<u64>()) {
        let mut g = build_family(params, Stage::Crossed).unwrap();
        let q = g.size() as Label;
        let mut labels: Vec<Label> = (1..=q).collect();
        // A cheap deterministic shuffle keyed by the seed.
        let mut state = seed | 1;
        for i in (1..labels.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            labels.swap(i, (state % (i as u64 + 1)) as usize);
        }
        g.relabel(&labels);
        let total: Color = induced_colors(&g).unwrap().values().sum();
        prop_assert_eq!(total, q * (q + 1));
    }

    #[test]
    fn constructed_graphs_are_certified_optimal(params in plain_params(), merged in merged_params()) {
        for (p, stage) in [(params, Stage::Base), (params, Stage::Crossed), (merged, Stage::Crossed), (merged, Stage::Merged)] {
            let g = build_family(p, stage).unwrap();
            prop_assert!(g.partition_violation().is_none());
            let report = verify_local_antimagic(&g).unwrap();
            prop_assert!(report.is_bijection);
            prop_assert_eq!(chromatic_lower_bound(&g).unwrap(), 3);
            // The base stage is only an intermediate; colors may clash there.
            if stage != Stage::Base {
                prop_assert!(report.is_local_antimagic);
                prop_assert_eq!(report.c_f, 3);
                prop_assert_eq!(report.chi_la_bracket.exact(), Some(3));
            }
        }
    }

    #[test]
    fn verification_is_deterministic(params in merged_params()) {
        let g = build_family(params, Stage::Merged).unwrap();
        let h = build_family(params, Stage::Merged).unwrap();
        prop_assert_eq!(&g, &h);
        prop_assert_eq!(verify_local_antimagic(&g).unwrap(), verify_local_antimagic(&h).unwrap());
        prop_assert_eq!(graph_to_json(&g), graph_to_json(&h));
    }

    #[test]
    fn matrices_are_bijections_with_constant_pairings(params in plain_params()) {
        let mat = build_matrix(params).unwrap();
        let mut values: Vec<Label> = mat.values().collect();
        values.sort_unstable();
        prop_assert_eq!(values, (1..=params.size()).collect::<Vec<_>>());

        let (k, m) = (params.k(), params.leaves());
        let pc = pair_constant(&params);
        for j in 1..=m {
            let (ux, vx) = (RowRole::UX(j), RowRole::VX(j));
            for i in 1..=2 * k + 1 {
                let mirror = params.mirror(i);
                prop_assert_eq!(mat.cell(ux, i).unwrap() + mat.cell(vx, mirror).unwrap(), pc);
            }
        }
    }

    #[test]
    fn crossing_keeps_labels_and_path_colors(params in plain_params()) {
        let base = build_base_graph(&build_matrix(params).unwrap()).unwrap();
        let crossed = apply_crossing(&base, &params).unwrap();
        prop_assert_eq!(sorted_labels(&base), sorted_labels(&crossed));
        prop_assert_eq!(path_side(&base), path_side(&crossed));
        prop_assert_eq!(graph_stats(&base).components, params.columns() as usize);
        prop_assert_eq!(graph_stats(&crossed).components, params.k() as usize + 1);
    }

    #[test]
    fn merging_sums_constituent_colors(params in merged_params()) {
        let crossed = build_family(params, Stage::Crossed).unwrap();
        let merged = apply_merge(&crossed, &params).unwrap();
        prop_assert_eq!(sorted_labels(&crossed), sorted_labels(&merged));
        prop_assert_eq!(crossed.size(), merged.size());
        let before = induced_colors(&crossed).unwrap();
        let after = induced_colors(&merged).unwrap();
        for (target, group) in merge_groups(&params).unwrap() {
            let sum: Color = group.iter().map(|v| before[v]).sum();
            prop_assert_eq!(after[&target], sum);
        }
        let r = params.factorization().unwrap().r as usize;
        prop_assert_eq!(graph_stats(&merged).components, r + 1);
    }

    #[test]
    fn merged_regularity_iff_m3_with_n_twice_s(params in merged_params()) {
        let g = build_family(params, Stage::Merged).unwrap();
        let s = params.factorization().unwrap().s;
        let expect = (params.family() == Family::M3 && params.n() == 2 * s).then_some(2 * params.n() as usize + 2);
        prop_assert_eq!(graph_stats(&g).regular, expect);
    }

    #[test]
    fn closed_forms_match_built_graphs(params in merged_params()) {
        prop_assert!(params.k() >= 4);
        let triple = color_triple(params);
        prop_assert!(triple.c_u > triple.c_v);
        prop_assert!(triple.pairwise_distinct());
        prop_assert!(distinctness_certificate(params).is_ok());
        let observed = verify_local_antimagic(&build_family(params, Stage::Merged).unwrap()).unwrap();
        prop_assert_eq!(observed.distinct_colors, triple.sorted().to_vec());
    }

    #[test]
    fn json_round_trip_is_byte_identical(params in merged_params()) {
        let g = build_family(params, Stage::Merged).unwrap();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_json(&back), text);
        let (g6, _) = graph_to_graph6(&g);
        let (n, edges) = decode_graph6(&g6).unwrap();
        prop_assert_eq!((n, edges.len()), (g.order(), g.size()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn swaps_preserve_every_color(params in merged_params(), pick in any::<Index>()) {
        let g = build_family(params, Stage::Merged).unwrap();
        let moves = find_connecting_swaps(&g);
        prop_assert!(!moves.is_empty());
        let mv = pick.get(&moves);
        let h = apply_swap(&g, mv).unwrap();
        prop_assert_eq!(induced_colors(&h).unwrap(), induced_colors(&g).unwrap());
        prop_assert_eq!(sorted_labels(&h), sorted_labels(&g));
        prop_assert_eq!(path_side(&h), path_side(&g));
        prop_assert!(graph_stats(&h).components < graph_stats(&g).components);
        // Applying the mirrored move undoes it.
        let back = SwapMove { center_a: mv.center_b, center_b: mv.center_a, pair_a: [Edge::new(mv.center_b, mv.pair_a[0].other(mv.center_a).unwrap()).unwrap(), Edge::new(mv.center_b, mv.pair_a[1].other(mv.center_a).unwrap()).unwrap()], pair_b: [Edge::new(mv.center_a, mv.pair_b[0].other(mv.center_b).unwrap()).unwrap(), Edge::new(mv.center_a, mv.pair_b[1].other(mv.center_b).unwrap()).unwrap()] };
        prop_assert_eq!(apply_swap(&h, &back).unwrap(), g);
    }

    #[test]
    fn oracle_finds_the_true_minimum(g in small_graph(6)) {
        let result = exhaustive_chi_la(&g, OracleOptions::default()).unwrap();
        let mut all = Vec::new();
        permutations(&mut (1..=g.size() as Label).collect(), 0, &mut all);
        let mut best: Option<usize> = None;
        let mut h = g.clone();
        for labels in &all {
            h.relabel(labels);
            let report = verify_local_antimagic(&h).unwrap();
            if report.is_local_antimagic {
                best = Some(best.map_or(report.c_f, |b| b.min(report.c_f)));
            }
        }
        prop_assert_eq!(result.chi_la, best);
        if let Some(w) = result.witness_graph(&g) {
            let report = verify_local_antimagic(&w).unwrap();
            prop_assert!(report.is_local_antimagic);
            prop_assert_eq!(Some(report.c_f), result.chi_la);
        }
        let unpruned = exhaustive_chi_la(&g, OracleOptions { prune: false, ..OracleOptions::default() }).unwrap();
        prop_assert_eq!(unpruned.labelings_tried, all.len() as u64);
        prop_assert_eq!(unpruned.chi_la, result.chi_la);
    }

    #[test]
    fn oracle_ignores_vertex_names(g in small_graph(7), rotate in 1u32..7) {
        // Same graph with every vertex renamed by a cyclic shift.
        let order = g.order() as u32;
        let rename = |v: VertexId| VertexId::u((v.copy_index() - 1 + rotate) % order + 1);
        let mut h = LabeledGraph::new();
        for (v, part) in g.vertices() {
            h.add_vertex(rename(v), part).unwrap();
        }
        for (e, _) in g.edges() {
            let (a, b) = e.endpoints();
            h.add_edge(rename(a), rename(b), None).unwrap();
        }
        let opts = OracleOptions::default();
        prop_assert_eq!(exhaustive_chi_la(&g, opts).unwrap().chi_la, exhaustive_chi_la(&h, opts).unwrap().chi_la);
    }

    #[test]
    fn a_p2_component_rules_out_any_labeling(g in small_graph(5)) {
        // Attach a disjoint edge on two fresh vertices.
        let mut h = g.clone();
        let (a, b) = (VertexId::v(1), VertexId::v(2));
        h.add_vertex(a, PartClass::ONE).unwrap();
        h.add_vertex(b, PartClass::TWO).unwrap();
        h.add_edge(a, b, None).unwrap();
        prop_assert_eq!(exhaustive_chi_la(&h, OracleOptions::default()).unwrap().chi_la, None);
    }

    #[test]
    fn improper_partitions_are_rejected(g in small_graph(6)) {
        let mut h = g.clone();
        let (a, b) = (VertexId::v(1), VertexId::v(2));
        h.add_vertex(a, PartClass::TWO).unwrap();
        h.add_vertex(b, PartClass::TWO).unwrap();
        h.add_edge(a, b, None).unwrap();
        prop_assert!(h.partition_violation().is_some());
        prop_assert!(chromatic_lower_bound(&h).is_err());
    }
}
