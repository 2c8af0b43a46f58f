// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use proptest::prelude::*;
use schreier_lab::decorators::{
    balanced_orientation_planar_using, balanced_orientation_planar_with, find_perfect_matching, grid_colouring, guards,
    inner_patterns, interface_patterns, layer_runs, orient_cycles, schreier_grid_d, schreier_grid_d_with,
    schreier_kagome_using, schreier_kagome_with, schreier_product, schreier_square_using, schreier_square_with,
    schreier_t3464, schreier_triangular_using, schreier_triangular_with, with_retries, Decoration, Orientation,
    ProductOptions,
};
use schreier_lab::hierarchy::{boundary, HierarchySource, HierarchyTree};
use schreier_lab::lattice::{
    build_archimedean, build_grid_d, build_product_with_cycle, custom, Kind, LatticeGraph, Topology, VertexId,
};
use schreier_lab::rng::LabelField;
use schreier_lab::verify::{check_balanced, check_schreier, monochrome_components, ComponentKind};
use schreier_lab::Error;
use std::collections::BTreeSet;

fn torus(kind: Kind, w: usize, h: usize) -> LatticeGraph {
    build_archimedean(kind, w, h, Topology::Torus).unwrap()
}

/// The whole window as one root cluster.
fn single_cluster(g: &LatticeGraph, colours: usize, eta: u8) -> HierarchyTree {
    let mut t = HierarchyTree::from_assignment(&vec![0; g.n()], &[0], 0);
    t.colours = colours;
    t.eta = Some(vec![eta]);
    t
}

fn assert_valid(g: &LatticeGraph, dec: &Decoration) {
    let r = check_schreier(g, dec);
    assert!(r.ok(), "{:?}", r.first_failure());
}

fn cycle_graph(n: usize) -> LatticeGraph {
    let es: Vec<_> = (0..n as VertexId).map(|a| (a, (a + 1) % n as VertexId)).collect();
    custom(n, &es).unwrap()
}

#[test]
fn four_guards_per_edge() {
    let g = torus(Kind::Square, 4, 4);
    for e in 0..g.m() as u32 {
        let gs = guards(&g, e).unwrap();
        assert_eq!(gs.len(), 4);
        for &f in &gs {
            assert!(guards(&g, f).unwrap().contains(&e));
            assert_ne!(g.dir(f), g.dir(e));
        }
        let (a, b) = g.endpoints(e);
        let incident: BTreeSet<u32> =
            g.neighbors(a).iter().chain(g.neighbors(b)).map(|&(_, f)| f).filter(|&f| f != e).collect();
        let collinear: BTreeSet<u32> = incident.iter().copied().filter(|&f| g.dir(f) == g.dir(e)).collect();
        assert_eq!(collinear.len(), 2);
        let mut all: BTreeSet<u32> = gs.into_iter().collect();
        all.extend(collinear);
        assert_eq!(all, incident);
    }
}

#[test]
fn lone_cycle_gets_a_strong_orientation() {
    let g = cycle_graph(4);
    let mut seen = BTreeSet::new();
    for seed in 0..64 {
        let dec = orient_cycles(&g, &[0; 4], 1, &LabelField::new(seed, &g)).unwrap();
        assert_valid(&g, &dec);
        seen.insert(dec.head.clone());
    }
    assert_eq!(seen.len(), 2);
}

#[test]
fn square_single_cluster_is_all_four_cycles() {
    let g = torus(Kind::Square, 16, 16);
    let hb = boundary(&g, &single_cluster(&g, 2, 1)).unwrap();
    let out = schreier_square_with(&g, &LabelField::new(1, &g), hb, 8).unwrap();
    assert_valid(&g, &out.decoration);
    let census = monochrome_components(&g, &out.decoration);
    assert!(census.components.iter().all(|c| c.len() == 4 && c.contractible()));
}

#[test]
fn square_decorations() {
    let g = torus(Kind::Square, 64, 64);
    for source in [HierarchySource::Percolation, HierarchySource::Toast] {
        for seed in 0..4 {
            let r = with_retries(&LabelField::new(seed, &g), 16, |f| schreier_square_using(&g, f, source, 8)).unwrap();
            let dec = &r.value.decoration;
            assert_valid(&g, dec);
            assert!(monochrome_components(&g, dec).all_contractible_cycles());
            assert_eq!(r.value.stats["recolour_parity_violations"], 0.0);
            for v in 0..g.n() as VertexId {
                let red = g.neighbors(v).iter().filter(|&&(_, e)| dec.colour[e as usize] == 0).count();
                assert_eq!(red, 2);
            }
        }
    }
}

#[test]
fn triangular_single_cluster_is_closed_by_the_seam() {
    let g = torus(Kind::Triangular, 32, 32);
    let hb = boundary(&g, &single_cluster(&g, 4, 1)).unwrap();
    let out = schreier_triangular_with(&g, &LabelField::new(2, &g), hb, 8).unwrap();
    assert_valid(&g, &out.decoration);
    assert!(monochrome_components(&g, &out.decoration).all_contractible_cycles());
}

#[test]
fn triangular_decorations() {
    let g = torus(Kind::Triangular, 96, 96);
    for source in [HierarchySource::Percolation, HierarchySource::Toast] {
        for seed in 0..2 {
            let r =
                with_retries(&LabelField::new(seed, &g), 16, |f| schreier_triangular_using(&g, f, source, 8)).unwrap();
            assert_valid(&g, &r.value.decoration);
            assert!(monochrome_components(&g, &r.value.decoration).all_contractible_cycles());
        }
    }
}

#[test]
fn kagome_single_cluster_is_all_triangles() {
    let g = torus(Kind::Kagome, 12, 12);
    let hb = boundary(&g, &single_cluster(&g, 1, 1)).unwrap();
    let out = schreier_kagome_with(&g, &LabelField::new(3, &g), hb, 8).unwrap();
    assert_valid(&g, &out.decoration);
    let census = monochrome_components(&g, &out.decoration);
    assert!(census.components.iter().all(|c| c.len() == 3 && c.kind == ComponentKind::Cycle));
}

#[test]
fn kagome_decorations() {
    let g = torus(Kind::Kagome, 48, 48);
    for seed in 0..3 {
        let r =
            with_retries(&LabelField::new(seed, &g), 16, |f| schreier_kagome_using(&g, f, HierarchySource::Toast, 8))
                .unwrap();
        assert_valid(&g, &r.value.decoration);
        assert_eq!(r.value.stats.get("boundary_touch_violations").copied().unwrap_or(0.0), 0.0);
    }
}

#[test]
fn t3464_triangles_and_hexagons() {
    for (w, h) in [(4, 4), (8, 6), (16, 16)] {
        let g = torus(Kind::T3464, w, h);
        for seed in 0..5 {
            let out = schreier_t3464(&g, &LabelField::new(seed, &g)).unwrap();
            assert_valid(&g, &out.decoration);
            let census = monochrome_components(&g, &out.decoration);
            assert_eq!(census.cycle_lengths(0).keys().copied().collect::<Vec<_>>(), [3]);
            assert_eq!(census.cycle_lengths(1).keys().copied().collect::<Vec<_>>(), [6]);
            assert_eq!(census.cycle_lengths(0).values().sum::<usize>(), 2 * w * h);
        }
    }
}

#[test]
fn grid_single_cluster_needs_the_seam() {
    let g = build_grid_d(3, &[12, 12, 12], Topology::Torus).unwrap();
    let t = single_cluster(&g, 4, 1);
    let f = LabelField::new(4, &g);
    // Without the seam the straight colour runs in full torus lines.
    let iface = interface_patterns(&t, &f, 3).unwrap();
    let inner = inner_patterns(&g, &t, &f, &iface).unwrap();
    let colour = grid_colouring(&g, &t, &iface, &inner);
    let raw = orient_cycles(&g, &colour, 3, &f).unwrap();
    assert_valid(&g, &raw);
    let census = monochrome_components(&g, &raw);
    let straight = inner[0].as_ref().unwrap();
    let s = (0..3u8).find(|&c| c != straight.pair.0 && c != straight.pair.1).unwrap();
    assert!(census.components.iter().filter(|c| c.colour == s).all(|c| !c.contractible() && c.len() == 12));
    assert!(census.components.iter().filter(|c| c.colour != s).all(|c| c.len() == 4));
    assert!(!census.all_contractible_cycles());

    let out = schreier_grid_d_with(&g, &f, t, 8).unwrap();
    assert_valid(&g, &out.decoration);
    assert!(monochrome_components(&g, &out.decoration).all_contractible_cycles());
}

#[test]
fn grid_decorations() {
    let g = build_grid_d(3, &[48, 48, 48], Topology::Torus).unwrap();
    for seed in 0..2 {
        let r = with_retries(&LabelField::new(seed, &g), 16, |f| schreier_grid_d(&g, f, 8)).unwrap();
        assert_valid(&g, &r.value.decoration);
        assert!(monochrome_components(&g, &r.value.decoration).all_contractible_cycles());
    }
    assert!(matches!(
        schreier_grid_d(&build_grid_d(3, &[8, 8, 8], Topology::Torus).unwrap(), &LabelField::from_parts(0, 0), 8),
        Err(Error::WindowTooSmall(_))
    ));
}

fn complete_bipartite(a: usize, b: usize) -> LatticeGraph {
    let es: Vec<_> = (0..a as VertexId).flat_map(|x| (0..b as VertexId).map(move |y| (x, a as VertexId + y))).collect();
    custom(a + b, &es).unwrap()
}

#[test]
fn products_have_even_first_colour_cycles() {
    for (h, m) in [(cycle_graph(4), 12), (complete_bipartite(4, 4), 10)] {
        let g = build_product_with_cycle(&h, m).unwrap();
        let matching = find_perfect_matching(&h).unwrap();
        for tightened in [false, true] {
            for seed in 0..10 {
                let f = LabelField::new(seed, &g);
                let r = with_retries(&f, 16, |f| schreier_product(&g, &h, &matching, f, ProductOptions { tightened }))
                    .unwrap();
                assert_valid(&g, &r.value.decoration);
                let lens = monochrome_components(&g, &r.value.decoration).cycle_lengths(0);
                assert!(lens.keys().all(|l| l % 2 == 0), "{lens:?}");
                if tightened {
                    assert!(lens.keys().all(|&l| l <= 3 * h.n()), "{lens:?}");
                }
            }
        }
    }
}

#[test]
fn product_runs_are_short() {
    let f = LabelField::from_parts(5, 1);
    let (runs, _) = layer_runs(4, 40, &f, ProductOptions { tightened: true }).unwrap();
    assert!(runs.iter().all(|&(_, len)| (2..=3).contains(&len)), "{runs:?}");
}

#[test]
fn matchings_of_small_graphs() {
    assert!(find_perfect_matching(&cycle_graph(5)).is_none());
    let m = find_perfect_matching(&complete_bipartite(3, 3)).unwrap();
    assert_eq!(m.len(), 3);
}

fn faces_strongly_oriented(g: &LatticeGraph, head: &[VertexId]) -> bool {
    g.faces().iter().all(|f| {
        let k = f.size();
        let fwd = (0..k).all(|i| head[f.edges[i] as usize] == f.verts[(i + 1) % k]);
        let back = (0..k).all(|i| head[f.edges[i] as usize] == f.verts[i]);
        fwd || back
    })
}

#[test]
fn single_cluster_orientation_is_the_chessboard() {
    for kind in [Kind::Square, Kind::Triangular] {
        let g = torus(kind, 16, 16);
        let hb = boundary(&g, &single_cluster(&g, 1, 1)).unwrap();
        let out = balanced_orientation_planar_with(&g, &LabelField::new(6, &g), hb, 8).unwrap();
        assert!(check_balanced(&g, &out.orientation).ok());
        assert!(faces_strongly_oriented(&g, &out.orientation.head));
    }
}

#[test]
fn planar_orientations() {
    for kind in [Kind::Square, Kind::Triangular, Kind::Kagome] {
        let g = torus(kind, 48, 48);
        for seed in 0..3 {
            let r = with_retries(&LabelField::new(seed, &g), 16, |f| {
                balanced_orientation_planar_using(&g, f, HierarchySource::Toast, 8)
            })
            .unwrap();
            let rep = check_balanced(&g, &r.value.orientation);
            assert!(rep.ok(), "{kind:?}: {:?}", rep.first_failure());
        }
    }
}

#[test]
fn retries() {
    let f = LabelField::from_parts(0, 0);
    let r =
        with_retries(&f, 5, |f| if f.epoch() < 3 { Err(Error::WrappingCluster(1)) } else { Ok(f.epoch()) }).unwrap();
    assert_eq!((r.value, r.retries, r.rejected.len()), (3, 3, 3));
    let e = with_retries(&f, 2, |_| -> schreier_lab::Result<()> { Err(Error::SeamBlocked) }).unwrap_err();
    assert!(matches!(e, Error::RetriesExhausted(3, _)));
    let mut calls = 0;
    let e = with_retries(&f, 5, |_| -> schreier_lab::Result<()> {
        calls += 1;
        Err(Error::OddD(3))
    })
    .unwrap_err();
    assert!(matches!(e, Error::OddD(3)));
    assert_eq!(calls, 1);
}

#[test]
fn wrong_kinds_are_rejected() {
    let sq = torus(Kind::Square, 8, 8);
    let f = LabelField::new(0, &sq);
    assert!(matches!(schreier_t3464(&sq, &f), Err(Error::WrongKind { .. })));
    assert!(schreier_kagome_using(&sq, &f, HierarchySource::Toast, 8).is_err());
    let odd = torus(Kind::Square, 9, 8);
    assert!(schreier_square_using(&odd, &f, HierarchySource::Toast, 8).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn square_toast_is_valid(seed in any::<u64>()) {
        let g = torus(Kind::Square, 48, 48);
        let r = with_retries(&LabelField::new(seed, &g), 16, |f| schreier_square_using(&g, f, HierarchySource::Toast, 8)).unwrap();
        prop_assert!(check_schreier(&g, &r.value.decoration).ok());
        prop_assert!(monochrome_components(&g, &r.value.decoration).all_contractible_cycles());
    }

    #[test]
    fn t3464_is_valid(seed in any::<u64>(), w in 3usize..10, h in 3usize..10) {
        let g = torus(Kind::T3464, w, h);
        let out = schreier_t3464(&g, &LabelField::new(seed, &g)).unwrap();
        prop_assert!(check_schreier(&g, &out.decoration).ok());
    }

    #[test]
    fn decoration_reversal_stays_balanced(seed in any::<u64>()) {
        let g = torus(Kind::T3464, 6, 6);
        let out = schreier_t3464(&g, &LabelField::new(seed, &g)).unwrap();
        let head = (0..g.m() as u32).map(|e| g.other(e, out.decoration.head[e as usize])).collect();
        let or = Orientation { head };
        prop_assert!(check_balanced(&g, &or).ok());
    }
}
