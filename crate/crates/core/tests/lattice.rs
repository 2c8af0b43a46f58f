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
use schreier_lab::lattice::{
    build_archimedean, build_grid_d, build_hexagonal, build_product_with_cycle, build_square_diag, custom, line_graph,
    square_sublattices, GraphJson, Kind, LatticeGraph, Topology, VertexId,
};
use std::collections::{BTreeSet, HashSet};

fn regular(g: &LatticeGraph, deg: usize) -> bool {
    (0..g.n() as VertexId).all(|v| g.deg(v) == deg)
}

fn complete(n: usize) -> LatticeGraph {
    let es: Vec<_> = (0..n as VertexId).flat_map(|a| (a + 1..n as VertexId).map(move |b| (a, b))).collect();
    custom(n, &es).unwrap()
}

fn cycle(n: usize) -> LatticeGraph {
    let es: Vec<_> = (0..n as VertexId).map(|a| (a, (a + 1) % n as VertexId)).collect();
    custom(n, &es).unwrap()
}

fn k_ab(a: usize, b: usize) -> LatticeGraph {
    let es: Vec<_> = (0..a as VertexId).flat_map(|x| (0..b as VertexId).map(move |y| (x, a as VertexId + y))).collect();
    custom(a + b, &es).unwrap()
}

#[test]
fn small_square_torus() {
    let g = build_archimedean(Kind::Square, 4, 4, Topology::Torus).unwrap();
    assert_eq!((g.n(), g.m(), g.faces().len()), (16, 32, 16));
    assert!(g.faces().iter().all(|f| f.size() == 4));
    assert!(regular(&g, 4));
}

#[test]
fn small_triangular_torus() {
    let g = build_archimedean(Kind::Triangular, 3, 3, Topology::Torus).unwrap();
    assert_eq!((g.n(), g.m(), g.faces().len()), (9, 27, 18));
    assert!(g.faces().iter().all(|f| f.size() == 3));
}

#[test]
fn t3464_faces_around_a_vertex() {
    let g = build_archimedean(Kind::T3464, 4, 4, Topology::Torus).unwrap();
    assert!(regular(&g, 4));
    for v in 0..g.n() as VertexId {
        let mut sizes: Vec<usize> = g.vertex_faces(v).iter().map(|&f| g.faces()[f as usize].size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, [3, 4, 4, 6], "vertex {v}");
        // Cyclic order 3,4,6,4: consecutive faces around v share an edge,
        // so the face pairs across the edges at v are {3,4} or {4,6}.
        for &(_, e) in g.neighbors(v) {
            let [a, b] = g.edge_faces(e);
            let mut p = [g.faces()[a as usize].size(), g.faces()[b as usize].size()];
            p.sort_unstable();
            assert!(p == [3, 4] || p == [4, 6], "vertex {v} edge {e}: {p:?}");
        }
    }
}

#[test]
fn kagome_cells() {
    let g = build_archimedean(Kind::Kagome, 6, 6, Topology::Torus).unwrap();
    assert_eq!(g.n(), 3 * 36);
    assert!(regular(&g, 4));
    let tri = g.faces().iter().filter(|f| f.size() == 3).count();
    let hex = g.faces().iter().filter(|f| f.size() == 6).count();
    assert_eq!((tri, hex), (72, 36));
}

#[test]
fn grid_3d() {
    let g = build_grid_d(3, &[4, 4, 4], Topology::Torus).unwrap();
    assert_eq!((g.n(), g.m()), (64, 192));
    assert!(regular(&g, 6));
    assert!(g.two_colouring().is_some());
}

#[test]
fn grid_2d_is_the_square_lattice() {
    let a = build_grid_d(2, &[6, 6], Topology::Torus).unwrap();
    let b = build_archimedean(Kind::Square, 6, 6, Topology::Torus).unwrap();
    assert_eq!((a.n(), a.m()), (b.n(), b.m()));
    let edges = |g: &LatticeGraph| -> BTreeSet<(Vec<i32>, Vec<i32>)> {
        (0..g.m() as u32)
            .map(|e| {
                let (u, v) = g.endpoints(e);
                let (p, q) = (g.pos(u).to_vec(), g.pos(v).to_vec());
                if p < q {
                    (p, q)
                } else {
                    (q, p)
                }
            })
            .collect()
    };
    assert_eq!(edges(&a), edges(&b));
}

#[test]
fn products() {
    let g = build_product_with_cycle(&complete(3), 4).unwrap();
    assert_eq!((g.n(), g.m()), (12, 24));
    assert!(regular(&g, 4));
    let g = build_product_with_cycle(&cycle(4), 6).unwrap();
    assert_eq!(g.n(), 24);
    assert!(regular(&g, 4));
    assert!(g.two_colouring().is_some());
    let g = build_product_with_cycle(&k_ab(4, 4), 5).unwrap();
    assert_eq!(g.n(), 40);
    assert!(regular(&g, 6));
}

#[test]
fn line_graph_of_a_cycle_is_the_cycle() {
    let (lg, inc) = line_graph(&cycle(4)).unwrap();
    assert_eq!((lg.n(), lg.m()), (4, 4));
    assert!(regular(&lg, 2));
    assert_eq!(inc.clique_size(), 2);
}

#[test]
fn line_graph_of_square_torus() {
    let g = build_archimedean(Kind::Square, 4, 4, Topology::Torus).unwrap();
    let (lg, inc) = line_graph(&g).unwrap();
    assert_eq!(lg.n(), 32);
    assert!(regular(&lg, 6));
    assert_eq!(inc.members.len(), g.n());
    assert!(inc.members.iter().all(|c| c.len() == 4));
    // Every L-vertex lies in exactly the two cliques of its endpoints.
    let mut seen = vec![0; lg.n()];
    for (x, c) in inc.members.iter().enumerate() {
        for &l in c {
            seen[l as usize] += 1;
            let (a, b) = inc.pairs[l as usize];
            assert!(a as usize == x || b as usize == x);
        }
        for (i, &p) in c.iter().enumerate() {
            for &q in &c[i + 1..] {
                assert!(lg.edge_between(p, q).is_some());
            }
        }
    }
    assert!(seen.iter().all(|&s| s == 2));
}

#[test]
fn line_graph_of_hexagonal_is_kagome_like() {
    let hex = build_hexagonal(6, 6, Topology::Torus).unwrap();
    let kag = build_archimedean(Kind::Kagome, 6, 6, Topology::Torus).unwrap();
    let (lg, inc) = line_graph(&hex).unwrap();
    assert_eq!((lg.n(), lg.m()), (kag.n(), kag.m()));
    assert!(regular(&lg, 4));
    // Every vertex of the Kagome lattice lies on exactly two triangles and
    // no two triangles share an edge.
    let mut tri_per_vertex = vec![0; lg.n()];
    for c in &inc.members {
        assert_eq!(c.len(), 3);
        for &v in c {
            tri_per_vertex[v as usize] += 1;
        }
    }
    assert!(tri_per_vertex.iter().all(|&t| t == 2));
}

#[test]
fn king_graph_sublattices_partition_edges() {
    let g = build_square_diag(8, 8, Topology::Torus).unwrap();
    assert!(regular(&g, 8));
    let views = square_sublattices(&g).unwrap();
    let mut seen = HashSet::new();
    for v in &views {
        assert!(regular(&v.graph, 4));
        for &e in &v.emap {
            assert!(seen.insert(e));
        }
    }
    assert_eq!(seen.len(), g.m());
    assert!(square_sublattices(&build_square_diag(6, 6, Topology::Torus).unwrap()).is_err());
}

#[test]
fn box_windows_have_borders() {
    let g = build_archimedean(Kind::Square, 5, 5, Topology::Box).unwrap();
    assert!((0..g.n() as VertexId).any(|v| g.is_border(v)));
    assert_eq!(g.m(), 2 * 5 * 4);
    let border = (0..g.n() as VertexId).filter(|&v| g.is_border(v)).count();
    assert_eq!(border, 16);
}

#[test]
fn json_round_trip() {
    for g in [
        build_archimedean(Kind::T3464, 3, 3, Topology::Torus).unwrap(),
        build_archimedean(Kind::Kagome, 4, 4, Topology::Box).unwrap(),
        build_product_with_cycle(&complete(3), 5).unwrap(),
        build_grid_d(3, &[4, 4, 4], Topology::Torus).unwrap(),
    ] {
        let j = GraphJson::from_graph(&g);
        let s = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        let h = back.to_graph().unwrap();
        assert_eq!((h.n(), h.m(), h.kind), (g.n(), g.m(), g.kind));
        assert!((0..g.m() as u32).all(|e| g.endpoints(e) == h.endpoints(e)));
    }
}

fn kinds() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Square), Just(Kind::Triangular), Just(Kind::Kagome), Just(Kind::T3464)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tori_are_regular_and_euler(kind in kinds(), w in 3usize..9, h in 3usize..9) {
        let g = build_archimedean(kind, w, h, Topology::Torus).unwrap();
        let deg = if kind == Kind::Triangular { 6 } else { 4 };
        prop_assert!(regular(&g, deg));
        prop_assert_eq!(g.m() * 2, g.n() * deg);
        // Torus: V - E + F = 0.
        prop_assert_eq!(g.n() + g.faces().len(), g.m());
        // Each edge borders two faces; faces list each of their edges once.
        let mut count = vec![0; g.m()];
        for f in g.faces() {
            prop_assert_eq!(f.verts.len(), f.edges.len());
            for &e in &f.edges {
                count[e as usize] += 1;
            }
        }
        prop_assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn neighbour_lists_are_symmetric(kind in kinds(), w in 3usize..7, h in 3usize..7, boxed in any::<bool>()) {
        let top = if boxed { Topology::Box } else { Topology::Torus };
        let g = build_archimedean(kind, w, h, top).unwrap();
        for v in 0..g.n() as VertexId {
            for &(u, e) in g.neighbors(v) {
                prop_assert_eq!(g.other(e, v), u);
                prop_assert!(g.neighbors(u).iter().any(|&(x, f)| x == v && f == e));
            }
        }
    }

    #[test]
    fn grids_are_2d_regular(d in 2usize..5, side in 3usize..6) {
        let g = build_grid_d(d, &vec![side; d], Topology::Torus).unwrap();
        prop_assert_eq!(g.n(), side.pow(d as u32));
        prop_assert!(regular(&g, 2 * d));
        prop_assert_eq!(g.two_colouring().is_some(), side % 2 == 0);
    }

    #[test]
    fn line_graphs_are_4d_minus_2_regular(w in 3usize..7, h in 3usize..7) {
        let g = build_archimedean(Kind::Square, w, h, Topology::Torus).unwrap();
        let (lg, _) = line_graph(&g).unwrap();
        prop_assert_eq!(lg.n(), g.m());
        prop_assert!(regular(&lg, 6));
    }
}
