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
use schreier_lab::hierarchy::{
    boundary, build_hierarchy, clusters_from_colouring, coarsen, colorize, maximal_r_discrete, percolation_clusters,
    rounds_for_spacing, space, spaced_tree, toast_hierarchy, HierarchySource, HierarchyTree,
};
use schreier_lab::lattice::{
    augmented_adjacency, build_archimedean, custom, Colour, FaceChoice, Kind, LatticeGraph, Topology, VertexId,
};
use schreier_lab::rng::channels::hierarchy::COARSEN;
use schreier_lab::rng::LabelField;
use schreier_lab::verify::{check_boundary, check_hierarchy};
use std::collections::{BTreeSet, VecDeque};

fn square(w: usize, h: usize) -> LatticeGraph {
    build_archimedean(Kind::Square, w, h, Topology::Torus).unwrap()
}

fn vid(g: &LatticeGraph, x: i32, y: i32) -> VertexId {
    (0..g.n() as VertexId).find(|&v| g.pos(v)[..2] == [x, y]).unwrap()
}

#[test]
fn face_diagonals_follow_the_coin() {
    let g = square(4, 4);
    let n = g.faces().len();
    let yellow = vec![Some(FaceChoice::YellowConnects); n];
    let aug = augmented_adjacency(&g, &yellow).unwrap();
    let f = &g.faces()[0];
    let (a, c) = (f.verts[0], f.verts[2]);
    assert!(aug.connected(a, c, Colour::Yellow));
    assert!(!aug.connected(a, c, Colour::Green));
    let (u, v) = g.endpoints(0);
    assert!(aug.connected(u, v, Colour::Green) && aug.connected(u, v, Colour::Yellow));
    assert!(augmented_adjacency(&g, &vec![None; n]).is_err());

    let t = build_archimedean(Kind::Triangular, 4, 4, Topology::Torus).unwrap();
    let none = vec![None; t.faces().len()];
    let aug = augmented_adjacency(&t, &none).unwrap();
    let f = &t.faces()[0];
    assert!(aug.connected(f.verts[0], f.verts[2], Colour::Green));
}

#[test]
fn forced_colourings() {
    let g = square(6, 6);
    let nf = g.faces().len();
    let all = clusters_from_colouring(&g, vec![Colour::Yellow; g.n()], vec![Some(FaceChoice::GreenConnects); nf], None)
        .unwrap();
    assert_eq!(all.count, 1);

    // Chessboard with every face joining yellow: yellow is one class of the
    // diagonal (king-move within parity) graph, green vertices stay alone.
    let colour: Vec<Colour> = (0..g.n() as VertexId)
        .map(|v| if (g.pos(v)[0] + g.pos(v)[1]) % 2 == 0 { Colour::Yellow } else { Colour::Green })
        .collect();
    let cl = clusters_from_colouring(&g, colour.clone(), vec![Some(FaceChoice::YellowConnects); nf], None).unwrap();
    // Brute-force closure over diagonal steps on the 6x6 torus.
    let mut comp = vec![usize::MAX; g.n()];
    let mut ncomp = 0;
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            let p = g.pos(v as VertexId);
            let steps: &[(i32, i32)] = if colour[v] == Colour::Yellow {
                &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
            } else {
                &[(1, 0), (-1, 0), (0, 1), (0, -1)]
            };
            for &(dx, dy) in steps {
                let w = vid(&g, (p[0] + dx).rem_euclid(6), (p[1] + dy).rem_euclid(6)) as usize;
                if colour[w] == colour[v] && comp[w] == usize::MAX {
                    comp[w] = ncomp;
                    q.push_back(w);
                }
            }
        }
        ncomp += 1;
    }
    assert_eq!(cl.count, ncomp);
    assert_eq!(ncomp, 1 + 18);
    for u in 0..g.n() {
        for v in 0..g.n() {
            assert_eq!(cl.cluster_id[u] == cl.cluster_id[v], comp[u] == comp[v]);
        }
    }
}

#[test]
fn trees_of_forced_clusters() {
    let g = square(8, 8);
    let nf = g.faces().len();
    let one = clusters_from_colouring(&g, vec![Colour::Green; g.n()], vec![Some(FaceChoice::GreenConnects); nf], None)
        .unwrap();
    let t = build_hierarchy(&g, &one).unwrap();
    assert_eq!(t.len(), 1);
    assert!(t.children()[t.root() as usize].is_empty());

    let mut colour = vec![Colour::Yellow; g.n()];
    let lone = vid(&g, 3, 3);
    colour[lone as usize] = Colour::Green;
    let cl = clusters_from_colouring(&g, colour, vec![Some(FaceChoice::YellowConnects); nf], None).unwrap();
    let t = build_hierarchy(&g, &cl).unwrap();
    assert_eq!(t.len(), 2);
    let c = t.cluster_of(lone);
    assert_eq!(t.parent(c), Some(t.root()));
    assert_ne!(c, t.root());
}

#[test]
fn percolation_trees_pass_the_audit() {
    let g = square(64, 64);
    let (mut built, mut wrapped) = (0, 0);
    for seed in 0..100 {
        let f = LabelField::new(seed, &g);
        let cl = percolation_clusters(&g, &f).unwrap();
        match build_hierarchy(&g, &cl) {
            Ok(t) => {
                built += 1;
                let r = check_hierarchy(&g, &t, None);
                assert!(r.ok(), "seed {seed}: {:?}", r.first_failure());
            }
            Err(e) => {
                assert!(e.is_retryable(), "seed {seed}: {e}");
                wrapped += 1;
            }
        }
    }
    assert_eq!(built + wrapped, 100);
    assert!(built > 0);
}

/// Singleton clusters on a path, `parent(i) = i - 1`, root 0.
fn path_tree(n: usize) -> (LatticeGraph, HierarchyTree) {
    let es: Vec<_> = (0..n as VertexId - 1).map(|a| (a, a + 1)).collect();
    let g = custom(n, &es).unwrap();
    let assign: Vec<u32> = (0..n as u32).collect();
    let parent: Vec<u32> = (0..n as u32).map(|c| c.saturating_sub(1)).collect();
    (g, HierarchyTree::from_assignment(&assign, &parent, 0))
}

#[test]
fn coarsen_zero_rounds_is_identity() {
    let (g, t) = path_tree(6);
    let c = coarsen(&t, &LabelField::new(1, &g), 0).unwrap();
    assert_eq!(c.assignment(), t.assignment());
    assert_eq!(c.parents(), t.parents());
}

#[test]
fn coarsen_follows_the_coin_rule() {
    let (g, t) = path_tree(6);
    let mut uniform_seen = false;
    for seed in 0..200 {
        let f = LabelField::new(seed, &g);
        let yellow: Vec<bool> = (0..6u32).map(|c| f.joint_label(&[c], COARSEN).unwrap() >> 63 == 1).collect();
        let c = coarsen(&t, &f, 1).unwrap();
        // Edge z -> z-1 survives only for a green child under a yellow parent.
        let survive: Vec<bool> = (1..6).map(|z| !yellow[z] && yellow[z - 1]).collect();
        let blocks = 1 + survive.iter().filter(|&&s| s).count();
        let distinct: BTreeSet<u32> = c.assignment().iter().copied().collect();
        assert_eq!(distinct.len(), blocks, "seed {seed}");
        for z in 1..6 {
            assert_eq!(c.cluster_of(z as u32) != c.cluster_of(z as u32 - 1), survive[z - 1]);
        }
        if yellow.iter().all(|&y| y == yellow[0]) {
            uniform_seen = true;
            assert_eq!(distinct.len(), 1);
        }
    }
    assert!(uniform_seen);
}

#[test]
fn toast_trees_are_spaced() {
    let g = square(64, 64);
    for seed in 0..5 {
        let f = LabelField::new(seed, &g);
        let t = toast_hierarchy(&g, &f, 8).unwrap();
        assert!(t.len() > 1);
        let r = check_hierarchy(&g, &t, Some(8));
        assert!(r.ok(), "{:?}", r.first_failure());
        let covered: usize = t.clusters().iter().map(Vec::len).sum();
        assert_eq!(covered, g.n());
    }
}

#[test]
fn spaced_percolation_trees() {
    let g = square(96, 96);
    let mut ok = 0;
    for seed in 0..10 {
        let f = LabelField::new(seed, &g);
        if let Ok(t) = spaced_tree(&g, &f, HierarchySource::Percolation, 8) {
            ok += 1;
            let r = check_hierarchy(&g, &t, Some(8));
            assert!(r.ok(), "{:?}", r.first_failure());
        }
    }
    assert!(ok > 0);
}

#[test]
fn space_needs_enough_rounds() {
    let (g, t) = path_tree(4);
    assert!(space(&g, &t, 8).is_err());
}

#[test]
fn colour_bands() {
    let g = square(64, 64);
    let f = LabelField::new(3, &g);
    let t = spaced_tree(&g, &f, HierarchySource::Toast, 16).unwrap();
    let one = colorize(&g, &t, 1, 16).unwrap();
    assert_eq!(one.assignment(), t.assignment());
    let eta: BTreeSet<Option<u8>> = (0..one.len() as u32).map(|c| one.eta(c)).collect();
    assert_eq!(eta.len(), 1);

    let two = colorize(&g, &t, 2, 8).unwrap();
    for c in 0..two.len() as u32 {
        if let Some(p) = two.parent(c) {
            assert_eq!(two.eta(p).unwrap(), two.eta(c).unwrap() % 2 + 1);
        }
    }
    let r = check_hierarchy(&g, &two, Some(8));
    assert!(r.ok(), "{:?}", r.first_failure());
    assert!(colorize(&g, &t, 4, 8).is_err());
}

#[test]
fn boundary_of_a_block() {
    let g = square(10, 10);
    let block: BTreeSet<VertexId> =
        (3..6).flat_map(|x| (3..6).map(move |y| (x, y))).map(|(x, y)| vid(&g, x, y)).collect();
    let assign: Vec<u32> = (0..g.n() as VertexId).map(|v| u32::from(block.contains(&v))).collect();
    let t = HierarchyTree::from_assignment(&assign, &[0, 0], 0);
    let hb = boundary(&g, &t).unwrap();
    let es = &hb.edges[1];
    assert_eq!(es.len(), 8);
    let centre = vid(&g, 4, 4);
    let mut deg = vec![0; g.n()];
    for &e in es {
        let (a, b) = g.endpoints(e);
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    for &v in &block {
        assert_eq!(deg[v as usize], if v == centre { 0 } else { 2 });
    }
    assert!(check_boundary(&g, &hb, 3).ok());
}

#[test]
fn singleton_clusters_move_up() {
    let g = square(8, 8);
    let lone = vid(&g, 2, 2);
    let assign: Vec<u32> = (0..g.n() as VertexId).map(|v| u32::from(v == lone)).collect();
    let t = HierarchyTree::from_assignment(&assign, &[0, 0], 0);
    let hb = boundary(&g, &t).unwrap();
    assert!(hb.edges.iter().all(Vec::is_empty));
    assert_eq!(hb.tree.cluster_of(lone), 0);
    assert_eq!(hb.moved, 1);
}

#[test]
fn boundary_incidence_is_even() {
    let g = square(64, 64);
    for seed in 0..5 {
        let f = LabelField::new(seed, &g);
        let t = toast_hierarchy(&g, &f, 8).unwrap();
        let hb = boundary(&g, &t).unwrap();
        assert!(hb.incidence.iter().all(|&c| c % 2 == 0 && c <= 4));
        let r = check_boundary(&g, &hb, 8);
        assert!(r.ok(), "{:?}", r.first_failure());
    }
}

fn brute_distances(g: &LatticeGraph, s: VertexId) -> Vec<u32> {
    g.bfs(&[s], u32::MAX)
}

#[test]
fn discrete_sets() {
    let g = square(12, 12);
    let f = LabelField::new(9, &g);
    assert_eq!(maximal_r_discrete(&g, &f, 0, 5).len(), g.n());
    for r in 1..5 {
        let s = maximal_r_discrete(&g, &f, r, 5);
        let dist: Vec<Vec<u32>> = s.iter().map(|&v| brute_distances(&g, v)).collect();
        for (i, d) in dist.iter().enumerate() {
            for &w in &s[i + 1..] {
                assert!(d[w as usize] > r);
            }
        }
        // Maximal: every vertex is within r of the set.
        for v in 0..g.n() {
            assert!(dist.iter().any(|d| d[v] <= r), "r = {r}: vertex {v} could be added");
        }
    }
}

proptest! {
    #[test]
    fn rounds_cover_the_spacing(k in 2usize..100_000) {
        let m = rounds_for_spacing(k);
        prop_assert!(1usize << (m - 1) >= k);
        prop_assert!(1usize << (m - 2) < k);
    }
}
