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
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schreier_lab::decorators::{schreier_square_using, with_retries, Decoration, Orientation};
use schreier_lab::hierarchy::{HierarchySource, HierarchyTree};
use schreier_lab::io::suites::{K3_C4_COUNT, K3_C5_COUNT};
use schreier_lab::lattice::{
    build_archimedean, build_product_with_cycle, custom, Kind, LatticeGraph, Topology, VertexId,
};
use schreier_lab::rng::LabelField;
use schreier_lab::verify::{
    check_balanced, check_boundary, check_hierarchy, check_schreier, enumerate_balanced_orientations,
    enumerate_sharded, monochrome_components, parity_invariant,
};
use schreier_lab::Error;

fn cycle(n: usize) -> LatticeGraph {
    let es: Vec<_> = (0..n as VertexId).map(|a| (a, (a + 1) % n as VertexId)).collect();
    custom(n, &es).unwrap()
}

fn k3() -> LatticeGraph {
    custom(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

/// Balanced orientations of `K_3 x C_m` by a transfer matrix over the
/// directions of the three rungs between consecutive layers.
fn k3_cycle_transfer(m: usize) -> u64 {
    let pairs = [(0usize, 1usize), (1, 2), (0, 2)];
    let mut t = [[0u64; 8]; 8];
    for (prev, row) in t.iter_mut().enumerate() {
        for (next, cell) in row.iter_mut().enumerate() {
            for sigma in 0..8usize {
                let mut out = [0usize; 3];
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if sigma >> i & 1 == 1 {
                        out[a] += 1
                    } else {
                        out[b] += 1
                    }
                }
                // A forward rung leaves its lower layer and enters the upper one.
                let ok = (0..3).all(|x| out[x] + (next >> x & 1) + (1 - (prev >> x & 1)) == 2);
                *cell += u64::from(ok);
            }
        }
    }
    let mut p = [[0u64; 8]; 8];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..m {
        let mut q = [[0u64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                q[i][j] = (0..8).map(|k| p[i][k] * t[k][j]).sum();
            }
        }
        p = q;
    }
    (0..8).map(|i| p[i][i]).sum()
}

fn brute_force_count(g: &LatticeGraph) -> u64 {
    assert!(g.m() <= 24);
    let ends: Vec<(usize, usize)> = (0..g.m() as u32)
        .map(|e| {
            let (a, b) = g.endpoints(e);
            (a as usize, b as usize)
        })
        .collect();
    let mut count = 0;
    let mut out = vec![0u8; g.n()];
    for mask in 0u32..1 << g.m() {
        out.iter_mut().for_each(|o| *o = 0);
        for (i, &(a, b)) in ends.iter().enumerate() {
            out[if mask >> i & 1 == 0 { a } else { b }] += 1;
        }
        if (0..g.n()).all(|v| 2 * out[v] as usize == g.deg(v as u32)) {
            count += 1;
        }
    }
    count
}

#[test]
fn small_enumerations() {
    assert_eq!(enumerate_balanced_orientations(&cycle(4), |_| {}).unwrap(), 2);
    assert_eq!(enumerate_balanced_orientations(&k3(), |_| {}).unwrap(), 2);
    let pg = build_product_with_cycle(&k3(), 4).unwrap();
    let mut all_balanced = true;
    let n = enumerate_balanced_orientations(&pg, |o| all_balanced &= check_balanced(&pg, o).ok()).unwrap();
    assert!(all_balanced);
    assert_eq!(n, K3_C4_COUNT);
    assert_eq!(n, k3_cycle_transfer(4));
    assert_eq!(n, brute_force_count(&pg));
    let pg5 = build_product_with_cycle(&k3(), 5).unwrap();
    assert!(matches!(enumerate_balanced_orientations(&pg5, |_| {}), Err(Error::TooLarge(30))));
    let s = enumerate_sharded(&pg5, 30, |o| check_balanced(&pg5, o).ok()).unwrap();
    assert_eq!((s.count, s.violations), (K3_C5_COUNT, 0));
    assert_eq!(K3_C5_COUNT, k3_cycle_transfer(5));
    assert_eq!(enumerate_sharded(&pg, 30, |_| true).unwrap().count, K3_C4_COUNT);
    assert!(matches!(
        enumerate_balanced_orientations(&build_product_with_cycle(&cycle(4), 4).unwrap(), |_| {}),
        Err(Error::TooLarge(32))
    ));
}

#[test]
fn rung_counts_are_invariant() {
    let h = k3();
    for m in [4, 5] {
        let pg = build_product_with_cycle(&h, m).unwrap();
        let s = enumerate_sharded(&pg, 30, |o| {
            let p = parity_invariant(&h, &pg, o).unwrap();
            let rev = Orientation { head: (0..pg.m() as u32).map(|e| pg.other(e, o.head[e as usize])).collect() };
            let q = parity_invariant(&h, &pg, &rev).unwrap();
            p.constant && p.complementary && p.n.iter().zip(&q.n).all(|(a, b)| a + b == h.n()) && p.sign == -q.sign
        })
        .unwrap();
        assert!(s.holds(), "{:?}", s.first_violation);
        // |V(K_3)| is odd, so no orientation splits the rungs evenly.
        let zero = enumerate_sharded(&pg, 30, |o| parity_invariant(&h, &pg, o).unwrap().sign != 0).unwrap();
        assert!(zero.holds());
    }
}

#[test]
fn even_split_exists_for_c4() {
    let h = cycle(4);
    let pg = build_product_with_cycle(&h, 4).unwrap();
    let s = enumerate_sharded(&pg, 32, |o| parity_invariant(&h, &pg, o).unwrap().n[0] != 2).unwrap();
    assert!(s.violations > 0);
    let head = s.first_violation.unwrap();
    let p = parity_invariant(&h, &pg, &Orientation { head }).unwrap();
    assert_eq!((p.sign, p.n.clone()), (0, vec![2; 4]));
}

#[test]
fn parity_rejects_unbalanced_and_wrong_kind() {
    let h = k3();
    let pg = build_product_with_cycle(&h, 4).unwrap();
    let or = Orientation { head: (0..pg.m() as u32).map(|e| pg.endpoints(e).1).collect() };
    assert!(matches!(parity_invariant(&h, &pg, &or), Err(Error::NotBalanced(_))));
    let sq = build_archimedean(Kind::Square, 4, 4, Topology::Torus).unwrap();
    let or = Orientation { head: vec![0; sq.m()] };
    assert!(matches!(parity_invariant(&h, &sq, &or), Err(Error::WrongKind { .. })));
}

fn square_run() -> (LatticeGraph, schreier_lab::decorators::Decorated) {
    let g = build_archimedean(Kind::Square, 48, 48, Topology::Torus).unwrap();
    let r = with_retries(&LabelField::new(11, &g), 16, |f| schreier_square_using(&g, f, HierarchySource::Toast, 4))
        .unwrap();
    (g, r.value)
}

#[test]
fn single_edits_are_caught_with_witnesses() {
    let (g, run) = square_run();
    let dec = run.decoration;
    assert!(check_schreier(&g, &dec).ok());
    for e in [0u32, 5, 777, g.m() as u32 - 1] {
        let mut bad = dec.clone();
        bad.head[e as usize] = g.other(e, bad.head[e as usize]);
        let r = check_schreier(&g, &bad);
        let w = r.first_failure().unwrap().witness.clone().unwrap();
        let (a, b) = g.endpoints(e);
        assert!(w.vertices.contains(&a) || w.vertices.contains(&b));

        let or = Orientation { head: bad.head.clone() };
        let r = check_balanced(&g, &or);
        let mut w = r.first_failure().unwrap().witness.clone().unwrap().vertices;
        w.sort_unstable();
        assert_eq!(w, {
            let mut v = vec![a, b];
            v.sort_unstable();
            v
        });

        let mut recoloured = dec.clone();
        recoloured.colour[e as usize] ^= 1;
        assert!(!check_schreier(&g, &recoloured).ok());
    }
    let mut short = dec.clone();
    short.colour.pop();
    assert!(!check_schreier(&g, &short).ok());
}

#[test]
fn wrapping_lines_fail_the_census() {
    let g = build_archimedean(Kind::Square, 8, 8, Topology::Torus).unwrap();
    let lines = Decoration {
        d: 2,
        colour: (0..g.m() as u32).map(|e| g.dir(e) as u8).collect(),
        head: (0..g.m() as u32).map(|e| g.endpoints(e).1).collect(),
    };
    assert!(check_schreier(&g, &lines).ok());
    let census = monochrome_components(&g, &lines);
    assert_eq!(census.wrapping(), 16);
    assert!(!census.all_contractible_cycles());
}

#[test]
fn random_decorations_fail() {
    let g = build_archimedean(Kind::Square, 4, 4, Topology::Torus).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let colour = (0..g.m()).map(|_| (rng.next_u32() & 1) as u8).collect();
        let head = (0..g.m() as u32)
            .map(|e| {
                let (a, b) = g.endpoints(e);
                if rng.next_u32() & 1 == 0 {
                    a
                } else {
                    b
                }
            })
            .collect();
        assert!(!check_schreier(&g, &Decoration { d: 2, colour, head }).ok());
    }
}

#[test]
fn hierarchy_edits_fail() {
    let (g, run) = square_run();
    let hb = run.hierarchy.unwrap();
    let t = &hb.tree;
    assert!(check_hierarchy(&g, t, Some(4)).ok());
    assert!(check_boundary(&g, &hb, 4).ok());
    let ch = t.children();
    let leaves: Vec<u32> = (0..t.len() as u32).filter(|&c| !t.is_root(c) && ch[c as usize].is_empty()).collect();
    assert!(leaves.len() >= 2);

    let (x, y) = (leaves[0], leaves[leaves.len() - 1]);
    let assign: Vec<u32> = t.assignment().iter().map(|&c| if c == y { x } else { c }).collect();
    let merged = HierarchyTree::from_assignment(&assign, t.parents(), t.root());
    assert!(!check_hierarchy(&g, &merged, Some(4)).ok());

    let c = leaves[0];
    let mut parents = t.parents().to_vec();
    parents[c as usize] =
        (0..t.len() as u32).find(|&p| p != c && Some(p) != t.parent(c) && t.parent(p) != Some(c)).unwrap();
    let edited = HierarchyTree::from_assignment(t.assignment(), &parents, t.root());
    assert!(!check_hierarchy(&g, &edited, Some(4)).ok());

    let mut cut = hb.clone();
    let i = cut.edges.iter().position(|es| !es.is_empty()).unwrap();
    cut.edges[i].pop();
    assert!(!check_boundary(&g, &cut, 4).ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transfer_matrix_matches_enumeration_on_cycles(n in 3usize..20) {
        prop_assert_eq!(enumerate_balanced_orientations(&cycle(n), |_| {}).unwrap(), 2);
    }

    #[test]
    fn any_flip_breaks_balance(e in 0u32..96) {
        let pg = build_product_with_cycle(&k3(), 4).unwrap();
        let e = e % pg.m() as u32;
        let mut first = None;
        enumerate_balanced_orientations(&pg, |o| if first.is_none() { first = Some(o.clone()) }).unwrap();
        let mut o = first.unwrap();
        o.head[e as usize] = pg.other(e, o.head[e as usize]);
        prop_assert!(!check_balanced(&pg, &o).ok());
    }
}
