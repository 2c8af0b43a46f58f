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
    balanced_orientation_planar_using, schreier_square_using, schreier_t3464, with_retries, Decoration, Orientation,
};
use schreier_lab::derived::{
    dark, lift_to_line_graph, light, line_graph_matching, matching_from_colouring, proper_colouring_from_decoration,
    square_diag_decorate,
};
use schreier_lab::hierarchy::HierarchySource;
use schreier_lab::lattice::{build_archimedean, build_square_diag, line_graph, Kind, LatticeGraph, Topology, VertexId};
use schreier_lab::rng::LabelField;
use schreier_lab::verify::{check_balanced, check_matching, check_proper, check_schreier, monochrome_components};
use schreier_lab::Error;

fn torus(kind: Kind, w: usize, h: usize) -> LatticeGraph {
    build_archimedean(kind, w, h, Topology::Torus).unwrap()
}

fn square_decoration(g: &LatticeGraph, seed: u64) -> Decoration {
    with_retries(&LabelField::new(seed, g), 16, |f| schreier_square_using(g, f, HierarchySource::Toast, 8))
        .unwrap()
        .value
        .decoration
}

#[test]
fn colouring_splits_each_colour() {
    let g = torus(Kind::Square, 64, 64);
    let dec = square_decoration(&g, 1);
    let ec = proper_colouring_from_decoration(&g, &dec, &LabelField::new(1, &g)).unwrap();
    assert_eq!(ec.colours, 4);
    assert!(check_proper(&g, &ec).ok());
    for e in 0..g.m() {
        let c = dec.colour[e];
        assert!(ec.colour[e] == light(c) || ec.colour[e] == dark(c));
    }
    for class in 1..=4u8 {
        let m = matching_from_colouring(&ec, class).unwrap();
        assert_eq!(m.edges.len(), g.n() / 2);
        assert!(check_matching(&g, &m).ok());
    }
    let l = matching_from_colouring(&ec, light(0)).unwrap();
    let d = matching_from_colouring(&ec, dark(0)).unwrap();
    let mut union: Vec<u32> = l.edges.iter().chain(&d.edges).copied().collect();
    union.sort_unstable();
    let zero: Vec<u32> = (0..g.m() as u32).filter(|&e| dec.colour[e as usize] == 0).collect();
    assert_eq!(union, zero);
    assert!(matching_from_colouring(&ec, 0).is_err());
    assert!(matching_from_colouring(&ec, 5).is_err());
}

#[test]
fn odd_cycles_cannot_be_split() {
    let g = torus(Kind::T3464, 6, 6);
    let f = LabelField::new(0, &g);
    let dec = schreier_t3464(&g, &f).unwrap().decoration;
    assert!(matches!(proper_colouring_from_decoration(&g, &dec, &f), Err(Error::OddCycle(_))));
}

#[test]
fn line_lift_is_a_decoration() {
    let g = torus(Kind::Square, 32, 32);
    let dec = square_decoration(&g, 2);
    let (lg, inc) = line_graph(&g).unwrap();
    let out = lift_to_line_graph(&g, &dec, &lg, &inc).unwrap();
    assert_eq!(out.d, 3);
    let r = check_schreier(&lg, &out);
    assert!(r.ok(), "{:?}", r.first_failure());
    // Inside a clique every colour enters and leaves each member at most once.
    for es in &inc.members {
        for &a in es {
            let mut ins = [0; 3];
            let mut outs = [0; 3];
            for &(b, e) in lg.neighbors(a) {
                if es.contains(&b) {
                    let c = out.colour[e as usize] as usize;
                    if out.head[e as usize] == a {
                        ins[c] += 1
                    } else {
                        outs[c] += 1
                    }
                }
            }
            assert!(ins.iter().chain(&outs).all(|&x| x <= 1));
        }
    }
}

#[test]
fn broken_source_is_rejected_by_the_lift() {
    let g = torus(Kind::Square, 32, 32);
    let mut dec = square_decoration(&g, 3);
    dec.head[0] = g.other(0, dec.head[0]);
    let (lg, inc) = line_graph(&g).unwrap();
    assert!(matches!(lift_to_line_graph(&g, &dec, &lg, &inc), Err(Error::InvalidSourceDecoration(_))));
}

#[test]
fn line_graph_matchings() {
    let g = torus(Kind::Square, 32, 32);
    let or = with_retries(&LabelField::new(4, &g), 16, |f| {
        balanced_orientation_planar_using(&g, f, HierarchySource::Toast, 8)
    })
    .unwrap()
    .value
    .orientation;
    let (lg, inc) = line_graph(&g).unwrap();
    let m = line_graph_matching(&g, &or, &lg, &inc, &LabelField::new(4, &lg)).unwrap();
    assert!(check_matching(&lg, &m).ok());
    assert_eq!(m.edges.len(), lg.n() / 2);

    let mut bad = or.clone();
    bad.head[0] = g.other(0, bad.head[0]);
    assert!(matches!(line_graph_matching(&g, &bad, &lg, &inc, &LabelField::new(4, &lg)), Err(Error::NotBalanced(_))));

    let tri = torus(Kind::Triangular, 8, 8);
    let (tlg, tinc) = line_graph(&tri).unwrap();
    let head: Vec<VertexId> = (0..tri.m() as u32).map(|e| tri.endpoints(e).1).collect();
    let tor = Orientation { head };
    assert!(check_balanced(&tri, &tor).ok());
    assert!(matches!(line_graph_matching(&tri, &tor, &tlg, &tinc, &LabelField::from_parts(0, 0)), Err(Error::OddD(3))));
}

#[test]
fn kings_graph() {
    let g = build_square_diag(64, 64, Topology::Torus).unwrap();
    let out = with_retries(&LabelField::new(5, &g), 16, |f| square_diag_decorate(&g, f, HierarchySource::Toast, 8))
        .unwrap()
        .value;
    assert_eq!(out.decoration.d, 4);
    let r = check_schreier(&g, &out.decoration);
    assert!(r.ok(), "{:?}", r.first_failure());
    assert!(monochrome_components(&g, &out.decoration).all_contractible_cycles());
    for e in 0..g.m() as u32 {
        let axis = g.dir(e) < 2;
        assert_eq!(out.decoration.colour[e as usize] < 2, axis);
    }
    assert!(square_diag_decorate(
        &build_square_diag(62, 62, Topology::Torus).unwrap(),
        &LabelField::from_parts(0, 0),
        HierarchySource::Toast,
        8
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn colour_classes_are_perfect_matchings(seed in any::<u64>()) {
        let g = torus(Kind::Square, 48, 48);
        let dec = square_decoration(&g, seed);
        let ec = proper_colouring_from_decoration(&g, &dec, &LabelField::new(seed, &g)).unwrap();
        prop_assert!(check_proper(&g, &ec).ok());
        for class in 1..=4u8 {
            prop_assert!(check_matching(&g, &matching_from_colouring(&ec, class).unwrap()).ok());
        }
    }
}
