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
use schreier_lab::lattice::{build_archimedean, Kind, Topology, VertexId};
use schreier_lab::rng::{unit, LabelField};
use schreier_lab::Error;
use std::sync::Arc;

const SEEDS: u64 = 100_000;

fn field(seed: u64) -> LabelField {
    LabelField::from_parts(seed, 0xfeed)
}

#[test]
fn labels_are_pure() {
    let g = build_archimedean(Kind::Square, 8, 8, Topology::Torus).unwrap();
    let a = LabelField::new(5, &g);
    let b = LabelField::new(5, &g);
    for v in 0..g.n() as VertexId {
        assert_eq!(a.label(v, 3), b.label(v, 3));
    }
    assert_ne!(a.label(0, 0), a.label(0, 1));
    assert_ne!(a.label(0, 0), LabelField::new(6, &g).label(0, 0));
    // Same seed on a different window is a different stream.
    let h = build_archimedean(Kind::Square, 8, 10, Topology::Torus).unwrap();
    assert_ne!(a.label(0, 0), LabelField::new(5, &h).label(0, 0));
}

#[test]
fn epochs_and_derived_fields_are_fresh() {
    let f = field(1);
    let vals = [f.label(3, 9), f.with_epoch(1).label(3, 9), f.derive("x").label(3, 9), f.derive("y").label(3, 9)];
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            assert_ne!(vals[i], vals[j]);
        }
    }
    assert_eq!(f.with_epoch(0).label(3, 9), f.label(3, 9));
}

#[test]
fn through_reads_base_labels() {
    let f = field(2);
    let map = Arc::new(vec![7, 3, 11]);
    let v = f.through(map);
    assert_eq!(v.label(0, 4), f.label(7, 4));
    assert_eq!(v.label(2, 4), f.label(11, 4));
}

#[test]
fn resampling_keeps_the_inside() {
    let f = field(3);
    let inside: Arc<Vec<bool>> = Arc::new((0..20).map(|v| v < 10).collect());
    let r = f.resampled_outside(inside, 99);
    for v in 0..20 {
        assert_eq!(r.label(v, 1) == f.label(v, 1), v < 10, "vertex {v}");
    }
    let r2 = f.resampled_outside(Arc::new(vec![false; 20]), 100);
    assert_ne!(r2.label(15, 1), r.label(15, 1));
}

#[test]
fn joint_label_edge_cases() {
    let f = field(4);
    assert!(matches!(f.joint_label(&[], 0), Err(Error::EmptySet)));
    assert!(matches!(f.choose(&[1], 0, 0), Err(Error::ZeroAlternatives)));
    for s in 0..100 {
        assert_eq!(field(s).choose(&[1, 2, 3], 0, 1).unwrap(), 0);
    }
    // A singleton's joint label is a function of that vertex's label only:
    // another vertex carrying the same label gets the same value.
    let g = field(5);
    let remapped = g.through(Arc::new(vec![9, 9]));
    assert_eq!(remapped.joint_label(&[0], 2).unwrap(), remapped.joint_label(&[1], 2).unwrap());
    assert_eq!(remapped.joint_label(&[0], 2).unwrap(), g.joint_label(&[9], 2).unwrap());
}

#[test]
fn choose_two_is_fair() {
    let hits = (0..SEEDS).filter(|&s| field(s).choose(&[4, 8, 15], 7, 2).unwrap() == 1).count() as f64;
    let n = SEEDS as f64;
    let sigma = (n * 0.25).sqrt();
    assert!((hits - n / 2.0).abs() < 3.0 * sigma, "{hits} heads in {n}");
}

#[test]
fn disjoint_joint_labels_are_independent() {
    // 4x4 contingency table of the top two bits, chi-square with 9 degrees
    // of freedom; 27.88 is the 0.1% critical value.
    let mut table = [[0f64; 4]; 4];
    for s in 0..SEEDS {
        let f = field(s);
        let a = f.joint_label(&[1, 2, 3], 11).unwrap() >> 62;
        let b = f.joint_label(&[4, 5], 11).unwrap() >> 62;
        table[a as usize][b as usize] += 1.0;
    }
    let n = SEEDS as f64;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..4).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut chi = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let e = rows[i] * cols[j] / n;
            chi += (table[i][j] - e).powi(2) / e;
        }
    }
    assert!(chi < 27.88, "chi-square {chi}");
}

#[test]
fn uniforms_fill_the_unit_interval() {
    let f = field(6);
    let mut bins = [0usize; 10];
    for v in 0..50_000u32 {
        let u = f.uniform(v, 0);
        assert!((0.0..1.0).contains(&u));
        bins[(u * 10.0) as usize] += 1;
    }
    // chi-square, 9 degrees of freedom
    let chi: f64 = bins.iter().map(|&b| (b as f64 - 5000.0).powi(2) / 5000.0).sum();
    assert!(chi < 27.88, "{bins:?}");
    assert_eq!(unit(0), 0.0);
    assert!(unit(u64::MAX) < 1.0);
}

proptest! {
    #[test]
    fn joint_label_ignores_order(seed in any::<u64>(), mut set in prop::collection::vec(0u32..1000, 1..12), ch in 0u64..64) {
        let f = field(seed);
        let a = f.joint_label(&set, ch).unwrap();
        set.reverse();
        prop_assert_eq!(a, f.joint_label(&set, ch).unwrap());
        set.rotate_left(1);
        prop_assert_eq!(a, f.joint_label(&set, ch).unwrap());
    }

    #[test]
    fn argmax_is_the_largest_label(seed in any::<u64>(), set in prop::collection::vec(0u32..1000, 1..12)) {
        let f = field(seed);
        let m = f.argmax(&set, 3).unwrap();
        prop_assert!(set.iter().all(|&v| v == m || !f.greater(v, m, 3)));
    }

    #[test]
    fn choose_in_range(seed in any::<u64>(), k in 1usize..50) {
        prop_assert!(field(seed).choose(&[1, 2], 0, k).unwrap() < k);
    }
}
