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

//! Coarsening, spacing and band colouring of hierarchy trees.

use super::{distance_to_parent, HierarchyTree};
use crate::dsu::Dsu;
use crate::lattice::LatticeGraph;
use crate::rng::channels::hierarchy::{COARSEN, COARSEN_ROUNDS};
use crate::rng::LabelField;
use crate::{Error, Result};

/// Rounds `m` with `2^(m-1) >= k`.
pub fn rounds_for_spacing(k: usize) -> u32 {
    let k = k.max(1);
    (usize::BITS - (k - 1).leading_zeros()) + 1
}

/// `m` rounds of random contraction of tree edges.
///
/// Each round colours the clusters by a joint coin; the edge between `z`
/// and its parent survives only when `z` is green and the parent yellow.
pub fn coarsen(t: &HierarchyTree, field: &LabelField, m: u32) -> Result<HierarchyTree> {
    if u64::from(t.rounds + m) > COARSEN_ROUNDS {
        return Err(Error::Invalid(format!("at most {COARSEN_ROUNDS} coarsening rounds")));
    }
    let mut cur = t.clone();
    for _ in 0..m {
        let r = u64::from(cur.rounds);
        let yellow: Vec<bool> = (0..cur.len() as u32)
            .map(|c| field.joint_label(cur.members(c), COARSEN + r).map(|x| x >> 63 == 1))
            .collect::<Result<_>>()?;
        let mut dsu = Dsu::new(cur.len());
        for z in 0..cur.len() as u32 {
            if let Some(p) = cur.parent(z) {
                if !(!yellow[z as usize] && yellow[p as usize]) {
                    dsu.union(z, p);
                }
            }
        }
        let root = cur.root();
        let mut parent: Vec<u32> = (0..cur.len() as u32).collect();
        for z in 0..cur.len() as u32 {
            let cz = dsu.find(z);
            if let Some(p) = cur.parent(z) {
                let cp = dsu.find(p);
                if cp != cz {
                    parent[cz as usize] = cp;
                }
            }
        }
        let absorbed = (0..cur.len() as u32).any(|z| z != root && dsu.find(z) == dsu.find(root));
        let assign: Vec<u32> = cur.assignment().iter().map(|&c| dsu.find(c)).collect();
        let rroot = dsu.find(root);
        let mut next = HierarchyTree::from_assignment(&assign, &parent, rroot).with_meta_from(&cur);
        next.rounds = cur.rounds + 1;
        next.root_absorbed |= absorbed;
        next.spacing = None;
        next.eta = None;
        next.colours = 0;
        cur = next;
    }
    Ok(cur)
}

/// Splits every cluster into the part near its parent and the rest, and
/// hands the near part to the parent's host.
pub fn space(g: &LatticeGraph, t: &HierarchyTree, k: usize) -> Result<HierarchyTree> {
    let m = t.rounds;
    if m == 0 || m > 32 || (1usize << (m - 1)) < k {
        return Err(Error::InsufficientCoarsening { m, k });
    }
    let l = 1u32 << (m - 1);
    let dist = distance_to_parent(g, t, l);
    let nc = t.len();
    let mut inner = vec![false; nc];
    inner[t.root() as usize] = true;
    for v in 0..g.n() {
        if dist[v] >= l {
            inner[t.assignment()[v] as usize] = true;
        }
    }
    let depth = t.depths();
    let mut order: Vec<u32> = (0..nc as u32).collect();
    order.sort_by_key(|&c| depth[c as usize]);
    let mut host = vec![0u32; nc];
    for &c in &order {
        host[c as usize] = match t.parent(c) {
            None => c,
            Some(p) if !inner[c as usize] => host[p as usize],
            Some(_) => c,
        };
    }
    let assign: Vec<u32> = (0..g.n())
        .map(|v| {
            let c = t.assignment()[v];
            match t.parent(c) {
                Some(p) if dist[v] < l => host[p as usize],
                _ => c,
            }
        })
        .collect();
    let parent: Vec<u32> = (0..nc as u32)
        .map(|c| match t.parent(c) {
            Some(p) => host[p as usize],
            None => c,
        })
        .collect();
    let mut out = HierarchyTree::from_assignment(&assign, &parent, t.root()).with_meta_from(t);
    out.spacing = Some(k);
    Ok(out)
}

/// Cuts every non-root cluster into distance bands of width `k` towards
/// its parent; band `i` (counted from the parent) gets colour `c + 1 - i`.
/// The root keeps colour 1.
pub fn colorize(g: &LatticeGraph, t: &HierarchyTree, c: usize, k: usize) -> Result<HierarchyTree> {
    if c == 0 || c > u8::MAX as usize || k == 0 {
        return Err(Error::Invalid(format!("colorize needs c in 1..=255 and k >= 1, got c={c}, k={k}")));
    }
    let need = c * k;
    match t.spacing {
        Some(s) if s >= need => {}
        have => return Err(Error::InsufficientSpacing { have, need }),
    }
    let dist = distance_to_parent(g, t, ((c - 1) * k) as u32);
    let nc = t.len();
    let band = |v: usize| -> usize {
        let d = dist[v];
        if d == u32::MAX {
            c
        } else {
            (d as usize).div_ceil(k).clamp(1, c)
        }
    };
    let label = |cl: u32, i: usize| cl * c as u32 + (i as u32 - 1);
    let root = t.root();
    let mut vband = vec![0usize; g.n()];
    let assign: Vec<u32> = (0..g.n())
        .map(|v| {
            let cl = t.assignment()[v];
            if cl == root {
                label(cl, 1)
            } else {
                vband[v] = band(v);
                label(cl, vband[v])
            }
        })
        .collect();
    let mut parent = vec![0u32; nc * c];
    for cl in 0..nc as u32 {
        for i in 1..=c {
            parent[label(cl, i) as usize] = match (t.parent(cl), i) {
                (None, _) => label(root, 1),
                (Some(p), 1) if p == root => label(root, 1),
                (Some(p), 1) => label(p, c),
                (Some(_), i) => label(cl, i - 1),
            };
        }
    }
    let mut out = HierarchyTree::from_assignment(&assign, &parent, label(root, 1)).with_meta_from(t);
    let eta: Vec<u8> = (0..out.len() as u32)
        .map(|x| {
            let v = out.members(x)[0] as usize;
            if t.assignment()[v] == root {
                1
            } else {
                (c + 1 - vband[v]) as u8
            }
        })
        .collect();
    out.eta = Some(eta);
    out.colours = c;
    out.spacing = Some(k);
    Ok(out)
}
