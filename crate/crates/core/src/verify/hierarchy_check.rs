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

//! Hierarchy and boundary audits, re-derived from the vertex partition.

use super::{Report, Witness};
use crate::hierarchy::{ClusterBoundary, HierarchyTree};
use crate::lattice::{LatticeGraph, VertexId};
use std::collections::{BTreeSet, VecDeque};

/// Parent of every cluster of `assign`, found from scratch: `D` is the
/// parent of `C` iff `D` is adjacent to `C` and deleting `D` cuts `C` off
/// from the root. `None` when no or several clusters qualify (and for the
/// root).
pub fn derive_parents(g: &LatticeGraph, assign: &[u32], root: u32) -> Vec<Option<u32>> {
    let nc = assign.iter().copied().max().map_or(0, |x| x as usize + 1);
    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); nc];
    for (v, &c) in assign.iter().enumerate() {
        members[c as usize].push(v as VertexId);
    }
    let mut nbrs: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nc];
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        let (a, b) = (assign[u as usize], assign[v as usize]);
        if a != b {
            nbrs[a as usize].insert(b);
            nbrs[b as usize].insert(a);
        }
    }
    let mut stamp = vec![0u32; g.n()];
    let mut round = 0u32;
    let mut q = VecDeque::new();
    let mut out = vec![None; nc];
    for c in 0..nc as u32 {
        if c == root || members[c as usize].is_empty() {
            continue;
        }
        let mut found = Vec::new();
        for &d in &nbrs[c as usize] {
            if d == root && nbrs[c as usize].len() == 1 {
                found.push(d);
                continue;
            }
            round += 1;
            q.clear();
            for &v in &members[c as usize] {
                stamp[v as usize] = round;
                q.push_back(v);
            }
            let mut escaped = false;
            'bfs: while let Some(v) = q.pop_front() {
                for &(w, _) in g.neighbors(v) {
                    let cw = assign[w as usize];
                    if stamp[w as usize] == round || cw == d {
                        continue;
                    }
                    if cw == root {
                        escaped = true;
                        break 'bfs;
                    }
                    stamp[w as usize] = round;
                    q.push_back(w);
                }
            }
            if !escaped {
                found.push(d);
            }
        }
        if found.len() == 1 {
            out[c as usize] = Some(found[0]);
        }
    }
    out
}

/// Partition, parent, adjacency, spacing and colour audits of a tree.
///
/// With `k`, every pair of clusters that are not parent and child must be
/// at distance at least `k` (exact bounded BFS from every cluster).
pub fn check_hierarchy(g: &LatticeGraph, t: &HierarchyTree, k: Option<usize>) -> Report {
    let mut r = Report::default();
    let assign = t.assignment();
    if assign.len() != g.n() {
        r.fail("partition", "assignment size does not match the graph", Witness::default());
        return r;
    }
    let mut bad = None;
    for c in 0..t.len() as u32 {
        if t.members(c).is_empty() || t.members(c).iter().any(|&v| assign[v as usize] != c) {
            bad = Some(c);
            break;
        }
    }
    let total: usize = t.clusters().iter().map(Vec::len).sum();
    match bad {
        Some(c) => r.fail("partition", "cluster membership inconsistent", Witness::clusters(vec![c])),
        None if total != g.n() => r.fail("partition", "clusters do not cover every vertex once", Witness::default()),
        None => r.pass("partition", &format!("{} clusters", t.len())),
    }

    match (0..t.len() as u32).find(|&c| !t.is_root(c) && !cluster_connected(g, assign, t.members(c), c)) {
        Some(c) => r.fail("connected", "cluster is not connected", Witness::clusters(vec![c])),
        None => r.pass("connected", "every non-root cluster is connected (through shared faces)"),
    }

    let derived = derive_parents(g, assign, t.root());
    match (0..t.len() as u32).find(|&c| t.parent(c) != derived[c as usize]) {
        Some(c) => r.fail(
            "parents",
            &format!("cluster {c}: tree parent {:?}, derived {:?}", t.parent(c), derived[c as usize]),
            Witness::clusters(vec![c]),
        ),
        None => r.pass("parents", "every parent re-derived by separation"),
    }

    let related = |a: u32, b: u32| t.parent(a) == Some(b) || t.parent(b) == Some(a);
    let mut adj_bad = None;
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        let (a, b) = (assign[u as usize], assign[v as usize]);
        if a != b && !related(a, b) {
            adj_bad = Some((e, a, b));
            break;
        }
    }
    match adj_bad {
        Some((e, a, b)) => r.fail(
            "adjacency",
            "adjacent clusters are not parent and child",
            Witness { edges: vec![e], clusters: vec![a, b], ..Witness::default() },
        ),
        None => r.pass("adjacency", "adjacent clusters are parent and child"),
    }

    if let Some(k) = k {
        match spacing_violation(g, t, k) {
            Some((a, b, d)) => {
                r.fail("spacing", &format!("clusters {a} and {b} at distance {d} < {k}"), Witness::clusters(vec![a, b]))
            }
            None => r.pass("spacing", &format!("non-adjacent clusters at distance >= {k}")),
        }
    }

    if let Some(eta) = &t.eta {
        let c = t.colours as u8;
        let bad = (0..t.len() as u32).find(|&x| match t.parent(x) {
            Some(p) => eta[p as usize] != eta[x as usize] % c + 1,
            None => false,
        });
        match bad {
            Some(x) => r.fail("colours", "parent colour is not child colour + 1 mod c", Witness::clusters(vec![x])),
            None => r.pass("colours", "parent colour = child colour + 1 mod c"),
        }
    }
    r
}

fn cluster_connected(g: &LatticeGraph, assign: &[u32], members: &[VertexId], c: u32) -> bool {
    let Some(&start) = members.first() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        // Percolation clusters connect across faces, so vertices sharing a
        // face count as adjacent.
        let across = g.vertex_faces(v).iter().flat_map(|&f| g.faces()[f as usize].verts.iter().copied());
        for w in g.neighbors(v).iter().map(|&(w, _)| w).chain(across) {
            if assign[w as usize] == c && seen.insert(w) {
                q.push_back(w);
            }
        }
    }
    seen.len() == members.len()
}

/// First pair of unrelated clusters closer than `k`, with their distance.
pub fn spacing_violation(g: &LatticeGraph, t: &HierarchyTree, k: usize) -> Option<(u32, u32, u32)> {
    if k <= 1 {
        return None;
    }
    let related = |a: u32, b: u32| a == b || t.parent(a) == Some(b) || t.parent(b) == Some(a);
    let assign = t.assignment();
    let mut dist = vec![u32::MAX; g.n()];
    let mut touched = Vec::new();
    let mut q = VecDeque::new();
    for c in 0..t.len() as u32 {
        for &v in &touched {
            dist[v as usize] = u32::MAX;
        }
        touched.clear();
        q.clear();
        for &v in t.members(c) {
            dist[v as usize] = 0;
            touched.push(v);
            q.push_back(v);
        }
        while let Some(v) = q.pop_front() {
            let d = dist[v as usize];
            let cv = assign[v as usize];
            if !related(c, cv) {
                return Some((c.min(cv), c.max(cv), d));
            }
            if d + 1 >= k as u32 {
                continue;
            }
            for &(w, _) in g.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    touched.push(w);
                    q.push_back(w);
                }
            }
        }
    }
    None
}

/// Smallest distance between two unrelated clusters, searched up to `cap`.
pub fn min_unrelated_distance(g: &LatticeGraph, t: &HierarchyTree, cap: usize) -> Option<u32> {
    let mut lo = None;
    let mut k = cap;
    while let Some((_, _, d)) = spacing_violation(g, t, k) {
        lo = Some(d);
        k = d as usize;
    }
    lo
}

/// Endpoint, parity, separation and distance audits of cluster boundaries.
///
/// `k` is the spacing of the tree the boundaries were computed from.
pub fn check_boundary(g: &LatticeGraph, b: &ClusterBoundary, k: usize) -> Report {
    let mut r = Report::default();
    let t = &b.tree;
    let mut ends_bad = None;
    for (c, es) in b.edges.iter().enumerate() {
        for &e in es {
            let (u, v) = g.endpoints(e);
            if t.cluster_of(u) != c as u32 || t.cluster_of(v) != c as u32 {
                ends_bad = Some(e);
            }
        }
    }
    match ends_bad {
        Some(e) => r.fail("boundary_endpoints", "boundary edge leaves its cluster", Witness::edges(vec![e])),
        None => r.pass("boundary_endpoints", "both endpoints of every boundary edge lie in the cluster"),
    }

    let mut count = vec![0u32; g.n()];
    for es in &b.edges {
        for &e in es {
            let (u, v) = g.endpoints(e);
            count[u as usize] += 1;
            count[v as usize] += 1;
        }
    }
    let mask = interior(g);
    match (0..g.n()).find(|&v| mask[v] && count[v] % 2 == 1) {
        Some(v) => r.fail(
            "boundary_parity",
            &format!("vertex meets {} boundary edges", count[v]),
            Witness::vertices(vec![v as u32]),
        ),
        None => r.pass("boundary_parity", "every vertex meets an even number of boundary edges"),
    }

    let on_boundary: Vec<bool> = count.iter().map(|&c| c > 0).collect();
    let ch = t.children();
    let mut stamp = vec![0u32; g.n()];
    let mut sep_bad = None;
    let mut q = VecDeque::new();
    for c in 0..t.len() as u32 {
        if t.is_root(c) {
            continue;
        }
        // C and its descendants.
        let mut below = vec![c];
        let mut i = 0;
        while i < below.len() {
            below.extend(ch[below[i] as usize].iter().copied());
            i += 1;
        }
        let mut inside = BTreeSet::new();
        inside.extend(below.iter().copied());
        let round = c + 1;
        q.clear();
        for &x in &below {
            for &v in t.members(x) {
                if !on_boundary[v as usize] || x != c {
                    stamp[v as usize] = round;
                    q.push_back(v);
                }
            }
        }
        'bfs: while let Some(v) = q.pop_front() {
            for &(w, _) in g.neighbors(v) {
                if stamp[w as usize] == round || (on_boundary[w as usize] && t.cluster_of(w) == c) {
                    continue;
                }
                if !inside.contains(&t.cluster_of(w)) {
                    sep_bad = Some((c, w));
                    break 'bfs;
                }
                stamp[w as usize] = round;
                q.push_back(w);
            }
        }
        if sep_bad.is_some() {
            break;
        }
    }
    match sep_bad {
        Some((c, w)) => r.fail(
            "boundary_separation",
            "a path avoids the boundary",
            Witness { vertices: vec![w], clusters: vec![c], ..Witness::default() },
        ),
        None => r.pass("boundary_separation", "each boundary separates its cluster from the ancestors"),
    }

    let need = k as f64 - g.max_face_size() as f64 / 2.0;
    let limit = need.ceil() as i64 - 1;
    let mut dist_bad = None;
    if limit >= 0 {
        let owner: Vec<u32> =
            (0..g.n() as u32).map(|v| if on_boundary[v as usize] { t.cluster_of(v) } else { u32::MAX }).collect();
        for (c, es) in b.edges.iter().enumerate() {
            if es.is_empty() {
                continue;
            }
            let mut src: Vec<VertexId> = es.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
            src.sort_unstable();
            src.dedup();
            let d = g.bfs(&src, limit as u32);
            if let Some(v) = (0..g.n()).find(|&v| d[v] != u32::MAX && owner[v] != u32::MAX && owner[v] != c as u32) {
                dist_bad = Some((c as u32, owner[v], d[v]));
                break;
            }
        }
    }
    match dist_bad {
        Some((a, c, d)) => r.fail(
            "boundary_distance",
            &format!("boundaries of {a} and {c} at distance {d} < {need}"),
            Witness::clusters(vec![a, c]),
        ),
        None => r.pass("boundary_distance", &format!("distinct boundaries at distance >= {need}")),
    }
    r
}

fn interior(g: &LatticeGraph) -> Vec<bool> {
    (0..g.n() as u32).map(|v| !g.is_border(v)).collect()
}

/// `d(C, C^{++})` for every cluster whose grandparent exists and is not the
/// root; `None` past `cap`. Clusters with the root as grandparent are left
/// out: in a finite window the root stands for an infinite ancestor chain.
pub fn grandparent_distances(g: &LatticeGraph, t: &HierarchyTree, cap: u32) -> Vec<(u32, Option<u32>)> {
    let mut by_gp: Vec<Vec<u32>> = vec![Vec::new(); t.len()];
    for c in 0..t.len() as u32 {
        if let Some(gp) = t.ancestor(c, 2) {
            if !t.is_root(gp) {
                by_gp[gp as usize].push(c);
            }
        }
    }
    let mut out = Vec::new();
    for (gp, cs) in by_gp.iter().enumerate() {
        if cs.is_empty() {
            continue;
        }
        let dist = g.bfs(t.members(gp as u32), cap);
        for &c in cs {
            let d = t.members(c).iter().map(|&v| dist[v as usize]).min().filter(|&d| d != u32::MAX);
            out.push((c, d));
        }
    }
    out.sort_unstable();
    out
}
