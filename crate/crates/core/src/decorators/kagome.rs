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

//! Kagome lattice: every cluster picks one of the two triangle patterns,
//! boundaries are straightened across triangles and disagreeing patterns
//! meet with the boundary edge taking the opposite colour.

use super::{finish, Decorated};
use crate::hierarchy::{coloured_hierarchy, ClusterBoundary, HierarchySource};
use crate::lattice::{EdgeId, Kind, LatticeGraph, VertexId, NONE};
use crate::rng::channels::decorators::KAG_PATTERN;
use crate::rng::LabelField;
use crate::{Error, Result};

const MIN_K: usize = 4;

fn check_kind(g: &LatticeGraph) -> Result<()> {
    if g.kind != Kind::Kagome {
        return Err(Error::WrongKind { expected: "kagome", got: g.kind.name().to_string() });
    }
    Ok(())
}

/// True if `e` lies on a down triangle. Up triangles run 0 -> 1 -> 2
/// inside a cell.
pub fn on_down_triangle(g: &LatticeGraph, e: EdgeId) -> bool {
    let (a, b) = g.endpoints(e);
    (g.sub(b) + 3 - g.sub(a)) % 3 != 1
}

/// The triangle face containing `e` and the index of the other side.
fn triangle_side(g: &LatticeGraph, e: EdgeId) -> Option<(u32, usize)> {
    let f = g.edge_faces(e);
    (0..2).find(|&s| f[s] != NONE && g.faces()[f[s] as usize].size() == 3).map(|s| (f[s], 1 - s))
}

/// Boundaries after the triangle fix: wherever `∂C` runs along two edges
/// of a triangle, those two are swapped for the third, and a triangle lying
/// entirely on `∂C` is handed to the other side. Also returns, per face,
/// the cluster whose pattern now governs that triangle.
pub fn triangle_fix(g: &LatticeGraph, hb: &ClusterBoundary) -> (Vec<Vec<EdgeId>>, Vec<u32>) {
    let mut owner = hb.face_owner.clone();
    let mut in_bnd = vec![NONE; g.m()];
    for (c, es) in hb.edges.iter().enumerate() {
        for &e in es {
            in_bnd[e as usize] = c as u32;
        }
    }
    let mut fixed = in_bnd.clone();
    for (fi, f) in g.faces().iter().enumerate() {
        if f.size() != 3 {
            continue;
        }
        for i in 0..3 {
            let c = in_bnd[f.edges[i] as usize];
            let hits: Vec<usize> = (0..3).filter(|&j| in_bnd[f.edges[j] as usize] == c).collect();
            if c == NONE || hits.len() < 2 || hits[0] != i {
                continue;
            }
            let e0 = f.edges[hits[0]];
            let across = hb.side_owner(g, e0, other_side(g, e0, fi as u32));
            for j in 0..3 {
                fixed[f.edges[j] as usize] = if hits.contains(&j) { NONE } else { c };
            }
            if let Some(a) = across {
                owner[fi] = a;
            }
        }
    }
    let mut edges = vec![Vec::new(); hb.edges.len()];
    for (e, &c) in fixed.iter().enumerate() {
        if c != NONE {
            edges[c as usize].push(e as EdgeId);
        }
    }
    (edges, owner)
}

fn other_side(g: &LatticeGraph, e: EdgeId, f: u32) -> usize {
    if g.edge_faces(e)[0] == f {
        1
    } else {
        0
    }
}

/// Vertices meeting a fixed boundary in a number of edges other than 0 or 2.
pub fn boundary_touch_violations(g: &LatticeGraph, fixed: &[Vec<EdgeId>]) -> Vec<VertexId> {
    let mut deg = vec![0u8; g.n()];
    for es in fixed {
        for &e in es {
            let (u, v) = g.endpoints(e);
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
    }
    (0..g.n() as VertexId).filter(|&v| !matches!(deg[v as usize], 0 | 2)).collect()
}

/// Schreier decoration of the kagome lattice with two colours.
pub fn schreier_kagome(g: &LatticeGraph, field: &LabelField, k: usize) -> Result<Decorated> {
    schreier_kagome_using(g, field, HierarchySource::Percolation, k)
}

pub fn schreier_kagome_using(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    k: usize,
) -> Result<Decorated> {
    check_kind(g)?;
    if k < MIN_K {
        return Err(Error::InsufficientSpacing { have: Some(k), need: MIN_K });
    }
    let hb = coloured_hierarchy(g, field, source, 1, k)?;
    schreier_kagome_with(g, field, hb, k)
}

pub fn schreier_kagome_with(g: &LatticeGraph, field: &LabelField, hb: ClusterBoundary, k: usize) -> Result<Decorated> {
    check_kind(g)?;
    let t = &hb.tree;
    let pattern: Vec<u8> = (0..t.len() as u32)
        .map(|c| Ok((field.joint_label(t.members(c), KAG_PATTERN)? >> 63) as u8))
        .collect::<Result<_>>()?;
    let (fixed, tri_owner) = triangle_fix(g, &hb);
    let mut bnd_of = vec![NONE; g.m()];
    for (c, es) in fixed.iter().enumerate() {
        for &e in es {
            bnd_of[e as usize] = c as u32;
        }
    }
    let shade = |p: u8, e: EdgeId| p ^ on_down_triangle(g, e) as u8;
    // Pattern cluster of a non-boundary edge.
    let home = |e: EdgeId| -> u32 {
        match triangle_side(g, e) {
            Some((f, _)) => tri_owner[f as usize],
            None => (0..2).find_map(|s| hb.side_owner(g, e, s)).unwrap_or(t.root()),
        }
    };
    let mut colour = vec![0u8; g.m()];
    let mut disagreeing = 0usize;
    let mut conflicts = 0usize;
    for e in 0..g.m() as EdgeId {
        let c = bnd_of[e as usize];
        if c == NONE {
            colour[e as usize] = shade(pattern[home(e) as usize], e);
            continue;
        }
        let p = t.parent(c).unwrap_or(c);
        if pattern[c as usize] == pattern[p as usize] {
            colour[e as usize] = shade(pattern[c as usize], e);
            continue;
        }
        disagreeing += 1;
        let rest: Vec<EdgeId> = match triangle_side(g, e) {
            Some((f, _)) => g.faces()[f as usize].edges.iter().copied().filter(|&x| x != e).collect(),
            None => Vec::new(),
        };
        let on = rest.iter().filter(|&&x| bnd_of[x as usize] != NONE).count();
        colour[e as usize] = if rest.len() == 2 && on == 0 {
            1 - shade(pattern[home(rest[0]) as usize], rest[0])
        } else {
            conflicts += 1;
            shade(pattern[p as usize], e)
        };
    }
    let touch = boundary_touch_violations(g, &fixed).len();
    let mut out = finish(g, &colour, 2, field, k)?;
    out.stat("clusters", t.len() as f64);
    out.stat("disagreeing_boundary_edges", disagreeing as f64);
    out.stat("boundary_touch_violations", touch as f64);
    out.stat("triangle_conflicts", conflicts as f64);
    out.hierarchy = Some(hb);
    Ok(out)
}
