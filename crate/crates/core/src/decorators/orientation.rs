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

//! Balanced orientations of planar windows from a chessboard face
//! pattern per cluster.

use super::{interior_mask, Orientation};
use crate::hierarchy::{coloured_hierarchy, ClusterBoundary, HierarchySource};
use crate::lattice::{EdgeId, LatticeGraph, Topology, VertexId, NONE};
use crate::rng::channels::decorators::{ORI_EULER_DIR, ORI_EULER_START, ORI_PATTERN};
use crate::rng::LabelField;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A balanced orientation with the hierarchy it was built on.
#[derive(Clone, Debug)]
pub struct PlanarOrientation {
    pub orientation: Orientation,
    pub hierarchy: ClusterBoundary,
    pub mask: Option<Vec<bool>>,
    pub stats: BTreeMap<String, f64>,
}

/// Proper 2-colouring of the bounded faces across shared edges.
pub fn chessboard(g: &LatticeGraph) -> Result<Vec<u8>> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    let nf = g.faces().len();
    let mut col = vec![u8::MAX; nf];
    for s in 0..nf {
        if col[s] != u8::MAX {
            continue;
        }
        col[s] = 0;
        let mut stack = vec![s as u32];
        while let Some(f) = stack.pop() {
            for &e in &g.faces()[f as usize].edges {
                let [a, b] = g.edge_faces(e);
                let h = if a == f { b } else { a };
                if h == NONE {
                    continue;
                }
                if col[h as usize] == u8::MAX {
                    col[h as usize] = 1 - col[f as usize];
                    stack.push(h);
                } else if col[h as usize] == col[f as usize] {
                    return Err(Error::UnsupportedDims(format!(
                        "{} {:?}: faces are not 2-colourable",
                        g.kind.name(),
                        g.dims
                    )));
                }
            }
        }
    }
    Ok(col)
}

/// Head of `e` when black faces (colour `black`) run counter-clockwise in
/// the traced order and white faces the other way.
fn pattern_head(g: &LatticeGraph, chess: &[u8], black: u8, e: EdgeId) -> VertexId {
    let [a, b] = g.edge_faces(e);
    let f = if a != NONE { a } else { b };
    let face = &g.faces()[f as usize];
    let i = face.edges.iter().position(|&x| x == e).expect("edge on its face");
    let (from, to) = (face.verts[i], face.verts[(i + 1) % face.size()]);
    if chess[f as usize] == black {
        to
    } else {
        from
    }
}

/// Orients the edge set `es` so that every vertex has equal in- and
/// out-degree in it, by splitting it into closed trails.
pub(crate) fn orient_even_subgraph(
    g: &LatticeGraph,
    es: &[EdgeId],
    field: &LabelField,
    channels: (u64, u64),
    head: &mut [VertexId],
) -> usize {
    let mut inc: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in es {
        let (u, v) = g.endpoints(e);
        inc.entry(u).or_default().push(e);
        inc.entry(v).or_default().push(e);
    }
    for list in inc.values_mut() {
        list.sort_by_key(|&e| std::cmp::Reverse(e));
    }
    let mut used: BTreeMap<EdgeId, bool> = es.iter().map(|&e| (e, false)).collect();
    let mut starts: Vec<VertexId> = inc.keys().copied().collect();
    starts.sort_by_key(|&v| std::cmp::Reverse((field.label(v, channels.0), v)));
    let mut trails = 0;
    for s in starts {
        loop {
            let mut trail = Vec::new();
            let mut v = s;
            while let Some(e) = next_unused(&mut inc, &used, v) {
                used.insert(e, true);
                trail.push((e, v));
                v = g.other(e, v);
            }
            if trail.is_empty() {
                break;
            }
            trails += 1;
            let reverse = field.coin(s, channels.1);
            for (e, from) in trail {
                head[e as usize] = if reverse { from } else { g.other(e, from) };
            }
        }
    }
    trails
}

fn next_unused(
    inc: &mut BTreeMap<VertexId, Vec<EdgeId>>,
    used: &BTreeMap<EdgeId, bool>,
    v: VertexId,
) -> Option<EdgeId> {
    let list = inc.get_mut(&v)?;
    while let Some(&e) = list.last() {
        if used[&e] {
            list.pop();
        } else {
            return Some(e);
        }
    }
    None
}

/// Balanced orientation of a planar window with even degrees.
pub fn balanced_orientation_planar(g: &LatticeGraph, field: &LabelField, k: usize) -> Result<PlanarOrientation> {
    balanced_orientation_planar_using(g, field, HierarchySource::Percolation, k)
}

pub fn balanced_orientation_planar_using(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    k: usize,
) -> Result<PlanarOrientation> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    let need = (g.max_face_size() + 1).div_ceil(2);
    if k < need {
        return Err(Error::InsufficientSpacing { have: Some(k), need });
    }
    let hb = coloured_hierarchy(g, field, source, 1, k)?;
    balanced_orientation_planar_with(g, field, hb, k)
}

pub fn balanced_orientation_planar_with(
    g: &LatticeGraph,
    field: &LabelField,
    hb: ClusterBoundary,
    k: usize,
) -> Result<PlanarOrientation> {
    if g.topology == Topology::Torus {
        if let Some(v) = (0..g.n() as VertexId).find(|&v| !g.deg(v).is_multiple_of(2)) {
            return Err(Error::Invalid(format!("vertex {v} has odd degree")));
        }
    }
    let chess = chessboard(g)?;
    let t = &hb.tree;
    let pattern: Vec<u8> = (0..t.len() as u32)
        .map(|c| Ok((field.joint_label(t.members(c), ORI_PATTERN)? >> 63) as u8))
        .collect::<Result<_>>()?;
    let mut head: Vec<VertexId> = (0..g.m() as EdgeId)
        .map(|e| {
            let c = (0..2).find_map(|s| hb.side_owner(g, e, s).filter(|_| g.edge_faces(e)[s] != NONE));
            pattern_head(g, &chess, pattern[c.unwrap_or(t.root()) as usize], e)
        })
        .collect();
    let mut disagreeing = 0usize;
    let mut trails = 0usize;
    for (c, es) in hb.edges.iter().enumerate() {
        let Some(p) = t.parent(c as u32) else { continue };
        if pattern[c] == pattern[p as usize] {
            for &e in es {
                head[e as usize] = pattern_head(g, &chess, pattern[c], e);
            }
        } else {
            disagreeing += 1;
            trails += orient_even_subgraph(g, es, field, (ORI_EULER_START, ORI_EULER_DIR), &mut head);
        }
    }
    let mut stats = BTreeMap::new();
    stats.insert("clusters".to_string(), t.len() as f64);
    stats.insert("disagreeing_boundaries".to_string(), disagreeing as f64);
    stats.insert("boundary_trails".to_string(), trails as f64);
    let mask = (g.topology == Topology::Box).then(|| interior_mask(g, 2 * k as u32));
    Ok(PlanarOrientation { orientation: Orientation { head }, hierarchy: hb, mask, stats })
}
