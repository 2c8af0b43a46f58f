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

//! Cluster boundaries and the upward reassignment of vertices that lie
//! outside their own cluster's boundary.

use super::HierarchyTree;
use crate::lattice::{EdgeId, Face, LatticeGraph, VertexId, NONE};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ClusterBoundary {
    /// The tree after reassignment; cluster ids below refer to it.
    pub tree: HierarchyTree,
    /// `edges[c]` is the boundary edge set of cluster `c`.
    pub edges: Vec<Vec<EdgeId>>,
    /// Number of boundary edges at each vertex.
    pub incidence: Vec<u8>,
    /// Shallowest cluster among the vertices of each face.
    pub face_owner: Vec<u32>,
    pub outer_owner: Option<u32>,
    /// Vertices moved to their parent cluster.
    pub moved: usize,
}

impl ClusterBoundary {
    /// Rebuilds a boundary from stored edge sets, e.g. a hierarchy dump.
    /// Face ownership is not recovered, so `side_owner` is unavailable.
    pub fn from_edges(g: &LatticeGraph, tree: HierarchyTree, edges: Vec<Vec<EdgeId>>) -> ClusterBoundary {
        let mut incidence = vec![0u8; g.n()];
        for &e in edges.iter().flatten() {
            let (a, b) = g.endpoints(e);
            incidence[a as usize] = incidence[a as usize].saturating_add(1);
            incidence[b as usize] = incidence[b as usize].saturating_add(1);
        }
        ClusterBoundary { tree, edges, incidence, face_owner: Vec::new(), outer_owner: None, moved: 0 }
    }

    /// Owner of the face on side `s` of `e`; the exterior face for a missing side.
    pub fn side_owner(&self, g: &LatticeGraph, e: EdgeId, s: usize) -> Option<u32> {
        let f = g.edge_faces(e)[s];
        if f == NONE {
            self.outer_owner
        } else {
            Some(self.face_owner[f as usize])
        }
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.incidence[v as usize] > 0
    }

    pub fn cluster_of_edge(&self, g: &LatticeGraph, e: EdgeId) -> Option<u32> {
        let (a, b) = (self.side_owner(g, e, 0)?, self.side_owner(g, e, 1)?);
        let c = self.tree.cluster_of(g.endpoints(e).0);
        (a != b && (a == c || b == c)).then_some(c)
    }
}

fn owner(t: &HierarchyTree, depth: &[u32], f: &Face) -> std::result::Result<u32, ()> {
    let o = f.verts.iter().map(|&v| t.cluster_of(v)).min_by_key(|&c| (depth[c as usize], c)).ok_or(())?;
    for &v in &f.verts {
        let c = t.cluster_of(v);
        if c != o && t.parent(c) != Some(o) {
            return Err(());
        }
    }
    Ok(o)
}

fn owners(t: &HierarchyTree, g: &LatticeGraph, need: usize) -> Result<(Vec<u32>, Option<u32>)> {
    let depth = t.depths();
    let err = || Error::InsufficientSpacing { have: t.spacing, need };
    let fo = g.faces().iter().map(|f| owner(t, &depth, f).map_err(|_| err())).collect::<Result<Vec<u32>>>()?;
    // The exterior of a box window stands for the surrounding sea.
    let oo = g.outer_face().map(|_| t.root());
    Ok((fo, oo))
}

/// Computes boundaries after moving every vertex of a cluster `C` that lies
/// on no face owned by `C` up to `C^+`.
///
/// Each face is owned by the shallowest cluster among its vertices; an edge
/// between a face owned by `C` and a face owned by `C^+` belongs to the
/// boundary of `C`.
pub fn boundary(g: &LatticeGraph, t: &HierarchyTree) -> Result<ClusterBoundary> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    let need = g.max_face_size() / 2 + 1;
    if let Some(s) = t.spacing {
        if s < need {
            return Err(Error::InsufficientSpacing { have: Some(s), need });
        }
    }
    let (fo, _) = owners(t, g, need)?;
    let mut moved = 0usize;
    let assign: Vec<u32> = (0..g.n() as VertexId)
        .map(|v| {
            let c = t.cluster_of(v);
            match t.parent(c) {
                Some(p) if !g.vertex_faces(v).iter().any(|&f| fo[f as usize] == c) => {
                    moved += 1;
                    p
                }
                _ => c,
            }
        })
        .collect();
    let tree =
        HierarchyTree::from_assignment(&assign, t.parents(), t.root()).with_meta_from(t).with_eta_from(t, &assign);
    let (face_owner, outer_owner) = owners(&tree, g, need)?;
    let mut edges = vec![Vec::new(); tree.len()];
    let mut incidence = vec![0u8; g.n()];
    let mut b = ClusterBoundary { tree, edges: Vec::new(), incidence: Vec::new(), face_owner, outer_owner, moved };
    for e in 0..g.m() as EdgeId {
        let (Some(a), Some(c)) = (b.side_owner(g, e, 0), b.side_owner(g, e, 1)) else { continue };
        if a == c {
            continue;
        }
        let deeper = if b.tree.parent(a) == Some(c) {
            a
        } else if b.tree.parent(c) == Some(a) {
            c
        } else {
            // Border edge of a deep cluster against the exterior.
            continue;
        };
        edges[deeper as usize].push(e);
        let (u, v) = g.endpoints(e);
        incidence[u as usize] += 1;
        incidence[v as usize] += 1;
    }
    b.edges = edges;
    b.incidence = incidence;
    Ok(b)
}

impl HierarchyTree {
    /// Carries cluster colours across a reassignment that only empties
    /// clusters (old labels in `assign`).
    pub(crate) fn with_eta_from(mut self, old: &HierarchyTree, assign: &[u32]) -> HierarchyTree {
        if let Some(eta) = &old.eta {
            let e: Vec<u8> =
                (0..self.len() as u32).map(|c| eta[assign[self.members(c)[0] as usize] as usize]).collect();
            self.eta = Some(e);
        }
        self
    }
}
