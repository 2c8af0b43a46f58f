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

//! The surrounding-cluster tree of a clustering.

use super::{Clustering, HierarchyTree};
use crate::lattice::{LatticeGraph, Topology};
use crate::{Error, Result};
use std::collections::VecDeque;

/// Organises clusters into a tree rooted at the surrounding cluster.
///
/// On a torus the root is the single cluster that wraps; more than one
/// wrapping cluster rejects the trial. In a box the root is the cluster
/// joined through the exterior face. In both cases the cluster adjacency
/// graph must be a tree, and the parent of a cluster is its neighbour
/// towards the root.
pub fn build_hierarchy(g: &LatticeGraph, cl: &Clustering) -> Result<HierarchyTree> {
    let root = match g.topology {
        Topology::Torus => {
            let wraps = cl.wrapping(g);
            let mut w = wraps.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32);
            match (w.next(), w.next()) {
                (Some(r), None) => r,
                (Some(_), Some(second)) => return Err(Error::WrappingCluster(second)),
                (None, _) => return Err(Error::AmbiguousParent(0)),
            }
        }
        Topology::Box => {
            let f = g.outer_face().ok_or(Error::FaceDataMissing)?;
            let want = cl.outer_choice.map(|c| c.colour());
            let v = f.verts.iter().copied().find(|&v| Some(cl.colour[v as usize]) == want).unwrap_or(f.verts[0]);
            cl.cluster_id[v as usize]
        }
    };
    let k = cl.count;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        let (a, b) = (cl.cluster_id[u as usize], cl.cluster_id[v as usize]);
        if a != b {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    let mut parent = vec![u32::MAX; k];
    parent[root as usize] = root;
    let mut q = VecDeque::from([root]);
    while let Some(c) = q.pop_front() {
        for &x in &adj[c as usize] {
            if parent[x as usize] == u32::MAX {
                parent[x as usize] = c;
                q.push_back(x);
            } else if x != parent[c as usize] {
                // A second route between clusters: the adjacency graph has a cycle.
                return Err(Error::AmbiguousParent(x));
            }
        }
    }
    if let Some(c) = parent.iter().position(|&p| p == u32::MAX) {
        return Err(Error::AmbiguousParent(c as u32));
    }
    Ok(HierarchyTree::from_assignment(&cl.cluster_id, &parent, root))
}
