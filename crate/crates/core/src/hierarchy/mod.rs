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

//! Cluster hierarchies: percolation clusters, the surrounding-cluster tree,
//! coarsening to spaced and coloured hierarchies, and cluster boundaries.

mod boundary;
mod coarsen;
mod percolation;
mod toast;
mod tree;

pub use boundary::{boundary, ClusterBoundary};
pub use coarsen::{coarsen, colorize, rounds_for_spacing, space};
pub use percolation::{clusters_from_colouring, percolation_clusters, Clustering};
pub use toast::{maximal_r_discrete, toast_hierarchy, toast_r0, toast_scales};
pub use tree::build_hierarchy;

use crate::lattice::{LatticeGraph, VertexId};
use crate::rng::LabelField;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Where the clusters of a hierarchy come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HierarchySource {
    /// Percolation clusters, coarsened and spaced.
    #[default]
    Percolation,
    /// Nested balls around discrete centre sets.
    Toast,
}

impl HierarchySource {
    pub fn parse(s: &str) -> Option<HierarchySource> {
        match s {
            "percolation" => Some(HierarchySource::Percolation),
            "toast" => Some(HierarchySource::Toast),
            _ => None,
        }
    }
}

/// An `s`-spaced tree from the given source.
pub fn spaced_tree(g: &LatticeGraph, field: &LabelField, source: HierarchySource, s: usize) -> Result<HierarchyTree> {
    match source {
        HierarchySource::Percolation => {
            let cl = percolation_clusters(g, field)?;
            let t = build_hierarchy(g, &cl)?;
            let t = coarsen(&t, field, rounds_for_spacing(s))?;
            space(g, &t, s)
        }
        HierarchySource::Toast => toast_hierarchy(g, field, s),
    }
}

/// A `c * k`-spaced tree cut into `c` colour bands (k-spaced, coloured).
pub fn coloured_tree(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    c: usize,
    k: usize,
) -> Result<HierarchyTree> {
    let t = spaced_tree(g, field, source, c * k)?;
    colorize(g, &t, c, k)
}

/// [`coloured_tree`] followed by boundary reassignment.
pub fn coloured_hierarchy(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    c: usize,
    k: usize,
) -> Result<ClusterBoundary> {
    let t = coloured_tree(g, field, source, c, k)?;
    boundary(g, &t)
}

/// A partition of the vertices into clusters, organised as a rooted tree.
///
/// Cluster ids are dense and ordered by smallest member. The root is its own
/// parent.
#[derive(Clone, Debug)]
pub struct HierarchyTree {
    clusters: Vec<Vec<VertexId>>,
    cluster_of: Vec<u32>,
    parent: Vec<u32>,
    root: u32,
    /// Spacing the tree was built for, if any.
    pub spacing: Option<usize>,
    /// Colour of each cluster in `1..=colours`.
    pub eta: Option<Vec<u8>>,
    pub colours: usize,
    /// Coarsening rounds applied so far.
    pub rounds: u32,
    /// Set when a coarsening round merged clusters into the root.
    pub root_absorbed: bool,
    /// Trials rejected before this tree was accepted.
    pub retries: u32,
}

impl HierarchyTree {
    /// Builds a tree from a vertex assignment. Labels need not be dense;
    /// `parent` is indexed by label and `root` is a label.
    pub fn from_assignment(assign: &[u32], parent: &[u32], root: u32) -> HierarchyTree {
        let nl = parent.len();
        let mut remap = vec![u32::MAX; nl];
        let mut clusters: Vec<Vec<VertexId>> = Vec::new();
        let mut cluster_of = vec![0u32; assign.len()];
        for (v, &a) in assign.iter().enumerate() {
            if remap[a as usize] == u32::MAX {
                remap[a as usize] = clusters.len() as u32;
                clusters.push(Vec::new());
            }
            let c = remap[a as usize];
            cluster_of[v] = c;
            clusters[c as usize].push(v as VertexId);
        }
        let mut par = vec![0u32; clusters.len()];
        for l in 0..nl {
            let c = remap[l];
            if c == u32::MAX {
                continue;
            }
            let mut p = parent[l];
            // Skip labels that own no vertices.
            while remap[p as usize] == u32::MAX && p != root {
                p = parent[p as usize];
            }
            par[c as usize] = remap[p as usize];
        }
        let root = remap[root as usize];
        par[root as usize] = root;
        HierarchyTree {
            clusters,
            cluster_of,
            parent: par,
            root,
            spacing: None,
            eta: None,
            colours: 0,
            rounds: 0,
            root_absorbed: false,
            retries: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_root(&self, c: u32) -> bool {
        c == self.root
    }

    pub fn members(&self, c: u32) -> &[VertexId] {
        &self.clusters[c as usize]
    }

    pub fn clusters(&self) -> &[Vec<VertexId>] {
        &self.clusters
    }

    pub fn cluster_of(&self, v: VertexId) -> u32 {
        self.cluster_of[v as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.cluster_of
    }

    /// Parent cluster, `None` for the root.
    pub fn parent(&self, c: u32) -> Option<u32> {
        (c != self.root).then(|| self.parent[c as usize])
    }

    /// Raw parent table (root maps to itself).
    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// `n`-th ancestor, `ancestor(c, 0) == Some(c)`.
    pub fn ancestor(&self, c: u32, n: usize) -> Option<u32> {
        let mut x = c;
        for _ in 0..n {
            x = self.parent(x)?;
        }
        Some(x)
    }

    pub fn eta(&self, c: u32) -> Option<u8> {
        self.eta.as_ref().map(|e| e[c as usize])
    }

    pub fn children(&self) -> Vec<Vec<u32>> {
        let mut ch = vec![Vec::new(); self.len()];
        for c in 0..self.len() as u32 {
            if let Some(p) = self.parent(c) {
                ch[p as usize].push(c);
            }
        }
        ch
    }

    /// Distance from the root in the tree.
    pub fn depths(&self) -> Vec<u32> {
        let ch = self.children();
        let mut depth = vec![0u32; self.len()];
        let mut q = VecDeque::from([self.root]);
        while let Some(c) = q.pop_front() {
            for &x in &ch[c as usize] {
                depth[x as usize] = depth[c as usize] + 1;
                q.push_back(x);
            }
        }
        depth
    }

    /// Unordered pairs of distinct clusters joined by an edge of `g`.
    pub fn adjacent_pairs(&self, g: &LatticeGraph) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for e in 0..g.m() as u32 {
            let (u, v) = g.endpoints(e);
            let (a, b) = (self.cluster_of(u), self.cluster_of(v));
            if a != b {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    pub(crate) fn with_meta_from(mut self, other: &HierarchyTree) -> HierarchyTree {
        self.spacing = other.spacing;
        self.colours = other.colours;
        self.rounds = other.rounds;
        self.root_absorbed = other.root_absorbed;
        self.retries = other.retries;
        self
    }
}

/// `d(v, C^+)` for every vertex `v` of a non-root cluster `C`, computed by
/// a BFS from each parent cluster. Values past `limit` are `u32::MAX`; root
/// vertices get `0`.
pub fn distance_to_parent(g: &LatticeGraph, t: &HierarchyTree, limit: u32) -> Vec<u32> {
    let mut out = vec![u32::MAX; g.n()];
    for &v in t.members(t.root()) {
        out[v as usize] = 0;
    }
    let ch = t.children();
    let mut ball = BoundedBfs::new(g.n());
    for p in 0..t.len() as u32 {
        if ch[p as usize].is_empty() {
            continue;
        }
        ball.run(g, t.members(p), limit, |v, d| {
            let c = t.cluster_of(v);
            if c != p && t.parent(c) == Some(p) {
                out[v as usize] = d;
            }
        });
    }
    out
}

/// BFS with a reusable visit stamp, for many small searches on one graph.
pub(crate) struct BoundedBfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    cur: u32,
    queue: VecDeque<VertexId>,
}

impl BoundedBfs {
    pub(crate) fn new(n: usize) -> BoundedBfs {
        BoundedBfs { stamp: vec![0; n], dist: vec![0; n], cur: 0, queue: VecDeque::new() }
    }

    /// Calls `visit(v, d)` for every vertex within `limit` of `sources`.
    pub(crate) fn run(
        &mut self,
        g: &LatticeGraph,
        sources: &[VertexId],
        limit: u32,
        mut visit: impl FnMut(VertexId, u32),
    ) {
        self.cur += 1;
        let cur = self.cur;
        self.queue.clear();
        for &s in sources {
            if self.stamp[s as usize] != cur {
                self.stamp[s as usize] = cur;
                self.dist[s as usize] = 0;
                self.queue.push_back(s);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            let d = self.dist[v as usize];
            visit(v, d);
            if d >= limit {
                continue;
            }
            for &(w, _) in g.neighbors(v) {
                if self.stamp[w as usize] != cur {
                    self.stamp[w as usize] = cur;
                    self.dist[w as usize] = d + 1;
                    self.queue.push_back(w);
                }
            }
        }
    }
}

/// Serialisable view used by the JSON dump.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterRecord {
    pub id: u32,
    pub parent: Option<u32>,
    pub eta: Option<u8>,
    pub vertices: Vec<VertexId>,
    pub boundary_edges: Vec<u32>,
}
