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

//! Finite lattice windows with embedding data.
//!
//! Every edge stores an integer `shift`: how many times it crosses each
//! periodic boundary when walked from its first to its second endpoint.
//! Summing shifts around a closed walk gives its winding vector.

mod build;
mod faces;
mod json;
mod line;
mod product;
mod sublattice;

pub mod augmented;

pub use augmented::{augmented_adjacency, AugmentedAdjacency, Colour, FaceChoice};
pub use build::{build_archimedean, build_grid_d, build_hexagonal, build_square_diag, custom};
pub use json::GraphJson;
pub use line::{line_graph, CliqueIncidence};
pub use product::build_product_with_cycle;
pub use sublattice::{square_sublattices, SubView};

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

pub type VertexId = u32;
pub type EdgeId = u32;
pub const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Square,
    Triangular,
    Kagome,
    T3464,
    SquareDiag,
    GridD,
    Product,
    LineGraph,
    Custom,
    Hexagonal,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Square => "square",
            Kind::Triangular => "triangular",
            Kind::Kagome => "kagome",
            Kind::T3464 => "t3464",
            Kind::SquareDiag => "square_diag",
            Kind::GridD => "grid_d",
            Kind::Product => "product",
            Kind::LineGraph => "line_graph",
            Kind::Custom => "custom",
            Kind::Hexagonal => "hexagonal",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        let k = match s {
            "square" => Kind::Square,
            "triangular" => Kind::Triangular,
            "kagome" => Kind::Kagome,
            "t3464" => Kind::T3464,
            "square_diag" | "square-diag" => Kind::SquareDiag,
            "grid_d" | "grid-d" | "grid" => Kind::GridD,
            "product" => Kind::Product,
            "line_graph" | "line-graph" => Kind::LineGraph,
            "custom" => Kind::Custom,
            "hexagonal" => Kind::Hexagonal,
            _ => return None,
        };
        Some(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Torus,
    Box,
}

/// A face as a cyclic vertex sequence, counter-clockwise in the embedding.
///
/// `offs` holds, per vertex, the winding of the face walk from `verts[0]`,
/// `naxes` integers each.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub verts: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub offs: Vec<i32>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.verts.len()
    }

    pub fn offset(&self, i: usize, naxes: usize) -> &[i32] {
        &self.offs[i * naxes..(i + 1) * naxes]
    }
}

/// Finite window of a lattice. Immutable after construction.
#[derive(Clone, Debug)]
pub struct LatticeGraph {
    pub kind: Kind,
    pub topology: Topology,
    pub dims: Vec<usize>,
    pub degree: usize,
    pub ndir: usize,
    pub bipartite: bool,
    pub(crate) cdim: usize,
    pub(crate) coords: Vec<f64>,
    pub(crate) periods: Vec<Vec<f64>>,
    pub(crate) pdim: usize,
    pub(crate) pos: Vec<i32>,
    pub(crate) sub: Vec<u8>,
    pub(crate) edges: Vec<[VertexId; 2]>,
    pub(crate) dir: Vec<u8>,
    pub(crate) shift: Vec<i32>,
    pub(crate) faces: Vec<Face>,
    pub(crate) outer: Option<Face>,
    adj_off: Vec<u32>,
    adj: Vec<(VertexId, EdgeId)>,
    edge_faces: Vec<[u32; 2]>,
    vf_off: Vec<u32>,
    vf: Vec<u32>,
    slot_width: usize,
    slots: Vec<EdgeId>,
}

/// Vertex and edge lists before adjacency, faces and slots are derived.
#[derive(Clone, Debug, Default)]
pub(crate) struct Raw {
    pub cdim: usize,
    pub coords: Vec<f64>,
    pub pdim: usize,
    pub pos: Vec<i32>,
    pub sub: Vec<u8>,
    pub naxes: usize,
    pub periods: Vec<Vec<f64>>,
    pub edges: Vec<[VertexId; 2]>,
    pub dir: Vec<u8>,
    pub shift: Vec<i32>,
    /// Slot of the edge at its first and second endpoint, when the lattice
    /// has one vertex per cell.
    pub slot: Vec<[u8; 2]>,
}

impl Raw {
    pub fn n(&self) -> usize {
        self.sub.len()
    }

    pub fn push_vertex(&mut self, coords: &[f64], pos: &[i32], sub: u8) -> VertexId {
        debug_assert_eq!(coords.len(), self.cdim);
        debug_assert_eq!(pos.len(), self.pdim);
        self.coords.extend_from_slice(coords);
        self.pos.extend_from_slice(pos);
        self.sub.push(sub);
        (self.sub.len() - 1) as VertexId
    }

    pub fn push_edge(&mut self, u: VertexId, v: VertexId, dir: u8, shift: &[i32], slot: [u8; 2]) {
        debug_assert_eq!(shift.len(), self.naxes);
        self.edges.push([u, v]);
        self.dir.push(dir);
        self.shift.extend_from_slice(shift);
        self.slot.push(slot);
    }
}

pub(crate) const NO_SLOT: u8 = u8::MAX;

impl LatticeGraph {
    pub(crate) fn finish(
        raw: Raw,
        kind: Kind,
        topology: Topology,
        dims: Vec<usize>,
        degree: usize,
        ndir: usize,
        slot_width: usize,
        trace: bool,
    ) -> crate::Result<LatticeGraph> {
        let n = raw.n();
        let mut deg = vec![0u32; n];
        for &[u, v] in &raw.edges {
            if u == v {
                return Err(crate::Error::UnsupportedDims(format!(
                    "{} window closes into a loop at vertex {u}",
                    kind.name()
                )));
            }
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut adj_off = vec![0u32; n + 1];
        for i in 0..n {
            adj_off[i + 1] = adj_off[i] + deg[i];
        }
        let mut fill = adj_off.clone();
        let mut adj = vec![(0, 0); adj_off[n] as usize];
        for (e, &[u, v]) in raw.edges.iter().enumerate() {
            adj[fill[u as usize] as usize] = (v, e as EdgeId);
            fill[u as usize] += 1;
            adj[fill[v as usize] as usize] = (u, e as EdgeId);
            fill[v as usize] += 1;
        }
        let mut slots = Vec::new();
        if slot_width > 0 {
            slots = vec![NONE; n * slot_width];
            for (e, &[u, v]) in raw.edges.iter().enumerate() {
                let [su, sv] = raw.slot[e];
                if su != NO_SLOT {
                    slots[u as usize * slot_width + su as usize] = e as EdgeId;
                }
                if sv != NO_SLOT {
                    slots[v as usize * slot_width + sv as usize] = e as EdgeId;
                }
            }
        }
        let mut g = LatticeGraph {
            kind,
            topology,
            dims,
            degree,
            ndir,
            bipartite: false,
            cdim: raw.cdim,
            coords: raw.coords,
            periods: raw.periods,
            pdim: raw.pdim,
            pos: raw.pos,
            sub: raw.sub,
            edges: raw.edges,
            dir: raw.dir,
            shift: raw.shift,
            faces: Vec::new(),
            outer: None,
            adj_off,
            adj,
            edge_faces: Vec::new(),
            vf_off: Vec::new(),
            vf: Vec::new(),
            slot_width,
            slots,
        };
        if topology == Topology::Torus {
            for v in 0..n {
                if g.deg(v as VertexId) != degree {
                    return Err(crate::Error::UnsupportedDims(format!(
                        "{} window: vertex {v} has degree {} instead of {degree}",
                        kind.name(),
                        g.deg(v as VertexId)
                    )));
                }
            }
        }
        if trace {
            faces::trace_faces(&mut g)?;
        }
        g.index_faces();
        g.bipartite = g.two_colouring().is_some();
        Ok(g)
    }

    pub(crate) fn set_faces(&mut self, faces: Vec<Face>, outer: Option<Face>) {
        self.faces = faces;
        self.outer = outer;
        self.index_faces();
    }

    fn index_faces(&mut self) {
        let n = self.n();
        self.edge_faces = vec![[NONE; 2]; self.m()];
        let mut cnt = vec![0u32; n + 1];
        for (fi, f) in self.faces.iter().enumerate() {
            for &e in &f.edges {
                let slot = &mut self.edge_faces[e as usize];
                if slot[0] == NONE {
                    slot[0] = fi as u32;
                } else {
                    slot[1] = fi as u32;
                }
            }
            for &v in &f.verts {
                cnt[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            cnt[i + 1] += cnt[i];
        }
        let mut fill = cnt.clone();
        let mut vf = vec![0u32; cnt[n] as usize];
        for (fi, f) in self.faces.iter().enumerate() {
            for &v in &f.verts {
                vf[fill[v as usize] as usize] = fi as u32;
                fill[v as usize] += 1;
            }
        }
        self.vf_off = cnt;
        self.vf = vf;
    }

    pub fn n(&self) -> usize {
        self.sub.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn naxes(&self) -> usize {
        self.periods.len()
    }

    pub fn cdim(&self) -> usize {
        self.cdim
    }

    pub fn pdim(&self) -> usize {
        self.pdim
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [u, v] = self.edges[e as usize];
        (u, v)
    }

    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.edges[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn dir(&self, e: EdgeId) -> usize {
        self.dir[e as usize] as usize
    }

    pub fn shift(&self, e: EdgeId) -> &[i32] {
        let k = self.naxes();
        &self.shift[e as usize * k..(e as usize + 1) * k]
    }

    /// Adds the winding of walking `e` away from `from` into `acc`.
    pub fn add_dart_shift(&self, e: EdgeId, from: VertexId, acc: &mut [i32]) {
        let s = self.shift(e);
        if self.edges[e as usize][0] == from {
            for (a, x) in acc.iter_mut().zip(s) {
                *a += x;
            }
        } else {
            for (a, x) in acc.iter_mut().zip(s) {
                *a -= x;
            }
        }
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        let v = v as usize;
        &self.adj[self.adj_off[v] as usize..self.adj_off[v + 1] as usize]
    }

    pub fn deg(&self, v: VertexId) -> usize {
        let v = v as usize;
        (self.adj_off[v + 1] - self.adj_off[v]) as usize
    }

    pub fn coords(&self, v: VertexId) -> &[f64] {
        &self.coords[v as usize * self.cdim..(v as usize + 1) * self.cdim]
    }

    pub fn periods(&self) -> &[Vec<f64>] {
        &self.periods
    }

    /// Lattice coordinates of the vertex's cell.
    pub fn pos(&self, v: VertexId) -> &[i32] {
        &self.pos[v as usize * self.pdim..(v as usize + 1) * self.pdim]
    }

    pub fn sub(&self, v: VertexId) -> usize {
        self.sub[v as usize] as usize
    }

    /// Real displacement of the dart leaving `from` along `e`.
    pub fn displacement(&self, e: EdgeId, from: VertexId) -> Vec<f64> {
        let to = self.other(e, from);
        let mut d: Vec<f64> = self.coords(to).iter().zip(self.coords(from)).map(|(a, b)| a - b).collect();
        let mut w = vec![0i32; self.naxes()];
        self.add_dart_shift(e, from, &mut w);
        for (a, &k) in w.iter().enumerate() {
            if k != 0 {
                for (x, p) in d.iter_mut().zip(&self.periods[a]) {
                    *x += k as f64 * p;
                }
            }
        }
        d
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn outer_face(&self) -> Option<&Face> {
        self.outer.as_ref()
    }

    pub fn has_faces(&self) -> bool {
        !self.faces.is_empty()
    }

    pub fn max_face_size(&self) -> usize {
        self.faces.iter().map(Face::size).max().unwrap_or(0)
    }

    /// The (at most two) faces containing `e`; `NONE` marks a missing side.
    pub fn edge_faces(&self, e: EdgeId) -> [u32; 2] {
        self.edge_faces[e as usize]
    }

    pub fn vertex_faces(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        &self.vf[self.vf_off[v] as usize..self.vf_off[v + 1] as usize]
    }

    pub fn slot_width(&self) -> usize {
        self.slot_width
    }

    /// Edge leaving `v` in slot `s` (`2*dir` forward, `2*dir+1` backward).
    pub fn slot(&self, v: VertexId, s: usize) -> Option<EdgeId> {
        if self.slot_width == 0 {
            return None;
        }
        let e = self.slots[v as usize * self.slot_width + s];
        (e != NONE).then_some(e)
    }

    /// Neighbour of `v` one step along direction `d` (`forward` or back).
    pub fn step(&self, v: VertexId, d: usize, forward: bool) -> Option<(VertexId, EdgeId)> {
        let e = self.slot(v, 2 * d + usize::from(!forward))?;
        Some((self.other(e, v), e))
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.neighbors(u).iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    /// Vertices on the window border (box topology only).
    pub fn is_border(&self, v: VertexId) -> bool {
        self.topology == Topology::Box && self.deg(v) < self.degree
    }

    /// Proper 2-colouring of the vertices, if one exists.
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        let n = self.n();
        let mut col = vec![u8::MAX; n];
        let mut q = VecDeque::new();
        for s in 0..n {
            if col[s] != u8::MAX {
                continue;
            }
            col[s] = 0;
            q.push_back(s as VertexId);
            while let Some(v) = q.pop_front() {
                for &(w, _) in self.neighbors(v) {
                    if col[w as usize] == u8::MAX {
                        col[w as usize] = 1 - col[v as usize];
                        q.push_back(w);
                    } else if col[w as usize] == col[v as usize] {
                        return None;
                    }
                }
            }
        }
        Some(col)
    }

    /// BFS distances from `sources`, stopping past `limit`; unreached = `u32::MAX`.
    pub fn bfs(&self, sources: &[VertexId], limit: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        let mut q = VecDeque::new();
        for &s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                q.push_back(s);
            }
        }
        while let Some(v) = q.pop_front() {
            let dv = dist[v as usize];
            if dv >= limit {
                continue;
            }
            for &(w, _) in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Stable descriptor string, used to key the label field.
    pub fn descriptor(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let topo = match self.topology {
            Topology::Torus => "torus",
            Topology::Box => "box",
        };
        format!("{}:{}:{}:{}:{}", self.kind.name(), dims.join("x"), topo, self.n(), self.m())
    }
}
