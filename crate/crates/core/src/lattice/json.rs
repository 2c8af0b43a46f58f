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

//! JSON form of a lattice window.

use super::{Face, Kind, LatticeGraph, Raw, Topology, VertexId, NO_SLOT};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub coords: Vec<f64>,
    #[serde(default)]
    pub pos: Vec<i32>,
    #[serde(default)]
    pub sub: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: u32,
    pub u: VertexId,
    pub v: VertexId,
    pub dir: u8,
    #[serde(default)]
    pub shift: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub topology: Topology,
    pub degree: usize,
    pub ndir: usize,
    #[serde(default)]
    pub periods: Vec<Vec<f64>>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub faces: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<Vec<VertexId>>,
}

impl GraphJson {
    pub fn from_graph(g: &LatticeGraph) -> GraphJson {
        GraphJson {
            kind: g.kind,
            dims: g.dims.clone(),
            topology: g.topology,
            degree: g.degree,
            ndir: g.ndir,
            periods: g.periods.clone(),
            vertices: (0..g.n() as VertexId)
                .map(|v| VertexJson {
                    id: v,
                    coords: g.coords(v).to_vec(),
                    pos: g.pos(v).to_vec(),
                    sub: g.sub(v) as u8,
                })
                .collect(),
            edges: (0..g.m() as u32)
                .map(|e| {
                    let (u, v) = g.endpoints(e);
                    EdgeJson { id: e, u, v, dir: g.dir(e) as u8, shift: g.shift(e).to_vec() }
                })
                .collect(),
            faces: g.faces.iter().map(|f| f.verts.clone()).collect(),
            outer_face: g.outer.as_ref().map(|f| f.verts.clone()),
        }
    }

    /// Rebuilds the graph. Slots are recovered from direction classes when
    /// the lattice has one vertex per cell.
    pub fn to_graph(&self) -> Result<LatticeGraph> {
        let n = self.vertices.len();
        let cdim = self.vertices.first().map_or(2, |v| v.coords.len());
        let pdim = self.vertices.first().map_or(0, |v| v.pos.len());
        let naxes = self.periods.len();
        let mut raw = Raw { cdim, pdim, naxes, periods: self.periods.clone(), ..Raw::default() };
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id as usize != i || v.coords.len() != cdim || v.pos.len() != pdim {
                return Err(Error::Invalid(format!("vertex record {i} malformed")));
            }
            raw.push_vertex(&v.coords, &v.pos, v.sub);
        }
        let bravais = matches!(self.kind, Kind::Square | Kind::Triangular | Kind::SquareDiag | Kind::GridD);
        for (i, e) in self.edges.iter().enumerate() {
            if e.id as usize != i || e.u as usize >= n || e.v as usize >= n || e.shift.len() != naxes {
                return Err(Error::Invalid(format!("edge record {i} malformed")));
            }
            let slot = if bravais { [2 * e.dir, 2 * e.dir + 1] } else { [NO_SLOT, NO_SLOT] };
            raw.push_edge(e.u, e.v, e.dir, &e.shift, slot);
        }
        let slot_width = if bravais { 2 * self.ndir } else { 0 };
        let mut g = LatticeGraph::finish(
            raw,
            self.kind,
            self.topology,
            self.dims.clone(),
            self.degree,
            self.ndir,
            slot_width,
            false,
        )?;
        if !self.faces.is_empty() {
            let faces = self.faces.iter().map(|vs| face_from_cycle(&g, vs)).collect::<Result<Vec<_>>>()?;
            let outer = self.outer_face.as_ref().map(|vs| face_from_cycle(&g, vs)).transpose()?;
            g.set_faces(faces, outer);
        }
        Ok(g)
    }
}

/// Rebuilds edges and winding offsets of a face from its vertex cycle.
pub(crate) fn face_from_cycle(g: &LatticeGraph, verts: &[VertexId]) -> Result<Face> {
    let k = g.naxes();
    let mut edges = Vec::with_capacity(verts.len());
    let mut offs = Vec::with_capacity(verts.len() * k);
    let mut acc = vec![0i32; k];
    for i in 0..verts.len() {
        let (a, b) = (verts[i], verts[(i + 1) % verts.len()]);
        let e = g.edge_between(a, b).ok_or_else(|| Error::Invalid(format!("face uses non-edge ({a}, {b})")))?;
        offs.extend_from_slice(&acc);
        g.add_dart_shift(e, a, &mut acc);
        edges.push(e);
    }
    Ok(Face { verts: verts.to_vec(), edges, offs })
}
