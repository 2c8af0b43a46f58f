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

//! Face extraction from a 2D embedding via the rotation system.

use super::{EdgeId, Face, LatticeGraph, Topology, VertexId};
use crate::{Error, Result};

pub(super) fn trace_faces(g: &mut LatticeGraph) -> Result<()> {
    if g.cdim != 2 {
        return Err(Error::NonPlanarKind(g.kind.name().to_string()));
    }
    let n = g.n();
    let naxes = g.naxes();
    let mut rot: Vec<Vec<(VertexId, EdgeId)>> = Vec::with_capacity(n);
    for v in 0..n as VertexId {
        let mut darts: Vec<(f64, VertexId, EdgeId)> = g
            .neighbors(v)
            .iter()
            .map(|&(w, e)| {
                let d = g.displacement(e, v);
                (d[1].atan2(d[0]), w, e)
            })
            .collect();
        darts.sort_by(|a, b| a.0.total_cmp(&b.0));
        rot.push(darts.into_iter().map(|(_, w, e)| (w, e)).collect());
    }
    let dart = |e: EdgeId, from: VertexId| -> usize { 2 * e as usize + usize::from(g.edges[e as usize][0] != from) };
    let mut seen = vec![false; 2 * g.m()];
    let mut faces = Vec::new();
    let mut outer = Vec::new();
    for v0 in 0..n as VertexId {
        for &(_, e0) in &rot[v0 as usize] {
            if seen[dart(e0, v0)] {
                continue;
            }
            let mut verts = Vec::new();
            let mut edges = Vec::new();
            let mut offs = Vec::new();
            let mut acc = vec![0i32; naxes];
            let mut pos = [0.0f64; 2];
            let mut area = 0.0;
            let (mut v, mut e) = (v0, e0);
            loop {
                seen[dart(e, v)] = true;
                verts.push(v);
                edges.push(e);
                offs.extend_from_slice(&acc);
                let d = g.displacement(e, v);
                area += pos[0] * (pos[1] + d[1]) - (pos[0] + d[0]) * pos[1];
                pos = [pos[0] + d[0], pos[1] + d[1]];
                g.add_dart_shift(e, v, &mut acc);
                let w = g.other(e, v);
                let r = &rot[w as usize];
                let idx = r.iter().position(|&(_, f)| f == e).expect("dart present");
                let next = r[(idx + r.len() - 1) % r.len()].1;
                v = w;
                e = next;
                if v == v0 && e == e0 {
                    break;
                }
            }
            let face = Face { verts, edges, offs };
            if area > 1e-9 {
                faces.push(face);
            } else {
                outer.push(face);
            }
        }
    }
    match g.topology {
        Topology::Torus => {
            if !outer.is_empty() || faces.len() + g.n() != g.m() {
                return Err(Error::UnsupportedDims(format!(
                    "{} torus {:?}: face tracing gave {} faces for {} edges and {} vertices",
                    g.kind.name(),
                    g.dims,
                    faces.len(),
                    g.m(),
                    g.n()
                )));
            }
            for f in &faces {
                let mut es = f.edges.clone();
                es.sort_unstable();
                es.dedup();
                if f.size() < 3 || es.len() != f.size() {
                    return Err(Error::UnsupportedDims(format!(
                        "{} torus {:?} too small: degenerate face",
                        g.kind.name(),
                        g.dims
                    )));
                }
            }
            g.set_faces(faces, None);
        }
        Topology::Box => {
            if outer.len() != 1 {
                return Err(Error::UnsupportedDims(format!(
                    "{} box {:?}: window is not connected",
                    g.kind.name(),
                    g.dims
                )));
            }
            g.set_faces(faces, outer.pop());
        }
    }
    Ok(())
}
