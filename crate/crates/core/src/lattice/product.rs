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

use super::{Kind, LatticeGraph, Raw, Topology, VertexId, NO_SLOT};
use crate::{Error, Result};

/// Cartesian product `H x C_m`. Vertex `(u, i)` has id `i * |V(H)| + u`;
/// direction class 0 marks intra-layer edges and 1 marks rungs.
pub fn build_product_with_cycle(h: &LatticeGraph, m: usize) -> Result<LatticeGraph> {
    let nh = h.n();
    let r = if nh == 0 { 0 } else { h.deg(0) };
    if nh == 0 || (0..nh).any(|v| h.deg(v as VertexId) != r) || r % 2 == 1 {
        return Err(Error::NonRegularInput(format!(
            "{} with {nh} vertices is not regular of even degree",
            h.kind.name()
        )));
    }
    if m < 4 {
        return Err(Error::UnsupportedDims(format!("cycle length {m} below 4")));
    }
    let hax = h.naxes();
    let mut raw = Raw { cdim: h.cdim + 1, pdim: h.pdim + 1, naxes: hax + 1, ..Raw::default() };
    for p in h.periods() {
        let mut q = p.clone();
        q.push(0.0);
        raw.periods.push(q);
    }
    let mut last = vec![0.0; h.cdim];
    last.push(m as f64);
    raw.periods.push(last);
    for i in 0..m {
        for u in 0..nh as VertexId {
            let mut c = h.coords(u).to_vec();
            c.push(i as f64);
            let mut p = h.pos(u).to_vec();
            p.push(i as i32);
            raw.push_vertex(&c, &p, h.sub(u) as u8);
        }
    }
    let id = |u: VertexId, i: usize| (i * nh) as VertexId + u;
    let mut shift = vec![0i32; hax + 1];
    for i in 0..m {
        for e in 0..h.m() as u32 {
            let (a, b) = h.endpoints(e);
            shift[..hax].copy_from_slice(h.shift(e));
            shift[hax] = 0;
            raw.push_edge(id(a, i), id(b, i), 0, &shift, [NO_SLOT, NO_SLOT]);
        }
        for u in 0..nh as VertexId {
            shift.iter_mut().for_each(|s| *s = 0);
            shift[hax] = i32::from(i + 1 == m);
            raw.push_edge(id(u, i), id(u, (i + 1) % m), 1, &shift, [NO_SLOT, NO_SLOT]);
        }
    }
    let mut dims = h.dims.clone();
    dims.push(m);
    LatticeGraph::finish(raw, Kind::Product, Topology::Torus, dims, r + 2, 2, 0, false)
}
