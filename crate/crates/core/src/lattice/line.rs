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

use super::{EdgeId, Kind, LatticeGraph, Raw, VertexId, NO_SLOT};
use crate::{Error, Result};

/// For every vertex of the line graph (an edge `uv` of `G`), the two cliques
/// it lies in: `(u, v)` in the edge's stored order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueIncidence {
    pub pairs: Vec<(VertexId, VertexId)>,
    /// Clique of each `G`-vertex, listed in `G`'s adjacency order.
    pub members: Vec<Vec<VertexId>>,
}

impl CliqueIncidence {
    pub fn clique_size(&self) -> usize {
        self.members.first().map_or(0, Vec::len)
    }
}

/// Winding of the copy of `e` that touches the canonical copy of `x`.
fn offset_at(g: &LatticeGraph, e: EdgeId, x: VertexId, out: &mut [i32]) {
    out.iter_mut().for_each(|o| *o = 0);
    if g.endpoints(e).0 != x {
        for (o, s) in out.iter_mut().zip(g.shift(e)) {
            *o = -s;
        }
    }
}

/// Line graph of a regular graph. `L(G)` vertex `e` is `G` edge `e`.
pub fn line_graph(g: &LatticeGraph) -> Result<(LatticeGraph, CliqueIncidence)> {
    let n = g.n();
    let r = if n == 0 { 0 } else { g.deg(0) };
    if r == 0 || (0..n).any(|v| g.deg(v as VertexId) != r) {
        return Err(Error::NonRegularInput(format!("{} is not regular", g.kind.name())));
    }
    let k = g.naxes();
    let mut raw = Raw { cdim: g.cdim, pdim: g.pdim, naxes: k, periods: g.periods.clone(), ..Raw::default() };
    let mut pairs = Vec::with_capacity(g.m());
    for e in 0..g.m() as EdgeId {
        let (u, v) = g.endpoints(e);
        let d = g.displacement(e, u);
        let c: Vec<f64> = g.coords(u).iter().zip(&d).map(|(a, b)| a + b / 2.0).collect();
        raw.push_vertex(&c, g.pos(u), g.dir(e) as u8);
        pairs.push((u, v));
    }
    let mut members = Vec::with_capacity(n);
    let (mut oa, mut ob) = (vec![0i32; k], vec![0i32; k]);
    let mut shift = vec![0i32; k];
    for x in 0..n as VertexId {
        let es: Vec<EdgeId> = g.neighbors(x).iter().map(|&(_, e)| e).collect();
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                offset_at(g, es[i], x, &mut oa);
                offset_at(g, es[j], x, &mut ob);
                for a in 0..k {
                    shift[a] = ob[a] - oa[a];
                }
                raw.push_edge(es[i], es[j], 0, &shift, [NO_SLOT, NO_SLOT]);
            }
        }
        members.push(es);
    }
    let lg = LatticeGraph::finish(raw, Kind::LineGraph, g.topology, g.dims.clone(), 2 * (r - 1), 1, 0, false)?;
    Ok((lg, CliqueIncidence { pairs, members }))
}
