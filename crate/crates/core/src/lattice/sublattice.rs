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

//! The three square lattices inside the king's graph: the axis lattice and
//! the two diagonal lattices on the even and odd vertices.

use super::{EdgeId, Kind, LatticeGraph, Raw, Topology, VertexId};
use crate::{Error, Result};

/// A square-lattice view of part of a base graph.
#[derive(Clone, Debug)]
pub struct SubView {
    pub graph: LatticeGraph,
    /// View vertex -> base vertex.
    pub vmap: Vec<VertexId>,
    /// View edge -> base edge.
    pub emap: Vec<EdgeId>,
}

/// Splits a `square_diag` torus into `[axis, even diagonal, odd diagonal]`.
///
/// The diagonal lattices use `u = (x + y) / 2`, `v = (x - y) / 2`; their C4
/// classes are well defined on the torus only when both sides are multiples
/// of four.
pub fn square_sublattices(g: &LatticeGraph) -> Result<[SubView; 3]> {
    if g.kind != Kind::SquareDiag {
        return Err(Error::WrongKind { expected: "square_diag", got: g.kind.name().to_string() });
    }
    if g.topology != Topology::Torus {
        return Err(Error::UnsupportedDims("square_diag sublattices need a torus".into()));
    }
    if g.dims.iter().any(|&s| s % 4 != 0) {
        return Err(Error::UnsupportedDims(format!("{:?}: square_diag sides must be multiples of 4", g.dims)));
    }
    let (w, h) = (g.dims[0] as f64, g.dims[1] as f64);
    let all: Vec<VertexId> = (0..g.n() as VertexId).collect();
    let axis = view(g, &all, &[0, 1], g.periods().to_vec(), |p| [p[0], p[1]])?;
    let diag_periods = vec![vec![w / 2.0, w / 2.0], vec![h / 2.0, -h / 2.0]];
    let rot = |p: &[i32]| [(p[0] + p[1]).div_euclid(2), (p[0] - p[1]).div_euclid(2)];
    let parity = |q: i32| -> Vec<VertexId> {
        all.iter().copied().filter(|&v| (g.pos(v)[0] + g.pos(v)[1]).rem_euclid(2) == q).collect()
    };
    let even = view(g, &parity(0), &[2, 3], diag_periods.clone(), rot)?;
    let odd = view(g, &parity(1), &[2, 3], diag_periods, rot)?;
    Ok([axis, even, odd])
}

fn view(
    g: &LatticeGraph,
    verts: &[VertexId],
    dirs: &[usize; 2],
    periods: Vec<Vec<f64>>,
    pos_of: impl Fn(&[i32]) -> [i32; 2],
) -> Result<SubView> {
    let mut raw = Raw { cdim: 2, pdim: 2, naxes: g.naxes(), periods, ..Raw::default() };
    let mut local = vec![VertexId::MAX; g.n()];
    for &v in verts {
        let p = pos_of(g.pos(v));
        local[v as usize] = raw.push_vertex(&[f64::from(p[0]), f64::from(p[1])], &p, 0);
    }
    let mut emap = Vec::new();
    for e in 0..g.m() as EdgeId {
        let Some(d) = dirs.iter().position(|&x| x == g.dir(e)) else { continue };
        let (a, b) = g.endpoints(e);
        if local[a as usize] == VertexId::MAX {
            continue;
        }
        let d = d as u8;
        raw.push_edge(local[a as usize], local[b as usize], d, g.shift(e), [2 * d, 2 * d + 1]);
        emap.push(e);
    }
    let graph = LatticeGraph::finish(raw, Kind::Square, Topology::Torus, g.dims.clone(), 4, 2, 4, true)?;
    Ok(SubView { graph, vmap: verts.to_vec(), emap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_square_diag;

    #[test]
    fn views_partition_the_edges() {
        let g = build_square_diag(8, 12, Topology::Torus).unwrap();
        let views = square_sublattices(&g).unwrap();
        let mut hit = vec![0u8; g.m()];
        for sv in &views {
            assert_eq!(sv.graph.m(), 2 * sv.graph.n());
            assert_eq!(sv.graph.faces().len(), sv.graph.n());
            assert!(sv.graph.bipartite);
            for (ve, &be) in sv.emap.iter().enumerate() {
                hit[be as usize] += 1;
                let (a, b) = sv.graph.endpoints(ve as EdgeId);
                assert_eq!(g.endpoints(be), (sv.vmap[a as usize], sv.vmap[b as usize]));
            }
        }
        assert!(hit.iter().all(|&x| x == 1));
        assert_eq!(views[1].graph.n() + views[2].graph.n(), g.n());
    }

    #[test]
    fn sides_must_be_multiples_of_four() {
        let g = build_square_diag(6, 8, Topology::Torus).unwrap();
        assert!(matches!(square_sublattices(&g), Err(Error::UnsupportedDims(_))));
    }
}
