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

//! Square sublattices spanned by two edge directions, their monochromatic
//! C4 patterns and the guard rule at interfaces.

use crate::lattice::{EdgeId, LatticeGraph, VertexId};

/// Two lattice directions `a`, `b` viewed as the axes of a square lattice
/// with integer coordinates `u`, `v` (linear in the cell position).
#[derive(Clone, Debug)]
pub(crate) struct Plane {
    pub a: usize,
    pub b: usize,
    /// The pattern axis runs against the lattice direction.
    a_rev: bool,
    b_rev: bool,
    cu: Vec<i64>,
    cv: Vec<i64>,
}

impl Plane {
    /// Coordinate axes `a`, `b` of a grid (`u = pos[a]`, `v = pos[b]`).
    pub fn axes(dim: usize, a: usize, b: usize) -> Plane {
        let mut cu = vec![0; dim];
        let mut cv = vec![0; dim];
        cu[a] = 1;
        cv[b] = 1;
        Plane { a, b, a_rev: false, b_rev: false, cu, cv }
    }

    pub fn new(a: usize, b: usize, a_rev: bool, b_rev: bool, cu: Vec<i64>, cv: Vec<i64>) -> Plane {
        Plane { a, b, a_rev, b_rev, cu, cv }
    }

    pub fn uv(&self, g: &LatticeGraph, v: VertexId) -> (i64, i64) {
        let p = g.pos(v);
        let dot = |c: &[i64]| c.iter().zip(p).map(|(a, &x)| a * i64::from(x)).sum::<i64>();
        (dot(&self.cu), dot(&self.cv))
    }

    /// 0 for an `a`-edge, 1 for a `b`-edge.
    pub fn axis_of(&self, g: &LatticeGraph, e: EdgeId) -> Option<usize> {
        let d = g.dir(e);
        if d == self.a {
            Some(0)
        } else if d == self.b {
            Some(1)
        } else {
            None
        }
    }

    /// Endpoint with the smaller pattern coordinate along the edge's axis.
    pub fn pattern_tail(&self, g: &LatticeGraph, e: EdgeId, axis: usize) -> VertexId {
        let (t, h) = g.endpoints(e);
        let rev = if axis == 0 { self.a_rev } else { self.b_rev };
        if rev {
            h
        } else {
            t
        }
    }

    /// Whether `e` lies on a C4 of the class with lower-left corners at
    /// `(u, v) = phase (mod 2)`.
    pub fn in_phase(&self, g: &LatticeGraph, e: EdgeId, phase: (i64, i64)) -> Option<bool> {
        let axis = self.axis_of(g, e)?;
        let (u, v) = self.uv(g, self.pattern_tail(g, e, axis));
        Some(if axis == 0 { (u - phase.0).rem_euclid(2) == 0 } else { (v - phase.1).rem_euclid(2) == 0 })
    }

    /// Phase of C4 number `q` (of 4) through `anchor`.
    pub fn phase_at(&self, g: &LatticeGraph, anchor: VertexId, q: usize) -> (i64, i64) {
        let (u, v) = self.uv(g, anchor);
        ((u - (q & 1) as i64).rem_euclid(2), (v - ((q >> 1) & 1) as i64).rem_euclid(2))
    }

    /// The in-plane edges perpendicular to `e` at its two endpoints.
    pub fn guards(&self, g: &LatticeGraph, e: EdgeId) -> Vec<EdgeId> {
        let Some(axis) = self.axis_of(g, e) else { return Vec::new() };
        let perp = if axis == 0 { self.b } else { self.a };
        let (s, t) = g.endpoints(e);
        let mut out = Vec::with_capacity(4);
        for x in [s, t] {
            for fw in [true, false] {
                if let Some((_, f)) = g.step(x, perp, fw) {
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }
}

/// Colour of an in-plane edge `e` of an inner-pattern cluster.
///
/// Guards whose far endpoint is outside the cluster carry their interface
/// colour `outer(g)`. If one of them disagrees with the inner pattern, `e`
/// takes the other colour of the pair; otherwise it keeps its inner colour.
pub(crate) fn amalgamate(
    plane: &Plane,
    g: &LatticeGraph,
    e: EdgeId,
    inside: impl Fn(VertexId) -> bool,
    inner: impl Fn(EdgeId) -> u8,
    outer: impl Fn(EdgeId) -> u8,
    pair: (u8, u8),
) -> u8 {
    let (s, t) = g.endpoints(e);
    for f in plane.guards(g, e) {
        let far = if g.endpoints(f).0 == s || g.endpoints(f).1 == s { g.other(f, s) } else { g.other(f, t) };
        if inside(far) {
            continue;
        }
        let oc = outer(f);
        if oc != inner(f) {
            return if oc == pair.0 { pair.1 } else { pair.0 };
        }
    }
    inner(e)
}
