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

//! Exact checkers and the monochromatic-component census.

mod census;
mod enumerate;
mod hierarchy_check;
mod locality;
mod parity;
mod report;

pub use census::{monochrome_components, Census, Component, ComponentKind};
pub use enumerate::{enumerate_balanced_orientations, enumerate_sharded, EnumerationSummary, MAX_EDGES};
pub use hierarchy_check::{
    check_boundary, check_hierarchy, derive_parents, grandparent_distances, min_unrelated_distance, spacing_violation,
};
pub use locality::{locality_probe, Probe};
pub use parity::{parity_invariant, ParityInvariant};
pub use report::{Check, Report, Witness};

use crate::decorators::{Decoration, Orientation, UNDECORATED};
use crate::derived::{EdgeColouring, Matching};
use crate::lattice::{LatticeGraph, VertexId};

/// Per-vertex audit: exactly one in- and one out-edge of every colour.
///
/// With `mask`, only vertices marked `true` are audited.
pub fn check_schreier_masked(g: &LatticeGraph, dec: &Decoration, mask: Option<&[bool]>) -> Report {
    let mut r = Report::default();
    let d = dec.d;
    if dec.colour.len() != g.m() || dec.head.len() != g.m() {
        r.fail("schreier", "decoration size does not match the graph", Witness::default());
        return r;
    }
    let mut bad_edge = None;
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        let h = dec.head[e as usize];
        let c = dec.colour[e as usize];
        if (c as usize >= d && c != UNDECORATED) || (h != u && h != v) {
            bad_edge = Some(e);
            break;
        }
    }
    if let Some(e) = bad_edge {
        r.fail("schreier", "edge has an invalid colour or head", Witness::edges(vec![e]));
        return r;
    }
    let mut inc = vec![0u32; d];
    let mut out = vec![0u32; d];
    let mut audited = 0usize;
    for v in 0..g.n() as VertexId {
        if let Some(m) = mask {
            if !m[v as usize] {
                continue;
            }
        }
        audited += 1;
        inc.iter_mut().for_each(|x| *x = 0);
        out.iter_mut().for_each(|x| *x = 0);
        let mut undecorated = false;
        for &(_, e) in g.neighbors(v) {
            let c = dec.colour[e as usize];
            if c == UNDECORATED {
                undecorated = true;
                continue;
            }
            if dec.head[e as usize] == v {
                inc[c as usize] += 1;
            } else {
                out[c as usize] += 1;
            }
        }
        let ok = !undecorated && inc.iter().chain(&out).all(|&x| x == 1) && g.deg(v) == 2 * d;
        if !ok {
            let es = g.neighbors(v).iter().map(|&(_, e)| e).collect();
            r.fail(
                "schreier",
                &format!("vertex {v}: in {inc:?} out {out:?} undecorated {undecorated}"),
                Witness { vertices: vec![v], edges: es, clusters: vec![] },
            );
            return r;
        }
    }
    r.pass("schreier", &format!("{audited} vertices, d = {d}"));
    r
}

pub fn check_schreier(g: &LatticeGraph, dec: &Decoration) -> Report {
    check_schreier_masked(g, dec, None)
}

/// Indegree equals outdegree everywhere (or on `mask`).
pub fn check_balanced_masked(g: &LatticeGraph, or: &Orientation, mask: Option<&[bool]>) -> Report {
    let mut r = Report::default();
    if or.head.len() != g.m() {
        r.fail("balanced", "orientation size does not match the graph", Witness::default());
        return r;
    }
    let mut bal = vec![0i64; g.n()];
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        let h = or.head[e as usize];
        if h != u && h != v {
            r.fail("balanced", "head is not an endpoint", Witness::edges(vec![e]));
            return r;
        }
        let t = if h == u { v } else { u };
        bal[h as usize] += 1;
        bal[t as usize] -= 1;
    }
    let bad: Vec<VertexId> =
        (0..g.n() as VertexId).filter(|&v| mask.is_none_or(|m| m[v as usize]) && bal[v as usize] != 0).collect();
    if bad.is_empty() {
        r.pass("balanced", &format!("{} vertices", g.n()));
    } else {
        r.fail("balanced", &format!("{} unbalanced vertices, first {}", bad.len(), bad[0]), Witness::vertices(bad));
    }
    r
}

pub fn check_balanced(g: &LatticeGraph, or: &Orientation) -> Report {
    check_balanced_masked(g, or, None)
}

/// No two incident edges share a colour, and every edge is coloured.
pub fn check_proper(g: &LatticeGraph, ec: &EdgeColouring) -> Report {
    let mut r = Report::default();
    if ec.colour.len() != g.m() {
        r.fail("proper", "colouring size does not match the graph", Witness::default());
        return r;
    }
    for v in 0..g.n() as VertexId {
        let mut seen = vec![u32::MAX; ec.colours + 1];
        for &(_, e) in g.neighbors(v) {
            let c = ec.colour[e as usize] as usize;
            if c == 0 || c > ec.colours {
                r.fail("proper", &format!("edge {e} uncoloured or out of range"), Witness::edges(vec![e]));
                return r;
            }
            if seen[c] != u32::MAX {
                r.fail(
                    "proper",
                    &format!("vertex {v} sees colour {c} twice"),
                    Witness { vertices: vec![v], edges: vec![seen[c], e], clusters: vec![] },
                );
                return r;
            }
            seen[c] = e;
        }
    }
    r.pass("proper", &format!("{} colours", ec.colours));
    r
}

/// Every vertex covered exactly once.
pub fn check_matching(g: &LatticeGraph, m: &Matching) -> Report {
    let mut r = Report::default();
    let mut cover = vec![0u32; g.n()];
    for &e in &m.edges {
        if e as usize >= g.m() {
            r.fail("matching", "edge id out of range", Witness::edges(vec![e]));
            return r;
        }
        let (u, v) = g.endpoints(e);
        cover[u as usize] += 1;
        cover[v as usize] += 1;
    }
    match cover.iter().position(|&c| c != 1) {
        None => r.pass("matching", &format!("{} edges", m.edges.len())),
        Some(v) => r.fail(
            "matching",
            &format!("vertex {v} covered {} times", cover[v]),
            Witness::vertices(vec![v as VertexId]),
        ),
    }
    r
}
