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

//! Square lattice: inner C4 patterns on 1-clusters, direction patterns on
//! 2-clusters, guard amalgamation at the interfaces.

use super::plane::{amalgamate, Plane};
use super::{finish, Decorated};
use crate::hierarchy::{coloured_hierarchy, ClusterBoundary, HierarchySource};
use crate::lattice::{EdgeId, Kind, LatticeGraph, Topology};
use crate::rng::channels::decorators::{SQ_ANCHOR, SQ_C4, SQ_IFACE};
use crate::rng::LabelField;
use crate::{Error, Result};

const RED: u8 = 0;
const BLUE: u8 = 1;

/// The four edges perpendicular to `e` at its endpoints.
pub fn guards(g: &LatticeGraph, e: EdgeId) -> Result<Vec<EdgeId>> {
    check_kind(g)?;
    Ok(Plane::axes(2, 0, 1).guards(g, e))
}

fn check_kind(g: &LatticeGraph) -> Result<()> {
    let square = g.kind == Kind::Square || (g.kind == Kind::GridD && g.dims.len() == 2);
    if !square {
        return Err(Error::WrongKind { expected: "square", got: g.kind.name().to_string() });
    }
    Ok(())
}

pub(crate) fn check_even_torus(g: &LatticeGraph) -> Result<()> {
    if g.topology == Topology::Torus && g.dims.iter().any(|&s| s % 2 != 0) {
        return Err(Error::UnsupportedDims(format!("{:?}: torus sides must be even", g.dims)));
    }
    Ok(())
}

/// Schreier decoration of the square lattice with two colours.
pub fn schreier_square(g: &LatticeGraph, field: &LabelField, k: usize) -> Result<Decorated> {
    schreier_square_using(g, field, HierarchySource::Percolation, k)
}

pub fn schreier_square_using(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    k: usize,
) -> Result<Decorated> {
    check_kind(g)?;
    check_even_torus(g)?;
    let hb = coloured_hierarchy(g, field, source, 2, k)?;
    schreier_square_with(g, field, hb, k)
}

/// Decorates `g` on a given 2-coloured hierarchy with boundaries.
pub fn schreier_square_with(g: &LatticeGraph, field: &LabelField, hb: ClusterBoundary, k: usize) -> Result<Decorated> {
    check_kind(g)?;
    check_even_torus(g)?;
    let t = &hb.tree;
    if t.colours != 2 {
        return Err(Error::Invalid(format!("square decorator needs a 2-coloured hierarchy, got {}", t.colours)));
    }
    let plane = Plane::axes(2, 0, 1);
    let nc = t.len();
    let mut phase = vec![(0i64, 0i64); nc];
    let mut iface = vec![0u8; nc];
    for c in 0..nc as u32 {
        let members = t.members(c);
        if t.eta(c) == Some(1) {
            let anchor = field.argmax(members, SQ_ANCHOR)?;
            phase[c as usize] = plane.phase_at(g, anchor, field.choose(members, SQ_C4, 4)?);
        } else {
            iface[c as usize] = field.choose(members, SQ_IFACE, 2)? as u8;
        }
    }
    let is_iface = |c: u32| t.eta(c) == Some(2);
    let inner = |c: u32, e: EdgeId| if plane.in_phase(g, e, phase[c as usize]).unwrap_or(false) { RED } else { BLUE };
    let iface_colour = |c: u32, e: EdgeId| {
        let horizontal_red = iface[c as usize] == 0;
        if (g.dir(e) == 0) == horizontal_red {
            RED
        } else {
            BLUE
        }
    };
    let outer = |f: EdgeId| {
        let (a, b) = g.endpoints(f);
        let c = if is_iface(t.cluster_of(a)) { t.cluster_of(a) } else { t.cluster_of(b) };
        iface_colour(c, f)
    };
    let mut colour = vec![0u8; g.m()];
    for e in 0..g.m() as EdgeId {
        let (u, v) = g.endpoints(e);
        let (cu, cv) = (t.cluster_of(u), t.cluster_of(v));
        colour[e as usize] = if is_iface(cu) {
            iface_colour(cu, e)
        } else if is_iface(cv) {
            iface_colour(cv, e)
        } else {
            amalgamate(&plane, g, e, |x| t.cluster_of(x) == cu, |f| inner(cu, f), outer, (RED, BLUE))
        };
    }
    let mut parity_bad = 0usize;
    let mut recoloured_vertices = 0usize;
    for v in 0..g.n() as u32 {
        let c = t.cluster_of(v);
        if is_iface(c) {
            continue;
        }
        let r = g.neighbors(v).iter().filter(|&&(_, e)| colour[e as usize] != inner(c, e)).count();
        if r != 0 {
            recoloured_vertices += 1;
        }
        if r != 0 && r != 2 {
            parity_bad += 1;
        }
    }
    let mut out = finish(g, &colour, 2, field, k)?;
    out.stat("recolour_parity_violations", parity_bad as f64);
    out.stat("recoloured_vertices", recoloured_vertices as f64);
    out.stat("clusters", nc as f64);
    out.hierarchy = Some(hb);
    Ok(out)
}
