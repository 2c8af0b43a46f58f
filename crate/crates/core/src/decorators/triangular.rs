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

//! Triangular lattice: four-coloured hierarchy, straight lines plus C4s on
//! odd clusters, direction patterns on even clusters.

use super::plane::{amalgamate, Plane};
use super::square::check_even_torus;
use super::{finish, Decorated};
use crate::hierarchy::{coloured_hierarchy, ClusterBoundary, HierarchySource, HierarchyTree};
use crate::lattice::{EdgeId, Kind, LatticeGraph, Topology, VertexId, NONE};
use crate::rng::channels::decorators::{TRI_ANCHOR, TRI_BLUE_DIR, TRI_C4, TRI_GROUP_DIR, TRI_IFACE, TRI_SEAM};
use crate::rng::LabelField;
use crate::{Error, Result};
use std::collections::BTreeMap;

pub(crate) const RED: u8 = 0;
pub(crate) const BLUE: u8 = 1;
pub(crate) const GREEN: u8 = 2;

/// The square sublattice left after removing straight direction `s`.
pub(crate) fn tri_plane(s: usize) -> Plane {
    match s {
        2 => Plane::new(0, 1, false, false, vec![1, 0], vec![0, 1]),
        0 => Plane::new(2, 1, false, true, vec![1, 0], vec![1, -1]),
        _ => Plane::new(2, 0, false, true, vec![0, 1], vec![-1, 1]),
    }
}

fn third(a: usize, b: usize) -> usize {
    3 - a - b
}

fn straight_colour(eta: u8) -> u8 {
    if eta == 1 {
        GREEN
    } else {
        BLUE
    }
}

fn pair_for(eta: u8) -> (u8, u8) {
    if eta == 1 {
        (RED, BLUE)
    } else {
        (RED, GREEN)
    }
}

/// Inner pattern of an odd cluster.
#[derive(Clone, Debug)]
struct Inner {
    dir: usize,
    straight: u8,
    pair: (u8, u8),
    phase: (i64, i64),
}

/// Schreier decoration of the triangular lattice with three colours.
pub fn schreier_triangular(g: &LatticeGraph, field: &LabelField, k: usize) -> Result<Decorated> {
    schreier_triangular_using(g, field, HierarchySource::Percolation, k)
}

pub fn schreier_triangular_using(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    k: usize,
) -> Result<Decorated> {
    check(g)?;
    let hb = coloured_hierarchy(g, field, source, 4, k)?;
    schreier_triangular_with(g, field, hb, k)
}

fn check(g: &LatticeGraph) -> Result<()> {
    if g.kind != Kind::Triangular {
        return Err(Error::WrongKind { expected: "triangular", got: g.kind.name().to_string() });
    }
    if g.topology != Topology::Torus {
        return Err(Error::Invalid("the triangular decorator needs a torus window".into()));
    }
    check_even_torus(g)
}

fn union_members(t: &HierarchyTree, cs: &[u32]) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = cs.iter().flat_map(|&c| t.members(c).iter().copied()).collect();
    v.sort_unstable();
    v
}

/// Decorates on a given 4-coloured hierarchy with boundaries.
pub fn schreier_triangular_with(
    g: &LatticeGraph,
    field: &LabelField,
    hb: ClusterBoundary,
    k: usize,
) -> Result<Decorated> {
    check(g)?;
    let t = &hb.tree;
    if t.colours != 4 {
        return Err(Error::Invalid(format!("triangular decorator needs a 4-coloured hierarchy, got {}", t.colours)));
    }
    let nc = t.len();
    let eta = |c: u32| t.eta(c).unwrap_or(1);
    let children = t.children();

    // Directions of 1-clusters, chosen jointly by the 1-clusters sharing a
    // fourth ancestor; the root decides alone.
    let mut dir = vec![usize::MAX; nc];
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for c in 0..nc as u32 {
        if eta(c) == 1 {
            let key = if t.is_root(c) { ROOT_GROUP } else { t.ancestor(c, 4).ok_or_else(|| broken(t, c))? };
            groups.entry(key).or_default().push(c);
        }
    }
    let mut group_dir: BTreeMap<u32, usize> = BTreeMap::new();
    for (&key, cs) in &groups {
        let d = field.choose(&union_members(t, cs), TRI_GROUP_DIR, 3)?;
        group_dir.insert(key, d);
        for &c in cs {
            dir[c as usize] = d;
        }
    }
    // 3-clusters sharing a grandparent z choose together, avoiding z's
    // direction and the direction of the 1-clusters four levels below z.
    let mut blue_groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for c in 0..nc as u32 {
        if eta(c) == 3 {
            let z = t.ancestor(c, 2).ok_or_else(|| broken(t, c))?;
            blue_groups.entry(z).or_default().push(c);
        }
    }
    for (&z, cs) in &blue_groups {
        let b = dir[z as usize];
        let d = match group_dir.get(&z) {
            Some(&a) if a != b => third(a, b),
            _ => {
                let opts: Vec<usize> = (0..3).filter(|&x| x != b).collect();
                opts[field.choose(&union_members(t, cs), TRI_BLUE_DIR, 2)?]
            }
        };
        for &c in cs {
            dir[c as usize] = d;
        }
    }

    let mut inner: Vec<Option<Inner>> = vec![None; nc];
    for c in 0..nc as u32 {
        let e = eta(c);
        if e % 2 == 1 {
            let plane = tri_plane(dir[c as usize]);
            let members = t.members(c);
            let anchor = field.argmax(members, TRI_ANCHOR)?;
            let phase = plane.phase_at(g, anchor, field.choose(members, TRI_C4, 4)?);
            inner[c as usize] =
                Some(Inner { dir: dir[c as usize], straight: straight_colour(e), pair: pair_for(e), phase });
        }
    }

    // Interface patterns: colour per direction.
    let mut iface = vec![[0u8; 3]; nc];
    for c in 0..nc as u32 {
        let e = eta(c);
        if e % 2 == 1 {
            continue;
        }
        let p = t.parent(c).expect("even clusters are not the root");
        let pd = dir[p as usize];
        let pcol = straight_colour(eta(p));
        let ccol = if e == 2 { GREEN } else { BLUE };
        let mut map = [0u8; 3];
        map[pd] = pcol;
        match children[c as usize].first() {
            Some(&ch) => {
                let cd = dir[ch as usize];
                if cd == pd {
                    return Err(Error::Invalid(format!("cluster {c}: parent and children share a direction")));
                }
                map[cd] = ccol;
                map[third(pd, cd)] = RED;
            }
            None => {
                let rest: Vec<usize> = (0..3).filter(|&x| x != pd).collect();
                let flip = field.choose(t.members(c), TRI_IFACE, 2)? == 1;
                let (d0, d1) = if flip { (rest[1], rest[0]) } else { (rest[0], rest[1]) };
                map[d0] = ccol;
                map[d1] = RED;
            }
        }
        iface[c as usize] = map;
    }

    let is_even = |c: u32| eta(c) % 2 == 0;
    let inner_colour = |c: u32, e: EdgeId| -> u8 {
        let p = inner[c as usize].as_ref().expect("odd cluster");
        if g.dir(e) == p.dir {
            p.straight
        } else if tri_plane(p.dir).in_phase(g, e, p.phase).unwrap_or(false) {
            p.pair.0
        } else {
            p.pair.1
        }
    };
    let outer = |f: EdgeId| {
        let (a, b) = g.endpoints(f);
        let c = if is_even(t.cluster_of(a)) { t.cluster_of(a) } else { t.cluster_of(b) };
        iface[c as usize][g.dir(f)]
    };
    let mut colour = vec![0u8; g.m()];
    for e in 0..g.m() as EdgeId {
        let (u, v) = g.endpoints(e);
        let (cu, cv) = (t.cluster_of(u), t.cluster_of(v));
        colour[e as usize] = if is_even(cu) {
            iface[cu as usize][g.dir(e)]
        } else if is_even(cv) {
            iface[cv as usize][g.dir(e)]
        } else {
            let p = inner[cu as usize].as_ref().expect("odd cluster");
            if g.dir(e) == p.dir {
                p.straight
            } else {
                amalgamate(&tri_plane(p.dir), g, e, |x| t.cluster_of(x) == cu, |f| inner_colour(cu, f), outer, p.pair)
            }
        };
    }

    let root = t.root();
    let rp = inner[root as usize].clone().expect("root is odd");
    let seam_row = apply_seam(g, t, field, &rp, &mut colour)?;

    let reroute_bad = reroute_violations(g, &hb, &dir, &|c| eta(c));
    let mut out = finish(g, &colour, 3, field, k)?;
    out.stat("clusters", nc as f64);
    out.stat("seam_row", seam_row as f64);
    out.stat("reroute_violations", reroute_bad as f64);
    out.stat("even_clusters", (0..nc as u32).filter(|&c| is_even(c)).count() as f64);
    out.hierarchy = Some(hb);
    Ok(out)
}

const ROOT_GROUP: u32 = u32::MAX;

fn broken(t: &HierarchyTree, c: u32) -> Error {
    Error::Invalid(format!("cluster {c}: colour chain of the hierarchy is broken (spacing {:?})", t.spacing))
}

/// Recolours two rows of the root so that its straight lines close up in
/// pairs. Returns the chosen row.
///
/// In pattern coordinates with the root's phase at the origin, on rows 0
/// and 1: straight edges leaving row 0 and `b`-edges leaving row 0 take the
/// first and second C4 colour; `a`-edges of row 0 take the straight colour
/// at even `u` and the first C4 colour at odd `u`; `a`-edges of row 1 take
/// the straight colour at odd `u`.
fn apply_seam(g: &LatticeGraph, t: &HierarchyTree, field: &LabelField, p: &Inner, colour: &mut [u8]) -> Result<i64> {
    let plane = tri_plane(p.dir);
    let (w, h) = (g.dims[0] as i64, g.dims[1] as i64);
    let period = if p.dir == 2 { h } else { gcd(w, h) };
    if period < 4 {
        return Err(Error::SeamBlocked);
    }
    let root = t.root();
    let others: Vec<VertexId> = (0..g.n() as VertexId).filter(|&v| t.cluster_of(v) != root).collect();
    let near = g.bfs(&others, 2);
    let row = |v: VertexId| plane.uv(g, v).1.rem_euclid(period);
    let mut blocked = vec![false; period as usize];
    let mut rows: Vec<Vec<VertexId>> = vec![Vec::new(); period as usize];
    for v in 0..g.n() as VertexId {
        let r = row(v);
        rows[r as usize].push(v);
        if near[v as usize] != u32::MAX {
            blocked[r as usize] = true;
        }
    }
    let mut best: Option<(u64, i64)> = None;
    for v0 in (0..period).filter(|r| (r - p.phase.1).rem_euclid(2) == 0) {
        if (-1..=2).any(|d| blocked[(v0 + d).rem_euclid(period) as usize]) {
            continue;
        }
        let score = field.joint_label(&rows[v0 as usize], TRI_SEAM)?;
        if best.is_none_or(|b| (score, v0) > b) {
            best = Some((score, v0));
        }
    }
    let Some((_, v0)) = best else { return Err(Error::SeamBlocked) };
    for e in 0..g.m() as EdgeId {
        let d = g.dir(e);
        let tail = match plane.axis_of(g, e) {
            Some(axis) => plane.pattern_tail(g, e, axis),
            None => g.endpoints(e).0,
        };
        let (u, v) = plane.uv(g, tail);
        let rel = (v - v0).rem_euclid(period);
        let odd = (u - p.phase.0).rem_euclid(2) == 1;
        let c = &mut colour[e as usize];
        if d == p.dir {
            if rel == 0 {
                *c = p.pair.0;
            }
        } else if plane.axis_of(g, e) == Some(1) {
            if rel == 0 {
                *c = p.pair.1;
            }
        } else if rel == 0 {
            *c = if odd { p.pair.0 } else { p.straight };
        } else if rel == 1 && odd {
            *c = p.straight;
        }
    }
    Ok(v0)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reroutes every boundary edge of an even cluster that runs in its
/// parent's straight direction around the triangle on the parent's side,
/// and counts rerouted edges that still use that direction.
fn reroute_violations(g: &LatticeGraph, hb: &ClusterBoundary, dir: &[usize], eta: &dyn Fn(u32) -> u8) -> usize {
    let t = &hb.tree;
    let mut bad = 0;
    for (c, es) in hb.edges.iter().enumerate() {
        let c = c as u32;
        let Some(p) = t.parent(c) else { continue };
        if eta(c) % 2 == 1 {
            continue;
        }
        let pd = dir[p as usize];
        for &e in es {
            if g.dir(e) != pd {
                continue;
            }
            let (u, v) = g.endpoints(e);
            let side = (0..2).find(|&s| hb.side_owner(g, e, s) == Some(p));
            let Some(f) = side.map(|s| g.edge_faces(e)[s]).filter(|&f| f != NONE) else { continue };
            let face = &g.faces()[f as usize];
            let Some(&x) = face.verts.iter().find(|&&x| x != u && x != v) else { continue };
            for (a, b) in [(u, x), (x, v)] {
                match g.edge_between(a, b) {
                    Some(r) if g.dir(r) != pd => {}
                    _ => bad += 1,
                }
            }
        }
    }
    bad
}
