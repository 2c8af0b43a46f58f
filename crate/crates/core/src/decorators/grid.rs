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

//! Grids `Z^d`, `d >= 3`: interface patterns (direction/colour bijections)
//! on even clusters, straight lines plus one C4 plane on odd clusters.

use super::plane::{amalgamate, Plane};
use super::square::{check_even_torus, schreier_square_using};
use super::{finish, Decorated};
use crate::bipartite::{max_matching, FREE};
use crate::hierarchy::{coloured_tree, HierarchySource, HierarchyTree};
use crate::lattice::{EdgeId, Kind, LatticeGraph, Topology, VertexId};
use crate::rng::channels::decorators::{GRID_ANCHOR, GRID_C4, GRID_GROUP, GRID_PAIR, GRID_SEAM};
use crate::rng::LabelField;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// `perm[direction] = colour`.
pub type Pattern = Vec<u8>;

const ROOT_GROUP: u32 = u32::MAX;

/// Permutation number `idx` of `0..d` (Lehmer code).
fn nth_permutation(d: usize, mut idx: usize) -> Pattern {
    let mut pool: Vec<u8> = (0..d as u8).collect();
    let mut out = Vec::with_capacity(d);
    for i in (1..=d).rev() {
        let f: usize = (1..i).product();
        out.push(pool.remove(idx / f));
        idx %= f;
    }
    out
}

fn direction_of(p: &[u8], colour: u8) -> usize {
    p.iter().position(|&c| c == colour).expect("pattern is a bijection")
}

/// Makes colours `0..i` travel in the same directions as in `above`, one
/// transposition per colour.
pub fn align_pattern(mut p: Pattern, above: &[u8], i: usize) -> Pattern {
    for c in 0..i as u8 {
        let want = direction_of(above, c);
        let have = direction_of(&p, c);
        if want != have {
            p.swap(want, have);
        }
    }
    p
}

/// Colours on which two patterns disagree.
fn disagreement(p: &[u8], q: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = p.iter().zip(q).filter(|(a, b)| a != b).map(|(&a, _)| a).collect();
    out.sort_unstable();
    out
}

/// Inner pattern of an odd cluster.
#[derive(Clone, Debug)]
pub struct GridInner {
    /// Colour per direction for the straight directions; the two plane
    /// directions hold their interface colours.
    pub pattern: Pattern,
    pub plane: (usize, usize),
    pub pair: (u8, u8),
    pub phase: (i64, i64),
}

fn check(g: &LatticeGraph) -> Result<()> {
    if g.kind != Kind::GridD {
        return Err(Error::WrongKind { expected: "grid_d", got: g.kind.name().to_string() });
    }
    if g.topology != Topology::Torus {
        return Err(Error::Invalid("the grid decorator needs a torus window".into()));
    }
    check_even_torus(g)
}

/// Schreier decoration of `Z^d` with `d` colours on a toast hierarchy.
/// For `d = 2` this is the square decorator.
pub fn schreier_grid_d(g: &LatticeGraph, field: &LabelField, k: usize) -> Result<Decorated> {
    check(g)?;
    let d = g.dims.len();
    if d == 2 {
        return schreier_square_using(g, field, HierarchySource::Toast, k);
    }
    let t = coloured_tree(g, field, HierarchySource::Toast, 2 * d - 2, k)?;
    schreier_grid_d_with(g, field, t, k)
}

fn union_members(t: &HierarchyTree, cs: &[u32]) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = cs.iter().flat_map(|&c| t.members(c).iter().copied()).collect();
    v.sort_unstable();
    v
}

fn broken(t: &HierarchyTree, c: u32) -> Error {
    Error::Invalid(format!("cluster {c}: colour chain of the hierarchy is broken (spacing {:?})", t.spacing))
}

/// Interface patterns of the even clusters.
pub fn interface_patterns(t: &HierarchyTree, field: &LabelField, d: usize) -> Result<Vec<Option<Pattern>>> {
    let c = (2 * d - 2) as u8;
    let nc = t.len();
    let eta = |x: u32| t.eta(x).unwrap_or(1);
    let fact: usize = (1..=d).product();
    // Top-numbered clusters choose jointly with all top-numbered clusters
    // sharing their top-numbered ancestor.
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for x in 0..nc as u32 {
        if eta(x) == c && !t.is_root(x) {
            let key = t.ancestor(x, 2 * d - 2).unwrap_or(ROOT_GROUP);
            groups.entry(key).or_default().push(x);
        }
    }
    let mut group_pattern: BTreeMap<u32, Pattern> = BTreeMap::new();
    let mut pattern: Vec<Option<Pattern>> = vec![None; nc];
    for (&key, cs) in &groups {
        let p = nth_permutation(d, field.choose(&union_members(t, cs), GRID_GROUP, fact)?);
        for &x in cs {
            pattern[x as usize] = Some(p.clone());
        }
        group_pattern.insert(key, p);
    }
    for x in 0..nc as u32 {
        let e = eta(x);
        if e % 2 == 1 || e == c {
            continue;
        }
        let i = (e / 2) as usize;
        let above = t.ancestor(x, (c - e) as usize).ok_or_else(|| broken(t, x))?;
        let pa = pattern[above as usize].clone().ok_or_else(|| broken(t, x))?;
        pattern[x as usize] = Some(match group_pattern.get(&above) {
            Some(q) => align_pattern(q.clone(), &pa, i),
            None => pa,
        });
    }
    Ok(pattern)
}

/// Inner patterns of the odd clusters.
pub fn inner_patterns(
    g: &LatticeGraph,
    t: &HierarchyTree,
    field: &LabelField,
    iface: &[Option<Pattern>],
) -> Result<Vec<Option<GridInner>>> {
    let d = g.dims.len();
    let nc = t.len();
    let children = t.children();
    let fact: usize = (1..=d).product();
    let pairs: Vec<(u8, u8)> = (0..d as u8).flat_map(|a| (a + 1..d as u8).map(move |b| (a, b))).collect();
    let mut out = vec![None; nc];
    for x in 0..nc as u32 {
        if t.eta(x).unwrap_or(1).is_multiple_of(2) {
            continue;
        }
        let members = t.members(x);
        let up = t.parent(x).map(|p| iface[p as usize].clone().ok_or_else(|| broken(t, x))).transpose()?;
        let mut down: Option<Pattern> = None;
        for &ch in &children[x as usize] {
            let q = iface[ch as usize].clone().ok_or_else(|| broken(t, ch))?;
            match &down {
                Some(p) if *p != q => {
                    return Err(Error::Invalid(format!("cluster {x}: children disagree on their interface pattern")))
                }
                _ => down = Some(q),
            }
        }
        let base = match (&up, &down) {
            (Some(p), _) => p.clone(),
            (None, Some(q)) => q.clone(),
            (None, None) => nth_permutation(d, field.choose(members, GRID_GROUP, fact)?),
        };
        let pair = match (&up, &down) {
            (Some(p), Some(q)) if p != q => {
                let diff = disagreement(p, q);
                if diff.len() != 2 {
                    return Err(Error::Invalid(format!(
                        "cluster {x}: parent and child patterns differ in {} colours",
                        diff.len()
                    )));
                }
                (diff[0], diff[1])
            }
            _ => pairs[field.choose(members, GRID_PAIR, pairs.len())?],
        };
        let plane = (direction_of(&base, pair.0), direction_of(&base, pair.1));
        let pl = Plane::axes(d, plane.0, plane.1);
        let anchor = field.argmax(members, GRID_ANCHOR)?;
        let phase = pl.phase_at(g, anchor, field.choose(members, GRID_C4, 4)?);
        out[x as usize] = Some(GridInner { pattern: base, plane, pair, phase });
    }
    Ok(out)
}

/// Edge colouring before the seam.
pub fn grid_colouring(
    g: &LatticeGraph,
    t: &HierarchyTree,
    iface: &[Option<Pattern>],
    inner: &[Option<GridInner>],
) -> Vec<u8> {
    let d = g.dims.len();
    let even = |v: VertexId| iface[t.cluster_of(v) as usize].as_ref();
    let inner_colour = |p: &GridInner, pl: &Plane, e: EdgeId| {
        if pl.in_phase(g, e, p.phase).unwrap_or(false) {
            p.pair.0
        } else {
            p.pair.1
        }
    };
    let outer = |f: EdgeId| {
        let (a, b) = g.endpoints(f);
        let p = even(a).or(even(b)).expect("guard reaches an even cluster");
        p[g.dir(f)]
    };
    let mut colour = vec![0u8; g.m()];
    for e in 0..g.m() as EdgeId {
        let (u, v) = g.endpoints(e);
        let dir = g.dir(e);
        colour[e as usize] = if let Some(p) = even(u).or(even(v)) {
            p[dir]
        } else {
            let c = t.cluster_of(u);
            let p = inner[c as usize].as_ref().expect("odd cluster");
            if dir != p.plane.0 && dir != p.plane.1 {
                p.pattern[dir]
            } else {
                let pl = Plane::axes(d, p.plane.0, p.plane.1);
                amalgamate(&pl, g, e, |x| t.cluster_of(x) == c, |f| inner_colour(p, &pl, f), outer, p.pair)
            }
        };
    }
    colour
}

/// Decorates on a given `(2d-2)`-coloured hierarchy.
pub fn schreier_grid_d_with(g: &LatticeGraph, field: &LabelField, t: HierarchyTree, k: usize) -> Result<Decorated> {
    check(g)?;
    let d = g.dims.len();
    if t.colours != 2 * d - 2 {
        return Err(Error::Invalid(format!(
            "grid decorator needs a {}-coloured hierarchy, got {}",
            2 * d - 2,
            t.colours
        )));
    }
    let iface = interface_patterns(&t, field, d)?;
    let inner = inner_patterns(g, &t, field, &iface)?;
    let mut colour = grid_colouring(g, &t, &iface, &inner);
    let seams = kempe_seam(g, &t, field, &inner, &mut colour)?;
    let mut out = finish(g, &colour, d, field, k)?;
    out.stat("clusters", t.len() as f64);
    out.stat("seam_swaps", seams as f64);
    out.stat("even_clusters", iface.iter().filter(|p| p.is_some()).count() as f64);
    out.tree = Some(t);
    Ok(out)
}

/// Pairs up the root's wrapping straight lines.
///
/// For every straight colour `s` of the root, the wrapping `s`-components
/// must be straight lines. Lines adjacent along a plane axis are matched;
/// each matched pair swaps its two `s` edges at some layer with the two
/// rungs joining them (equal C4 colour), which keeps every vertex balanced
/// and closes the two lines into one contractible cycle.
fn kempe_seam(
    g: &LatticeGraph,
    t: &HierarchyTree,
    field: &LabelField,
    inner: &[Option<GridInner>],
    colour: &mut [u8],
) -> Result<usize> {
    let root = t.root();
    let p = inner[root as usize].as_ref().expect("root is odd");
    let d = g.dims.len();
    let mut swaps = 0;
    for dir in (0..d).filter(|&x| x != p.plane.0 && x != p.plane.1) {
        swaps += seam_colour(g, t, field, p, dir, colour)?;
    }
    Ok(swaps)
}

struct Site {
    score: u64,
    edges: [EdgeId; 2],
    rungs: [EdgeId; 2],
}

fn seam_colour(
    g: &LatticeGraph,
    t: &HierarchyTree,
    field: &LabelField,
    p: &GridInner,
    dir: usize,
    colour: &mut [u8],
) -> Result<usize> {
    let s = p.pattern[dir];
    let dec = super::Decoration {
        d: g.dims.len(),
        colour: colour.to_vec(),
        head: (0..g.m() as EdgeId).map(|e| g.endpoints(e).1).collect(),
    };
    let census = crate::verify::monochrome_components(g, &dec);
    let mut line_of = vec![u32::MAX; g.n()];
    let mut lines: Vec<Vec<VertexId>> = Vec::new();
    for comp in census.components.iter().filter(|c| c.colour == s && !c.contractible()) {
        if comp.edges.iter().any(|&e| g.dir(e) != dir) {
            return Err(Error::SeamBlocked);
        }
        let id = lines.len() as u32;
        let mut vs: Vec<VertexId> = comp.edges.iter().map(|&e| g.endpoints(e).0).collect();
        vs.sort_unstable();
        for &v in &vs {
            line_of[v as usize] = id;
        }
        lines.push(vs);
    }
    if lines.is_empty() {
        return Ok(0);
    }
    let root = t.root();
    let in_root = |v: VertexId| t.cluster_of(v) == root;
    let side = |l: usize| {
        let x = g.pos(lines[l][0]);
        ((x[p.plane.0] + x[p.plane.1]).rem_euclid(2)) as usize
    };
    // Candidate partners of each line, with the best swap site.
    let mut cand: Vec<Vec<(u32, Site)>> = (0..lines.len()).map(|_| Vec::new()).collect();
    for (l, vs) in lines.iter().enumerate() {
        for axis in [p.plane.0, p.plane.1] {
            for fw in [true, false] {
                let mut best: Option<(u32, Site)> = None;
                for &v in vs {
                    let Some((w, r1)) = g.step(v, axis, fw) else { continue };
                    let m = line_of[w as usize];
                    if m == u32::MAX || m as usize == l {
                        continue;
                    }
                    let (Some((v2, e1)), Some((w2, e2))) = (g.step(v, dir, true), g.step(w, dir, true)) else {
                        continue;
                    };
                    let Some(r2) = g.edge_between(v2, w2) else { continue };
                    let q = colour[r1 as usize];
                    if q != colour[r2 as usize] || (q != p.pair.0 && q != p.pair.1) {
                        continue;
                    }
                    if ![v, w, v2, w2].iter().all(|&x| in_root(x)) {
                        continue;
                    }
                    let score = field.label(v.min(w), GRID_SEAM);
                    if best.as_ref().is_none_or(|(_, b)| score > b.score) {
                        best = Some((m, Site { score, edges: [e1, e2], rungs: [r1, r2] }));
                    }
                }
                if let Some(b) = best {
                    cand[l].push(b);
                }
            }
        }
    }
    let left: Vec<usize> = (0..lines.len()).filter(|&l| side(l) == 0).collect();
    let adj: Vec<Vec<u32>> = left.iter().map(|&l| cand[l].iter().map(|(m, _)| *m).collect()).collect();
    let mates = max_matching(&adj, lines.len());
    if 2 * left.len() != lines.len() || mates.contains(&FREE) {
        return Err(Error::SeamBlocked);
    }
    let mut swaps = 0;
    for (&l, &m) in left.iter().zip(&mates) {
        let site = &cand[l].iter().find(|(x, _)| *x == m).expect("matched along a candidate").1;
        let q = colour[site.rungs[0] as usize];
        for &e in &site.edges {
            colour[e as usize] = q;
        }
        for &r in &site.rungs {
            colour[r as usize] = s;
        }
        swaps += 1;
    }
    Ok(swaps)
}
