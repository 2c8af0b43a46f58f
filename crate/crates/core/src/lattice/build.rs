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

//! Generators for the Archimedean windows, Z^d grids and helper lattices.
//!
//! Fundamental domains (unit edge length unless stated):
//!
//! * square: one vertex, a1 = (1, 0), a2 = (0, 1).
//! * triangular: one vertex, a1 = (1, 0), a2 = (-1/2, sqrt3/2); neighbours
//!   along a1, a2 and a1 + a2 (directions 0, 1, 2).
//! * kagome: a1 = (2, 0), a2 = (1, sqrt3); vertices (0, 0), (1, 0),
//!   (1/2, sqrt3/2). Up triangle inside the cell, down triangle on
//!   cell.1, (cell + a1).0, (cell + a1 - a2).2.
//! * t3464: a1 = (1 + sqrt3)(cos 30, sin 30), a2 = (0, 1 + sqrt3); a unit
//!   hexagon with vertices at angles 0, 60, .., 300, joined to the hexagons
//!   of the cells at +a1, +a2 and a2 - a1 by squares.
//! * hexagonal: a1 = (sqrt3, 0), a2 = (sqrt3/2, 3/2); vertices A and B at
//!   +-(sqrt3/4, 1/4). Edge classes are numbered so that the line graph
//!   matches the kagome numbering.

use super::{Kind, LatticeGraph, Raw, Topology, VertexId, NO_SLOT};
use crate::{Error, Result};

struct CellEdge {
    from: u8,
    off: [i32; 2],
    to: u8,
    dir: u8,
}

struct CellSpec {
    a1: [f64; 2],
    a2: [f64; 2],
    subs: Vec<[f64; 2]>,
    edges: Vec<CellEdge>,
    bravais: bool,
}

fn ce(from: u8, off: [i32; 2], to: u8, dir: u8) -> CellEdge {
    CellEdge { from, off, to, dir }
}

fn spec_for(kind: Kind) -> Option<(CellSpec, usize, usize)> {
    let s3 = 3f64.sqrt();
    let spec = match kind {
        Kind::Square => (
            CellSpec {
                a1: [1.0, 0.0],
                a2: [0.0, 1.0],
                subs: vec![[0.0, 0.0]],
                edges: vec![ce(0, [1, 0], 0, 0), ce(0, [0, 1], 0, 1)],
                bravais: true,
            },
            4,
            2,
        ),
        Kind::Triangular => (
            CellSpec {
                a1: [1.0, 0.0],
                a2: [-0.5, s3 / 2.0],
                subs: vec![[0.0, 0.0]],
                edges: vec![ce(0, [1, 0], 0, 0), ce(0, [0, 1], 0, 1), ce(0, [1, 1], 0, 2)],
                bravais: true,
            },
            6,
            3,
        ),
        Kind::SquareDiag => (
            CellSpec {
                a1: [1.0, 0.0],
                a2: [0.0, 1.0],
                subs: vec![[0.0, 0.0]],
                edges: vec![ce(0, [1, 0], 0, 0), ce(0, [0, 1], 0, 1), ce(0, [1, 1], 0, 2), ce(0, [1, -1], 0, 3)],
                bravais: true,
            },
            8,
            4,
        ),
        Kind::Kagome => (
            CellSpec {
                a1: [2.0, 0.0],
                a2: [1.0, s3],
                subs: vec![[0.0, 0.0], [1.0, 0.0], [0.5, s3 / 2.0]],
                edges: vec![
                    ce(0, [0, 0], 1, 0),
                    ce(1, [0, 0], 2, 1),
                    ce(2, [0, 0], 0, 2),
                    ce(1, [1, 0], 0, 0),
                    ce(0, [0, -1], 2, 2),
                    ce(2, [-1, 1], 1, 1),
                ],
                bravais: false,
            },
            4,
            3,
        ),
        Kind::Hexagonal => (
            CellSpec {
                a1: [s3, 0.0],
                a2: [s3 / 2.0, 1.5],
                subs: vec![[s3 / 4.0, 0.25], [-s3 / 4.0, -0.25]],
                edges: vec![ce(0, [0, 0], 1, 0), ce(0, [1, 0], 1, 1), ce(0, [0, 1], 1, 2)],
                bravais: false,
            },
            3,
            3,
        ),
        Kind::T3464 => {
            let r = 1.0 + s3;
            let a1 = [r * s3 / 2.0, r / 2.0];
            let a2 = [0.0, r];
            let subs: Vec<[f64; 2]> = (0..6)
                .map(|i| {
                    let t = (60.0 * i as f64).to_radians();
                    [t.cos(), t.sin()]
                })
                .collect();
            let mut edges: Vec<CellEdge> = (0..6u8).map(|i| ce(i, [0, 0], (i + 1) % 6, 0)).collect();
            edges.extend([
                ce(0, [1, 0], 4, 0),
                ce(1, [1, 0], 3, 0),
                ce(1, [0, 1], 5, 0),
                ce(2, [0, 1], 4, 0),
                ce(2, [-1, 1], 0, 0),
                ce(3, [-1, 1], 5, 0),
            ]);
            for e in edges.iter_mut() {
                let p = subs[e.from as usize];
                let q = subs[e.to as usize];
                let dx = q[0] + e.off[0] as f64 * a1[0] + e.off[1] as f64 * a2[0] - p[0];
                let dy = q[1] + e.off[0] as f64 * a1[1] + e.off[1] as f64 * a2[1] - p[1];
                let ang = dy.atan2(dx).to_degrees().rem_euclid(180.0);
                e.dir = ((ang / 30.0).round() as u8) % 6;
            }
            (CellSpec { a1, a2, subs, edges, bravais: false }, 4, 6)
        }
        _ => return None,
    };
    Some(spec)
}

fn build_cells(
    kind: Kind,
    spec: CellSpec,
    w: usize,
    h: usize,
    topology: Topology,
    degree: usize,
    ndir: usize,
    trace: bool,
) -> Result<LatticeGraph> {
    let nsub = spec.subs.len();
    let torus = topology == Topology::Torus;
    let mut raw = Raw { cdim: 2, pdim: 2, naxes: if torus { 2 } else { 0 }, ..Raw::default() };
    if torus {
        raw.periods = vec![
            vec![w as f64 * spec.a1[0], w as f64 * spec.a1[1]],
            vec![h as f64 * spec.a2[0], h as f64 * spec.a2[1]],
        ];
    }
    for y in 0..h {
        for x in 0..w {
            for (s, p) in spec.subs.iter().enumerate() {
                let c = [
                    x as f64 * spec.a1[0] + y as f64 * spec.a2[0] + p[0],
                    x as f64 * spec.a1[1] + y as f64 * spec.a2[1] + p[1],
                ];
                raw.push_vertex(&c, &[x as i32, y as i32], s as u8);
            }
        }
    }
    let id = |x: usize, y: usize, s: u8| ((y * w + x) * nsub + s as usize) as VertexId;
    for y in 0..h {
        for x in 0..w {
            for e in &spec.edges {
                let tx = x as i64 + e.off[0] as i64;
                let ty = y as i64 + e.off[1] as i64;
                let (wx, sx) = (tx.rem_euclid(w as i64), tx.div_euclid(w as i64));
                let (wy, sy) = (ty.rem_euclid(h as i64), ty.div_euclid(h as i64));
                if !torus && (sx != 0 || sy != 0) {
                    continue;
                }
                let shift: &[i32] = if torus { &[sx as i32, sy as i32] } else { &[] };
                let slot = if spec.bravais { [2 * e.dir, 2 * e.dir + 1] } else { [NO_SLOT, NO_SLOT] };
                raw.push_edge(id(x, y, e.from), id(wx as usize, wy as usize, e.to), e.dir, shift, slot);
            }
        }
    }
    let slot_width = if spec.bravais { 2 * ndir } else { 0 };
    LatticeGraph::finish(raw, kind, topology, vec![w, h], degree, ndir, slot_width, trace)
}

/// Window of one of the planar lattices (`square`, `triangular`, `kagome`,
/// `t3464`) with `width x height` fundamental cells.
pub fn build_archimedean(kind: Kind, width: usize, height: usize, topology: Topology) -> Result<LatticeGraph> {
    if !matches!(kind, Kind::Square | Kind::Triangular | Kind::Kagome | Kind::T3464) {
        return Err(Error::WrongKind { expected: "archimedean", got: kind.name().to_string() });
    }
    check_sides(kind, &[width, height])?;
    let (spec, degree, ndir) = spec_for(kind).expect("archimedean spec");
    build_cells(kind, spec, width, height, topology, degree, ndir, true)
}

/// Honeycomb window; only used to exercise line graphs.
pub fn build_hexagonal(width: usize, height: usize, topology: Topology) -> Result<LatticeGraph> {
    check_sides(Kind::Hexagonal, &[width, height])?;
    let (spec, degree, ndir) = spec_for(Kind::Hexagonal).expect("hexagonal spec");
    build_cells(Kind::Hexagonal, spec, width, height, topology, degree, ndir, true)
}

/// The square lattice with both diagonals in every face (8-regular).
pub fn build_square_diag(width: usize, height: usize, topology: Topology) -> Result<LatticeGraph> {
    check_sides(Kind::SquareDiag, &[width, height])?;
    let (spec, degree, ndir) = spec_for(Kind::SquareDiag).expect("square_diag spec");
    build_cells(Kind::SquareDiag, spec, width, height, topology, degree, ndir, false)
}

fn check_sides(kind: Kind, sides: &[usize]) -> Result<()> {
    if let Some(&s) = sides.iter().find(|&&s| s < 3) {
        return Err(Error::UnsupportedDims(format!("{} window side {s} is below the minimum of 3", kind.name())));
    }
    Ok(())
}

/// Window of Z^d with the standard generators.
pub fn build_grid_d(d: usize, sides: &[usize], topology: Topology) -> Result<LatticeGraph> {
    if d < 2 {
        return Err(Error::UnsupportedDims(format!("grid_d needs d >= 2, got {d}")));
    }
    if sides.len() != d {
        return Err(Error::UnsupportedDims(format!("grid_d with d = {d} needs {d} sides, got {}", sides.len())));
    }
    check_sides(Kind::GridD, sides)?;
    let torus = topology == Topology::Torus;
    let mut raw = Raw { cdim: d, pdim: d, naxes: if torus { d } else { 0 }, ..Raw::default() };
    if torus {
        for (i, &s) in sides.iter().enumerate() {
            let mut p = vec![0.0; d];
            p[i] = s as f64;
            raw.periods.push(p);
        }
    }
    let n: usize = sides.iter().product();
    let mut stride = vec![1usize; d];
    for i in 1..d {
        stride[i] = stride[i - 1] * sides[i - 1];
    }
    let mut x = vec![0i32; d];
    let mut c = vec![0f64; d];
    for v in 0..n {
        let mut r = v;
        for i in 0..d {
            x[i] = (r % sides[i]) as i32;
            r /= sides[i];
            c[i] = x[i] as f64;
        }
        raw.push_vertex(&c, &x, 0);
    }
    let mut shift = vec![0i32; raw.naxes];
    for v in 0..n {
        for i in 0..d {
            let xi = raw.pos[v * d + i] as usize;
            let wraps = xi + 1 == sides[i];
            if wraps && !torus {
                continue;
            }
            let w = if wraps { v - xi * stride[i] } else { v + stride[i] };
            if torus {
                shift.iter_mut().for_each(|s| *s = 0);
                shift[i] = i32::from(wraps);
            }
            raw.push_edge(v as VertexId, w as VertexId, i as u8, &shift, [2 * i as u8, 2 * i as u8 + 1]);
        }
    }
    LatticeGraph::finish(raw, Kind::GridD, topology, sides.to_vec(), 2 * d, d, 2 * d, d == 2)
}

/// Finite graph given by an edge list. Vertices are placed on a circle.
pub fn custom(n: usize, edges: &[(VertexId, VertexId)]) -> Result<LatticeGraph> {
    let mut raw = Raw { cdim: 2, pdim: 1, ..Raw::default() };
    for v in 0..n {
        let t = std::f64::consts::TAU * v as f64 / n.max(1) as f64;
        raw.push_vertex(&[t.cos(), t.sin()], &[v as i32], 0);
    }
    for &(u, v) in edges {
        if u as usize >= n || v as usize >= n {
            return Err(Error::Invalid(format!("edge ({u}, {v}) out of range for {n} vertices")));
        }
        raw.push_edge(u, v, 0, &[], [NO_SLOT, NO_SLOT]);
    }
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let degree = if deg.iter().all(|&x| x == deg[0]) { deg.first().copied().unwrap_or(0) } else { 0 };
    LatticeGraph::finish(raw, Kind::Custom, Topology::Box, vec![n], degree, 1, 0, false)
}
