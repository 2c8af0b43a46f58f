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

//! Static SVG drawings: edge colours as strokes, orientations as
//! arrowheads, cluster boundaries as thick grey underlays.
//!
//! Torus edges that wrap are drawn from their tail in the direction of the
//! head, so they stick out of the window.

use super::{OutputFile, Payload};
use crate::decorators::UNDECORATED;
use crate::lattice::{EdgeId, Kind, LatticeGraph, VertexId};
use crate::{Error, Result};
use std::fmt::Write as _;

const PALETTE: &[&str] =
    &["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];
const SCALE: f64 = 24.0;

/// Fixed values for the axes beyond the first two of a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slice {
    pub fixed: Vec<(usize, i32)>,
}

impl Slice {
    /// `z=0`, `w=1` or `3=2`, comma separated.
    pub fn parse(s: &str) -> Result<Slice> {
        let mut fixed = Vec::new();
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (a, v) = part.split_once('=').ok_or_else(|| Error::Invalid(format!("bad slice {part:?}")))?;
            let axis = match a.trim() {
                "x" => 0,
                "y" => 1,
                "z" => 2,
                "w" => 3,
                n => n.parse().map_err(|_| Error::Invalid(format!("bad slice axis {n:?}")))?,
            };
            let v = v.trim().parse().map_err(|_| Error::Invalid(format!("bad slice value {v:?}")))?;
            fixed.push((axis, v));
        }
        Ok(Slice { fixed })
    }

    fn value(&self, axis: usize) -> i32 {
        self.fixed.iter().rev().find(|&&(a, _)| a == axis).map_or(0, |&(_, v)| v)
    }
}

struct Style {
    stroke: String,
    width: f64,
    arrow: Option<usize>,
}

fn style(payload: &Payload, e: EdgeId, matched: &[bool]) -> Style {
    match payload {
        Payload::Decoration { colour, .. } => {
            let c = colour[e as usize];
            if c == UNDECORATED {
                Style { stroke: "#cccccc".into(), width: 1.0, arrow: None }
            } else {
                Style {
                    stroke: PALETTE[c as usize % PALETTE.len()].into(),
                    width: 2.0,
                    arrow: Some(c as usize % PALETTE.len()),
                }
            }
        }
        Payload::Orientation { .. } => Style { stroke: "#222222".into(), width: 1.5, arrow: Some(PALETTE.len()) },
        Payload::Colouring { colour, .. } => {
            let c = colour[e as usize] as usize;
            Style { stroke: PALETTE[c.saturating_sub(1) % PALETTE.len()].into(), width: 2.0, arrow: None }
        }
        Payload::Matching { .. } => {
            if matched[e as usize] {
                Style { stroke: "#000000".into(), width: 3.0, arrow: None }
            } else {
                Style { stroke: "#cccccc".into(), width: 1.0, arrow: None }
            }
        }
    }
}

fn head_of(payload: &Payload, e: EdgeId) -> Option<VertexId> {
    match payload {
        Payload::Decoration { head, .. } | Payload::Orientation { head } => Some(head[e as usize]),
        _ => None,
    }
}

/// Renders a file; grids of dimension three or more need a slice.
pub fn render_svg(f: &OutputFile, slice: Option<&Slice>) -> Result<String> {
    let g = f.graph.to_graph()?;
    let m = g.m();
    let sizes_ok = match &f.payload {
        Payload::Decoration { colour, head, .. } => colour.len() == m && head.len() == m,
        Payload::Orientation { head } => head.len() == m,
        Payload::Colouring { colour, .. } => colour.len() == m,
        Payload::Matching { edges } => edges.iter().all(|&e| (e as usize) < m),
    };
    if !sizes_ok {
        return Err(Error::Invalid("payload does not match the graph".into()));
    }
    let (keep, xy): (Vec<bool>, Box<dyn Fn(VertexId) -> [f64; 2]>) = if g.cdim() == 2 {
        (vec![true; g.n()], Box::new(|v| [g.coords(v)[0], g.coords(v)[1]]))
    } else if g.kind == Kind::GridD {
        let Some(s) = slice else {
            return Err(Error::NonPlanarKind(format!("{}-dimensional grid without --slice", g.cdim())));
        };
        let keep = (0..g.n() as VertexId).map(|v| (2..g.pdim()).all(|a| g.pos(v)[a] == s.value(a))).collect();
        (keep, Box::new(|v| [g.coords(v)[0], g.coords(v)[1]]))
    } else {
        return Err(Error::NonPlanarKind(g.kind.name().to_string()));
    };
    let planar_edge = |e: EdgeId| {
        let (a, b) = g.endpoints(e);
        keep[a as usize] && keep[b as usize] && (g.cdim() == 2 || g.dir(e) < 2)
    };
    let mut matched = vec![false; m];
    if let Payload::Matching { edges } = &f.payload {
        for &e in edges {
            matched[e as usize] = true;
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in (0..g.n() as VertexId).filter(|&v| keep[v as usize]) {
        let p = xy(v);
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    if lo[0] > hi[0] {
        return Err(Error::Invalid("slice is empty".into()));
    }
    let pad = 1.5;
    let width = (hi[0] - lo[0] + 2.0 * pad) * SCALE;
    let height = (hi[1] - lo[1] + 2.0 * pad) * SCALE;
    let px = |p: [f64; 2]| ((p[0] - lo[0] + pad) * SCALE, (hi[1] - p[1] + pad) * SCALE);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    s.push_str("<defs>\n");
    for (i, c) in PALETTE.iter().chain(["#222222"].iter()).enumerate() {
        let _ = writeln!(
            s,
            r#"<marker id="a{i}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="4" markerHeight="4" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{c}"/></marker>"#
        );
    }
    s.push_str("</defs>\n");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(bd) = &f.boundary {
        s.push_str(
            "<g class=\"boundary\" stroke=\"#999999\" stroke-width=\"7\" stroke-linecap=\"round\" opacity=\"0.5\">\n",
        );
        for &e in bd {
            if (e as usize) < m && planar_edge(e) {
                let (a, _) = g.endpoints(e);
                let (x1, y1, x2, y2) = segment(&g, &px, &xy, e, a, 0.0);
                let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g class=\"edges\" stroke-linecap=\"round\">\n");
    for e in 0..m as EdgeId {
        if !planar_edge(e) {
            continue;
        }
        let st = style(&f.payload, e, &matched);
        let tail = match head_of(&f.payload, e) {
            Some(h) => g.other(e, h),
            None => g.endpoints(e).0,
        };
        let shorten = if st.arrow.is_some() { 0.18 } else { 0.0 };
        let (x1, y1, x2, y2) = segment(&g, &px, &xy, e, tail, shorten);
        let marker = st.arrow.map(|i| format!(r#" marker-end="url(#a{i})""#)).unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<line class="e" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{}" stroke-width="{}"{marker}/>"#,
            st.stroke, st.width
        );
    }
    s.push_str("</g>\n<g class=\"vertices\" fill=\"#444444\">\n");
    for v in (0..g.n() as VertexId).filter(|&v| keep[v as usize]) {
        let (x, y) = px(xy(v));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// Pixel segment of `e` leaving `tail`, trimmed by `shorten` at the head end.
fn segment(
    g: &LatticeGraph,
    px: &impl Fn([f64; 2]) -> (f64, f64),
    xy: &dyn Fn(VertexId) -> [f64; 2],
    e: EdgeId,
    tail: VertexId,
    shorten: f64,
) -> (f64, f64, f64, f64) {
    let p = xy(tail);
    let d = g.displacement(e, tail);
    let q = [p[0] + d[0] * (1.0 - shorten), p[1] + d[1] * (1.0 - shorten)];
    let (x1, y1) = px(p);
    let (x2, y2) = px(q);
    (x1, y1, x2, y2)
}
