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

//! `H x C_m` for a finite `(2d-2)`-regular `H` with a perfect matching:
//! one colour on a 2-factor glued from the matching and the rungs, the
//! remaining finite pieces decorated on their own.

use super::orientation::orient_even_subgraph;
use super::{finish, Decorated};
use crate::bipartite::{max_matching, FREE};
use crate::dsu::Dsu;
use crate::lattice::{EdgeId, Kind, LatticeGraph, VertexId};
use crate::rng::channels::decorators::{PROD_EULER_DIR, PROD_RESIDUAL, PROD_SET, PROD_SET_ROUNDS, PROD_SIDE};
use crate::rng::LabelField;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProductOptions {
    /// Cut long gaps into runs of two or three layers, which bounds the
    /// first colour's cycles by six edges.
    pub tightened: bool,
}

/// Minimum cyclic distance between chosen layers.
const LAYER_GAP: usize = 5;

/// Perfect matching of a small graph by backtracking, if one exists.
pub fn find_perfect_matching(h: &LatticeGraph) -> Option<Vec<EdgeId>> {
    fn go(h: &LatticeGraph, used: &mut [bool], out: &mut Vec<EdgeId>) -> bool {
        let Some(v) = used.iter().position(|&u| !u) else { return true };
        used[v] = true;
        for &(w, e) in h.neighbors(v as VertexId) {
            if used[w as usize] {
                continue;
            }
            used[w as usize] = true;
            out.push(e);
            if go(h, used, out) {
                return true;
            }
            out.pop();
            used[w as usize] = false;
        }
        used[v] = false;
        false
    }
    let mut used = vec![false; h.n()];
    let mut out = Vec::new();
    go(h, &mut used, &mut out).then_some(out)
}

fn check_matching(h: &LatticeGraph, m: &[EdgeId]) -> Result<Vec<VertexId>> {
    let mut partner = vec![u32::MAX; h.n()];
    for &e in m {
        if e as usize >= h.m() {
            return Err(Error::Invalid(format!("matching edge {e} out of range")));
        }
        let (a, b) = h.endpoints(e);
        if a == b || partner[a as usize] != u32::MAX || partner[b as usize] != u32::MAX {
            return Err(Error::Invalid(format!("edge {e} breaks the matching")));
        }
        partner[a as usize] = b;
        partner[b as usize] = a;
    }
    if let Some(v) = partner.iter().position(|&p| p == u32::MAX) {
        return Err(Error::Invalid(format!("matching misses vertex {v} of H")));
    }
    Ok(partner)
}

/// Layers at pairwise cyclic distance at least 5, grown in rounds: a layer
/// joins when no chosen layer is within 4 and its label beats every layer
/// within 4.
pub fn independent_layers(nh: usize, m: usize, field: &LabelField) -> Result<Vec<usize>> {
    let r = LAYER_GAP - 1;
    let layer = |i: usize| -> Vec<VertexId> { (0..nh).map(|u| (i * nh + u) as VertexId).collect() };
    let cyc = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(m - d)
    };
    let mut chosen = vec![false; m];
    for round in 0..PROD_SET_ROUNDS {
        let labels: Vec<u64> = (0..m).map(|i| field.joint_label(&layer(i), PROD_SET + round)).collect::<Result<_>>()?;
        let open: Vec<bool> = (0..m).map(|i| (0..m).all(|j| !chosen[j] || cyc(i, j) > r)).collect();
        if !open.contains(&true) {
            break;
        }
        let add: Vec<usize> = (0..m)
            .filter(|&i| open[i] && (0..m).all(|j| j == i || cyc(i, j) > r || (labels[i], i) > (labels[j], j)))
            .collect();
        for i in add {
            chosen[i] = true;
        }
    }
    let s: Vec<usize> = (0..m).filter(|&i| chosen[i]).collect();
    if s.is_empty() {
        return Err(Error::NoIndependentSet);
    }
    Ok(s)
}

/// Cyclic runs `(start, length)` of consecutive layers; each run carries
/// the matching on its end layers and the rungs inside it. Also returns
/// the size of the chosen layer set.
pub fn layer_runs(
    nh: usize,
    m: usize,
    field: &LabelField,
    opts: ProductOptions,
) -> Result<(Vec<(usize, usize)>, usize)> {
    let s = independent_layers(nh, m, field)?;
    let layer = |i: usize| -> Vec<VertexId> { (0..nh).map(|u| (i * nh + u) as VertexId).collect() };
    // Blocks {v, v'} with v' a random neighbour of v; runs are (start, len).
    let mut blocks = Vec::with_capacity(s.len());
    for &v in &s {
        let up = field.joint_label(&layer(v), PROD_SIDE)? >> 63 == 1;
        blocks.push(if up { (v, 2) } else { ((v + m - 1) % m, 2) });
    }
    blocks.sort_unstable();
    let mut runs = Vec::new();
    for (i, &(start, len)) in blocks.iter().enumerate() {
        runs.push((start, len));
        let next = blocks[(i + 1) % blocks.len()].0;
        let gap_start = (start + len) % m;
        let gap = (next + m - gap_start) % m;
        let gap = if blocks.len() == 1 { m - len } else { gap };
        if gap < 2 {
            return Err(Error::Invalid(format!("gap of {gap} layers after layer {start}")));
        }
        if opts.tightened {
            let three_first = field.joint_label(&layer(gap_start), PROD_SIDE)? >> 63 == 1;
            let mut pieces = vec![2usize; gap / 2];
            if gap % 2 == 1 {
                let last = pieces.len() - 1;
                pieces[if three_first { 0 } else { last }] = 3;
            }
            let mut at = gap_start;
            for p in pieces {
                runs.push((at, p));
                at = (at + p) % m;
            }
        } else {
            runs.push((gap_start, gap));
        }
    }
    Ok((runs, s.len()))
}

/// Schreier decoration of `g = H x C_m` (as built by
/// `build_product_with_cycle`) given a perfect matching of `H`.
pub fn schreier_product(
    g: &LatticeGraph,
    h: &LatticeGraph,
    matching: &[EdgeId],
    field: &LabelField,
    opts: ProductOptions,
) -> Result<Decorated> {
    if g.kind != Kind::Product {
        return Err(Error::WrongKind { expected: "product", got: g.kind.name().to_string() });
    }
    let nh = h.n();
    let m = *g.dims.last().expect("product dims");
    if g.n() != nh * m {
        return Err(Error::Invalid(format!("{} vertices do not split into {m} copies of H", g.n())));
    }
    let partner = check_matching(h, matching)?;
    let d = g.degree / 2;
    let id = |u: usize, i: usize| (i * nh + u) as VertexId;
    let rung = |u: usize, i: usize| g.edge_between(id(u, i), id(u, (i + 1) % m)).expect("rung");
    let (runs, chosen) = layer_runs(nh, m, field, opts)?;

    let mut colour = vec![u8::MAX; g.m()];
    for &(start, len) in &runs {
        for end in [start, (start + len - 1) % m] {
            for u in 0..nh {
                let e = g.edge_between(id(u, end), id(partner[u] as usize, end)).expect("matching edge in layer");
                colour[e as usize] = 0;
            }
        }
        for k in 0..len - 1 {
            for u in 0..nh {
                colour[rung(u, (start + k) % m) as usize] = 0;
            }
        }
    }

    // The rest splits into finite (2d-2)-regular pieces.
    let mut dsu = Dsu::new(g.n());
    let rest: Vec<EdgeId> = (0..g.m() as EdgeId).filter(|&e| colour[e as usize] == u8::MAX).collect();
    for &e in &rest {
        let (a, b) = g.endpoints(e);
        dsu.union(a, b);
    }
    let (labels, count) = dsu.labels();
    let mut pieces: Vec<Vec<EdgeId>> = vec![Vec::new(); count];
    for &e in &rest {
        pieces[labels[g.endpoints(e).0 as usize] as usize].push(e);
    }
    let mut nonempty = 0;
    for es in pieces.iter().filter(|es| !es.is_empty()) {
        nonempty += 1;
        decorate_piece(g, es, d - 1, field, &mut colour)?;
    }
    let mut out = finish(g, &colour, d, field, 1)?;
    let census = crate::verify::monochrome_components(g, &out.decoration);
    let longest = census.components.iter().filter(|c| c.colour == 0).map(|c| c.len()).max().unwrap_or(0);
    out.stat("layer_set", chosen as f64);
    out.stat("runs", runs.len() as f64);
    out.stat("residual_pieces", nonempty as f64);
    out.stat("longest_first_colour_cycle", longest as f64);
    Ok(out)
}

/// Splits an even-regular piece into `k` colour classes, each with one
/// outgoing and one incoming edge at every vertex (colours `1..=k`).
fn decorate_piece(g: &LatticeGraph, es: &[EdgeId], k: usize, field: &LabelField, colour: &mut [u8]) -> Result<()> {
    let mut head: Vec<VertexId> = (0..g.m() as EdgeId).map(|e| g.endpoints(e).1).collect();
    orient_even_subgraph(g, es, field, (PROD_RESIDUAL, PROD_EULER_DIR), &mut head);
    let mut verts: Vec<VertexId> = es.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    verts.sort_unstable();
    verts.dedup();
    let local = |v: VertexId| verts.binary_search(&v).expect("piece vertex") as u32;
    let mut remaining: Vec<EdgeId> = es.to_vec();
    remaining.sort_by_key(|&e| {
        let (a, b) = g.endpoints(e);
        (field.label(a, PROD_RESIDUAL) ^ field.label(b, PROD_RESIDUAL).rotate_left(17), e)
    });
    for c in 1..=k as u8 {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
        let mut by_pair: std::collections::BTreeMap<(u32, u32), Vec<EdgeId>> = std::collections::BTreeMap::new();
        for &e in &remaining {
            let tail = local(g.other(e, head[e as usize]));
            let hd = local(head[e as usize]);
            adj[tail as usize].push(hd);
            by_pair.entry((tail, hd)).or_default().push(e);
        }
        let mates = max_matching(&adj, verts.len());
        if mates.contains(&FREE) {
            return Err(Error::ResidualDecompositionFailed(format!(
                "no perfect matching for colour {c} on a piece with {} vertices",
                verts.len()
            )));
        }
        let mut taken = Vec::with_capacity(verts.len());
        for (l, &r) in mates.iter().enumerate() {
            let e = by_pair.get_mut(&(l as u32, r)).and_then(|v| v.pop()).expect("matched along an edge");
            colour[e as usize] = c;
            taken.push(e);
        }
        taken.sort_unstable();
        remaining.retain(|e| taken.binary_search(e).is_err());
    }
    if !remaining.is_empty() {
        return Err(Error::ResidualDecompositionFailed(format!("{} edges left over", remaining.len())));
    }
    Ok(())
}
