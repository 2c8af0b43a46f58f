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

//! Decorations and matchings of line graphs, stamped clique by clique.

use super::Matching;
use crate::decorators::{Decoration, Orientation};
use crate::lattice::{CliqueIncidence, EdgeId, LatticeGraph, VertexId};
use crate::rng::channels::derived::LG_MATCH;
use crate::rng::LabelField;
use crate::verify::{check_balanced, check_schreier};
use crate::{Error, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A proper `(2d-1)`-edge-colouring of `K_{2d}` with an orientation.
///
/// Position `2i` is the clique vertex entering the clique's centre along
/// colour `i`, position `2i + 1` the one leaving it. For every colour `j`
/// and every `i`, exactly one of the `j`-edges at `2i` and `2i + 1` points
/// towards its position, so a vertex that is `in` in one clique and `out`
/// in the other gets one incoming and one outgoing edge of every colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTemplate {
    pub d: usize,
    /// `colour[p][q]` for `p != q`.
    pub colour: Vec<Vec<u8>>,
    /// `forward[p][q]`: the edge `pq` is oriented from `p` to `q`.
    pub forward: Vec<Vec<bool>>,
    /// Hex SHA-256 of the template content.
    pub hash: String,
}

impl LiftTemplate {
    pub fn size(&self) -> usize {
        2 * self.d
    }

    /// Whether the edge at position `p` of colour `j` points into `p`.
    fn enters(&self, p: usize, j: u8) -> Option<bool> {
        (0..self.size()).find(|&q| q != p && self.colour[p][q] == j).map(|q| self.forward[q][p])
    }

    /// Properness plus the in/out pairing condition.
    pub fn is_consistent(&self) -> bool {
        let s = self.size();
        for p in 0..s {
            let mut seen = vec![false; s - 1];
            for q in 0..s {
                if q == p {
                    continue;
                }
                let c = self.colour[p][q] as usize;
                if c >= s - 1 || seen[c] || self.colour[q][p] as usize != c || self.forward[p][q] == self.forward[q][p]
                {
                    return false;
                }
                seen[c] = true;
            }
        }
        (0..self.d).all(|i| (0..s as u8 - 1).all(|j| self.enters(2 * i, j) != self.enters(2 * i + 1, j)))
    }
}

/// Round-robin 1-factorization of `K_{2d}`.
fn one_factorization(d: usize) -> Vec<Vec<u8>> {
    let s = 2 * d;
    let r = s - 1;
    let mut colour = vec![vec![u8::MAX; s]; s];
    for round in 0..r {
        let mut pair = |a: usize, b: usize| {
            colour[a][b] = round as u8;
            colour[b][a] = round as u8;
        };
        pair(round, r);
        for k in 1..d {
            pair((round + k) % r, (round + r - k) % r);
        }
    }
    colour
}

fn search(d: usize, colour: &[Vec<u8>]) -> Option<Vec<Vec<bool>>> {
    let s = 2 * d;
    let edges: Vec<(usize, usize)> = (0..s).flat_map(|p| (p + 1..s).map(move |q| (p, q))).collect();
    // constraint partner: the edge of the same colour at the paired position
    let edge_at = |p: usize, j: u8| edges.iter().position(|&(a, b)| (a == p || b == p) && colour[a][b] == j).unwrap();
    let mut forward = vec![vec![false; s]; s];
    let mut set = vec![false; edges.len()];
    fn enters(forward: &[Vec<bool>], e: (usize, usize), p: usize) -> bool {
        let q = if e.0 == p { e.1 } else { e.0 };
        forward[q][p]
    }
    fn go(
        idx: usize,
        edges: &[(usize, usize)],
        checks: &[Vec<(usize, usize, usize, usize)>],
        forward: &mut Vec<Vec<bool>>,
        set: &mut Vec<bool>,
    ) -> bool {
        if idx == edges.len() {
            return true;
        }
        let (a, b) = edges[idx];
        for dirn in [true, false] {
            forward[a][b] = dirn;
            forward[b][a] = !dirn;
            set[idx] = true;
            let ok = checks[idx].iter().all(|&(e1, p1, e2, p2)| {
                !set[e1] || !set[e2] || enters(forward, edges[e1], p1) != enters(forward, edges[e2], p2)
            });
            if ok && go(idx + 1, edges, checks, forward, set) {
                return true;
            }
            set[idx] = false;
        }
        false
    }
    // checks[i]: constraints whose later edge is i
    let mut checks = vec![Vec::new(); edges.len()];
    for i in 0..d {
        for j in 0..(s - 1) as u8 {
            let (p1, p2) = (2 * i, 2 * i + 1);
            let (e1, e2) = (edge_at(p1, j), edge_at(p2, j));
            checks[e1.max(e2)].push((e1, p1, e2, p2));
        }
    }
    go(0, &edges, &checks, &mut forward, &mut set).then_some(forward)
}

fn content_hash(d: usize, colour: &[Vec<u8>], forward: &[Vec<bool>]) -> String {
    let mut h = Sha256::new();
    h.update(b"schreier-lab/lift-template/v1");
    h.update((d as u64).to_le_bytes());
    for (cr, fr) in colour.iter().zip(forward) {
        for (&c, &f) in cr.iter().zip(fr) {
            h.update([c, u8::from(f)]);
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// The decorated `K_{2d}`, computed once per `d` by backtracking.
pub fn lift_template(d: usize) -> Result<Arc<LiftTemplate>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LiftTemplate>>>> = OnceLock::new();
    if !(2..=64).contains(&d) {
        return Err(Error::UnsupportedDims(format!("line-graph template needs 2 <= d <= 64, got {d}")));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("template cache").get(&d) {
        return Ok(t.clone());
    }
    let colour = one_factorization(d);
    let forward = search(d, &colour).ok_or_else(|| Error::Invalid(format!("no lift template for d = {d}")))?;
    let hash = content_hash(d, &colour, &forward);
    let t = Arc::new(LiftTemplate { d, colour, forward, hash });
    cache.lock().expect("template cache").insert(d, t.clone());
    Ok(t)
}

/// Id of the line-graph edge joining members `i < j` of clique `x`, given
/// the clique offsets of `line_graph`.
fn clique_offsets(inc: &CliqueIncidence) -> Vec<usize> {
    let mut off = Vec::with_capacity(inc.members.len() + 1);
    off.push(0);
    for m in &inc.members {
        off.push(off.last().unwrap() + m.len() * (m.len() - 1) / 2);
    }
    off
}

fn pair_index(r: usize, i: usize, j: usize) -> usize {
    i * r - i * (i + 1) / 2 + (j - i - 1)
}

fn check_line_graph(g: &LatticeGraph, lg: &LatticeGraph, inc: &CliqueIncidence) -> Result<()> {
    let expect = *clique_offsets(inc).last().unwrap();
    if lg.n() != g.m() || lg.m() != expect || inc.members.len() != g.n() {
        return Err(Error::Invalid("line graph does not belong to the base graph".into()));
    }
    Ok(())
}

/// Decoration of `L(G)` with `2d - 1` colours from a decoration of `G`.
pub fn lift_to_line_graph(
    g: &LatticeGraph,
    dec: &Decoration,
    lg: &LatticeGraph,
    inc: &CliqueIncidence,
) -> Result<Decoration> {
    check_line_graph(g, lg, inc)?;
    let report = check_schreier(g, dec);
    if let Some(c) = report.first_failure() {
        let v = c.witness.as_ref().and_then(|w| w.vertices.first().copied()).unwrap_or(0);
        return Err(Error::InvalidSourceDecoration(v));
    }
    let t = lift_template(dec.d)?;
    let mut out = Decoration { d: 2 * dec.d - 1, colour: vec![0; lg.m()], head: vec![0; lg.m()] };
    let mut le = 0usize;
    for x in 0..g.n() as VertexId {
        let es = &inc.members[x as usize];
        let position = |e: EdgeId| 2 * dec.colour[e as usize] as usize + usize::from(dec.head[e as usize] != x);
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let (p, q) = (position(es[i]), position(es[j]));
                out.colour[le] = t.colour[p][q];
                out.head[le] = if t.forward[p][q] { es[j] } else { es[i] };
                le += 1;
            }
        }
    }
    Ok(out)
}

/// Perfect matching of `L(G)`: every clique pairs up its `d` entering
/// vertices at random. Needs `d` even and a balanced orientation.
pub fn line_graph_matching(
    g: &LatticeGraph,
    or: &Orientation,
    lg: &LatticeGraph,
    inc: &CliqueIncidence,
    field: &LabelField,
) -> Result<Matching> {
    check_line_graph(g, lg, inc)?;
    let r = g.deg(0);
    if !r.is_multiple_of(2) {
        return Err(Error::NonRegularInput(format!("degree {r} is odd")));
    }
    let d = r / 2;
    if !d.is_multiple_of(2) {
        return Err(Error::OddD(d));
    }
    let report = check_balanced(g, or);
    if let Some(c) = report.first_failure() {
        let v = c.witness.as_ref().and_then(|w| w.vertices.first().copied()).unwrap_or(0);
        return Err(Error::NotBalanced(v));
    }
    let off = clique_offsets(inc);
    let mut edges = Vec::with_capacity(lg.n() / 2);
    for x in 0..g.n() as VertexId {
        let es = &inc.members[x as usize];
        let mut ins: Vec<usize> = (0..es.len()).filter(|&i| or.head[es[i] as usize] == x).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(field.label(x, LG_MATCH));
        for i in (1..ins.len()).rev() {
            let j = ((u128::from(rng.next_u64()) * (i as u128 + 1)) >> 64) as usize;
            ins.swap(i, j);
        }
        for pair in ins.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            edges.push((off[x as usize] + pair_index(es.len(), a, b)) as EdgeId);
        }
    }
    edges.sort_unstable();
    Ok(Matching { edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_archimedean, line_graph, Kind, Topology};

    #[test]
    fn templates_are_consistent() {
        for d in 2..=5 {
            let t = lift_template(d).unwrap();
            assert!(t.is_consistent(), "d = {d}");
            assert_eq!(t.hash.len(), 64);
        }
        assert_eq!(lift_template(3).unwrap().hash, lift_template(3).unwrap().hash);
    }

    #[test]
    fn broken_template_is_detected() {
        let mut t = (*lift_template(2).unwrap()).clone();
        t.forward[0][1] = !t.forward[0][1];
        t.forward[1][0] = !t.forward[1][0];
        // 0 and 1 are a pair; flipping their joint edge keeps them opposite
        assert!(t.is_consistent());
        t.forward[0][2] = !t.forward[0][2];
        t.forward[2][0] = !t.forward[2][0];
        assert!(!t.is_consistent());
    }

    #[test]
    fn pair_index_matches_line_graph_order() {
        let g = build_archimedean(Kind::Square, 4, 4, Topology::Torus).unwrap();
        let (lg, inc) = line_graph(&g).unwrap();
        let off = clique_offsets(&inc);
        for x in 0..g.n() {
            let es = &inc.members[x];
            for i in 0..4 {
                for j in i + 1..4 {
                    let e = (off[x] + pair_index(4, i, j)) as EdgeId;
                    let (a, b) = lg.endpoints(e);
                    assert_eq!((a, b), (es[i], es[j]));
                }
            }
        }
    }
}
