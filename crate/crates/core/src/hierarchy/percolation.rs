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

//! Site percolation at fair coins on the self-matching augmentation.

use crate::dsu::Dsu;
use crate::lattice::{Colour, FaceChoice, LatticeGraph, Topology, VertexId};
use crate::rng::channels::hierarchy::{COLOUR, FACE_COIN};
use crate::rng::LabelField;
use crate::{Error, Result};
use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct Clustering {
    pub colour: Vec<Colour>,
    pub cluster_id: Vec<u32>,
    /// Coin of every face with more than three sides; `None` on triangles.
    pub face_choice: Vec<Option<FaceChoice>>,
    /// Coin of the exterior face (box windows).
    pub outer_choice: Option<FaceChoice>,
    pub count: usize,
}

fn coin_choice(x: u64) -> FaceChoice {
    if x >> 63 == 1 {
        FaceChoice::YellowConnects
    } else {
        FaceChoice::GreenConnects
    }
}

/// Fair vertex colours and face coins, clustered by union-find.
pub fn percolation_clusters(g: &LatticeGraph, field: &LabelField) -> Result<Clustering> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    let colour: Vec<Colour> =
        (0..g.n() as VertexId).map(|v| if field.coin(v, COLOUR) { Colour::Yellow } else { Colour::Green }).collect();
    let mut choice = Vec::with_capacity(g.faces().len());
    for f in g.faces() {
        if f.size() > 3 {
            choice.push(Some(coin_choice(field.joint_label(&f.verts, FACE_COIN)?)));
        } else {
            choice.push(None);
        }
    }
    let outer = match g.outer_face() {
        Some(f) => Some(coin_choice(field.joint_label(&f.verts, FACE_COIN)?)),
        None => None,
    };
    clusters_from_colouring(g, colour, choice, outer)
}

/// Clusters of a given colouring; used directly with forced labels.
pub fn clusters_from_colouring(
    g: &LatticeGraph,
    colour: Vec<Colour>,
    face_choice: Vec<Option<FaceChoice>>,
    outer_choice: Option<FaceChoice>,
) -> Result<Clustering> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    if colour.len() != g.n() {
        return Err(Error::Invalid(format!("{} colours for {} vertices", colour.len(), g.n())));
    }
    if face_choice.len() != g.faces().len() {
        return Err(Error::MissingFaceChoice(face_choice.len().min(g.faces().len())));
    }
    let mut dsu = Dsu::new(g.n());
    for e in 0..g.m() as u32 {
        let (u, v) = g.endpoints(e);
        if colour[u as usize] == colour[v as usize] {
            dsu.union(u, v);
        }
    }
    for (i, f) in g.faces().iter().enumerate() {
        if f.size() <= 3 {
            continue;
        }
        let c = face_choice[i].ok_or(Error::MissingFaceChoice(i))?.colour();
        join_face(&mut dsu, &f.verts, &colour, c);
    }
    if let Some(f) = g.outer_face() {
        let c = outer_choice.ok_or(Error::MissingFaceChoice(g.faces().len()))?.colour();
        join_face(&mut dsu, &f.verts, &colour, c);
    }
    let (cluster_id, count) = dsu.labels();
    Ok(Clustering { colour, cluster_id, face_choice, outer_choice, count })
}

fn join_face(dsu: &mut Dsu, verts: &[VertexId], colour: &[Colour], c: Colour) {
    let mut first = None;
    for &v in verts {
        if colour[v as usize] == c {
            match first {
                None => first = Some(v),
                Some(f) => {
                    dsu.union(f, v);
                }
            }
        }
    }
}

impl Clustering {
    pub fn members(&self) -> Vec<Vec<VertexId>> {
        let mut m = vec![Vec::new(); self.count];
        for (v, &c) in self.cluster_id.iter().enumerate() {
            m[c as usize].push(v as VertexId);
        }
        m
    }

    /// Whether each cluster contains a non-contractible loop of the torus,
    /// following the same connections that formed it.
    pub fn wrapping(&self, g: &LatticeGraph) -> Vec<bool> {
        let mut wraps = vec![false; self.count];
        let k = g.naxes();
        if g.topology != Topology::Torus || k == 0 {
            return wraps;
        }
        let n = g.n();
        let mut off = vec![0i32; n * k];
        let mut seen = vec![false; n];
        let mut q = VecDeque::new();
        let mut tmp = vec![0i32; k];
        for s in 0..n {
            if seen[s] || wraps[self.cluster_id[s] as usize] {
                continue;
            }
            let cid = self.cluster_id[s];
            seen[s] = true;
            q.clear();
            q.push_back(s as VertexId);
            'bfs: while let Some(v) = q.pop_front() {
                let vo: Vec<i32> = off[v as usize * k..(v as usize + 1) * k].to_vec();
                let mut visit = |w: VertexId, t: &[i32], q: &mut VecDeque<VertexId>| -> bool {
                    let wi = w as usize;
                    if seen[wi] {
                        off[wi * k..(wi + 1) * k] != *t
                    } else {
                        seen[wi] = true;
                        off[wi * k..(wi + 1) * k].copy_from_slice(t);
                        q.push_back(w);
                        false
                    }
                };
                for &(w, e) in g.neighbors(v) {
                    if self.cluster_id[w as usize] != cid || self.colour[w as usize] != self.colour[v as usize] {
                        continue;
                    }
                    tmp.copy_from_slice(&vo);
                    g.add_dart_shift(e, v, &mut tmp);
                    if visit(w, &tmp, &mut q) {
                        wraps[cid as usize] = true;
                        break 'bfs;
                    }
                }
                for &fi in g.vertex_faces(v) {
                    let f = &g.faces()[fi as usize];
                    if f.size() <= 3
                        || self.face_choice[fi as usize].map(FaceChoice::colour) != Some(self.colour[v as usize])
                    {
                        continue;
                    }
                    let Some(iv) = f.verts.iter().position(|&x| x == v) else { continue };
                    for (j, &w) in f.verts.iter().enumerate() {
                        if w == v || self.colour[w as usize] != self.colour[v as usize] {
                            continue;
                        }
                        for a in 0..k {
                            tmp[a] = vo[a] - f.offset(iv, k)[a] + f.offset(j, k)[a];
                        }
                        if visit(w, &tmp, &mut q) {
                            wraps[cid as usize] = true;
                            break 'bfs;
                        }
                    }
                }
            }
        }
        wraps
    }
}
