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

//! The self-matching augmentation: a hub vertex in every non-triangular
//! face, connected to all of the face's vertices.

use super::{LatticeGraph, VertexId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colour {
    Yellow,
    Green,
}

impl Colour {
    pub fn flip(self) -> Colour {
        match self {
            Colour::Yellow => Colour::Green,
            Colour::Green => Colour::Yellow,
        }
    }
}

/// Which colour is connected through a non-triangular face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceChoice {
    YellowConnects,
    GreenConnects,
}

impl FaceChoice {
    pub fn colour(self) -> Colour {
        match self {
            FaceChoice::YellowConnects => Colour::Yellow,
            FaceChoice::GreenConnects => Colour::Green,
        }
    }
}

/// Adjacency oracle for same-colour pairs on the augmented lattice.
pub struct AugmentedAdjacency<'a> {
    g: &'a LatticeGraph,
    choice: &'a [Option<FaceChoice>],
}

/// `face_choice[f]` must be set for every face with more than three sides.
pub fn augmented_adjacency<'a>(
    g: &'a LatticeGraph,
    face_choice: &'a [Option<FaceChoice>],
) -> Result<AugmentedAdjacency<'a>> {
    if !g.has_faces() {
        return Err(Error::FaceDataMissing);
    }
    if face_choice.len() != g.faces().len() {
        return Err(Error::MissingFaceChoice(face_choice.len().min(g.faces().len())));
    }
    for (i, f) in g.faces().iter().enumerate() {
        if f.size() > 3 && face_choice[i].is_none() {
            return Err(Error::MissingFaceChoice(i));
        }
    }
    Ok(AugmentedAdjacency { g, choice: face_choice })
}

impl AugmentedAdjacency<'_> {
    /// Whether two vertices of colour `c` are joined on the augmented lattice.
    pub fn connected(&self, u: VertexId, v: VertexId, c: Colour) -> bool {
        if u == v {
            return true;
        }
        if self.g.edge_between(u, v).is_some() {
            return true;
        }
        self.g.vertex_faces(u).iter().any(|&f| {
            let face = &self.g.faces()[f as usize];
            face.verts.contains(&v) && (face.size() == 3 || self.choice[f as usize].map(FaceChoice::colour) == Some(c))
        })
    }
}
