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

//! The (3,4,6,4) lattice: triangles red, hexagons blue.

use super::{finish, Decorated};
use crate::lattice::{EdgeId, Kind, LatticeGraph};
use crate::rng::LabelField;
use crate::{Error, Result};

pub const RED: u8 = 0;
pub const BLUE: u8 = 1;

/// True for the six edges of a cell's hexagon (consecutive corners).
pub fn is_hexagon_edge(g: &LatticeGraph, e: EdgeId) -> bool {
    let (a, b) = g.endpoints(e);
    matches!((g.sub(b) + 6 - g.sub(a)) % 6, 1 | 5)
}

/// Every edge lies on exactly one triangle or one hexagon, so colouring
/// by polygon is balanced; each polygon then gets its own orientation.
pub fn schreier_t3464(g: &LatticeGraph, field: &LabelField) -> Result<Decorated> {
    if g.kind != Kind::T3464 {
        return Err(Error::WrongKind { expected: "t3464", got: g.kind.name().to_string() });
    }
    let colour: Vec<u8> = (0..g.m() as EdgeId).map(|e| if is_hexagon_edge(g, e) { BLUE } else { RED }).collect();
    // The polygons have at most 6 vertices; the 2k border margin only has
    // to cover a hexagon.
    finish(g, &colour, 2, field, 3)
}
