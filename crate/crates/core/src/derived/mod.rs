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

//! Structures read off a decoration: proper edge colourings, perfect
//! matchings, decorations of line graphs.

mod kings;
mod line;

pub use kings::square_diag_decorate;
pub use line::{lift_template, lift_to_line_graph, line_graph_matching, LiftTemplate};

use crate::decorators::Decoration;
use crate::lattice::{EdgeId, LatticeGraph};
use crate::rng::channels::derived::CYCLE_PHASE;
use crate::rng::LabelField;
use crate::verify::{monochrome_components, ComponentKind};
use crate::{Error, Result};

/// Edge colours `1..=colours`; `0` marks an uncoloured edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColouring {
    pub colour: Vec<u8>,
    pub colours: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
}

/// Class of the light half of decoration colour `c` (0-based).
pub fn light(c: u8) -> u8 {
    2 * c + 1
}

/// Class of the dark half of decoration colour `c` (0-based).
pub fn dark(c: u8) -> u8 {
    2 * c + 2
}

/// Splits every monochromatic cycle into two alternating classes; each
/// cycle picks its phase from the joint label of its vertices.
pub fn proper_colouring_from_decoration(
    g: &LatticeGraph,
    dec: &Decoration,
    field: &LabelField,
) -> Result<EdgeColouring> {
    let census = monochrome_components(g, dec);
    let mut colour = vec![0u8; g.m()];
    for comp in &census.components {
        if comp.kind != ComponentKind::Cycle {
            return Err(Error::InvalidSourceDecoration(g.endpoints(comp.edges[0]).0));
        }
        if comp.len() % 2 == 1 {
            return Err(Error::OddCycle(comp.edges[0]));
        }
        let mut verts: Vec<u32> = comp.edges.iter().map(|&e| g.endpoints(e).0).collect();
        verts.extend(comp.edges.iter().map(|&e| g.endpoints(e).1));
        verts.sort_unstable();
        verts.dedup();
        let phase = (field.joint_label(&verts, CYCLE_PHASE)? >> 63) as usize;
        for (i, &e) in comp.edges.iter().enumerate() {
            colour[e as usize] = if (i + phase).is_multiple_of(2) { light(comp.colour) } else { dark(comp.colour) };
        }
    }
    Ok(EdgeColouring { colour, colours: 2 * dec.d })
}

/// One colour class of a complete colouring.
pub fn matching_from_colouring(ec: &EdgeColouring, class: u8) -> Result<Matching> {
    if let Some(e) = ec.colour.iter().position(|&c| c == 0) {
        return Err(Error::IncompleteColouring(e as u32));
    }
    if class == 0 || class as usize > ec.colours {
        return Err(Error::Invalid(format!("class {class} outside 1..={}", ec.colours)));
    }
    Ok(Matching { edges: (0..ec.colour.len() as EdgeId).filter(|&e| ec.colour[e as usize] == class).collect() })
}
