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

//! Schreier decorations and balanced orientations of lattice windows.

mod cycles;
mod grid;
mod kagome;
mod orientation;
mod plane;
mod product;
mod retry;
mod square;
mod t3464;
mod triangular;

pub use crate::hierarchy::{maximal_r_discrete, toast_hierarchy};
pub use cycles::{orient_cycles, orient_cycles_lenient};
pub use grid::{
    align_pattern, grid_colouring, inner_patterns, interface_patterns, schreier_grid_d, schreier_grid_d_with,
    GridInner, Pattern,
};
pub use kagome::{
    boundary_touch_violations, on_down_triangle, schreier_kagome, schreier_kagome_using, schreier_kagome_with,
    triangle_fix,
};
pub use orientation::{
    balanced_orientation_planar, balanced_orientation_planar_using, balanced_orientation_planar_with, chessboard,
    PlanarOrientation,
};
pub use product::{find_perfect_matching, independent_layers, layer_runs, schreier_product, ProductOptions};
pub use retry::{with_retries, Retried};
pub use square::{guards, schreier_square, schreier_square_using, schreier_square_with};
pub use t3464::{is_hexagon_edge, schreier_t3464};
pub use triangular::{schreier_triangular, schreier_triangular_using, schreier_triangular_with};

use crate::hierarchy::{ClusterBoundary, HierarchyTree};
use crate::lattice::{EdgeId, LatticeGraph, Topology, VertexId};
use crate::rng::LabelField;
use crate::verify::monochrome_components;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Colour value of an edge left out of a partial decoration.
pub const UNDECORATED: u8 = u8::MAX;

/// Edge colours in `0..d` and an orientation (the head of every edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    pub d: usize,
    pub colour: Vec<u8>,
    pub head: Vec<VertexId>,
}

impl Decoration {
    /// All edges undecorated, heads at the second endpoint.
    pub fn empty(g: &LatticeGraph, d: usize) -> Decoration {
        Decoration {
            d,
            colour: vec![UNDECORATED; g.m()],
            head: (0..g.m() as EdgeId).map(|e| g.endpoints(e).1).collect(),
        }
    }

    pub fn tail(&self, g: &LatticeGraph, e: EdgeId) -> VertexId {
        g.other(e, self.head[e as usize])
    }

    pub fn orientation(&self) -> Orientation {
        Orientation { head: self.head.clone() }
    }

    pub fn is_complete(&self) -> bool {
        !self.colour.contains(&UNDECORATED)
    }
}

/// Head of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub head: Vec<VertexId>,
}

impl Orientation {
    pub fn reversed(&self, g: &LatticeGraph) -> Orientation {
        Orientation { head: self.head.iter().enumerate().map(|(e, &h)| g.other(e as EdgeId, h)).collect() }
    }
}

/// A decoration with the hierarchy it was built on and run statistics.
#[derive(Clone, Debug)]
pub struct Decorated {
    pub decoration: Decoration,
    pub hierarchy: Option<ClusterBoundary>,
    /// Hierarchy of a decorator that works without boundaries.
    pub tree: Option<HierarchyTree>,
    /// Vertices the decoration is guaranteed on (box windows).
    pub mask: Option<Vec<bool>>,
    pub stats: BTreeMap<String, f64>,
}

impl Decorated {
    pub(crate) fn new(decoration: Decoration) -> Decorated {
        Decorated { decoration, hierarchy: None, tree: None, mask: None, stats: BTreeMap::new() }
    }

    pub fn hierarchy_tree(&self) -> Option<&HierarchyTree> {
        self.hierarchy.as_ref().map(|h| &h.tree).or(self.tree.as_ref())
    }

    pub(crate) fn stat(&mut self, key: &str, value: f64) {
        self.stats.insert(key.to_string(), value);
    }
}

/// Vertices at distance at least `margin` from the window border.
pub(crate) fn interior_mask(g: &LatticeGraph, margin: u32) -> Vec<bool> {
    let border: Vec<VertexId> = (0..g.n() as VertexId).filter(|&v| g.is_border(v)).collect();
    if border.is_empty() {
        return vec![true; g.n()];
    }
    g.bfs(&border, margin).into_iter().map(|d| d >= margin).collect()
}

/// Orients the colour classes. On a torus every class must be a family of
/// contractible cycles; in a box, classes that are not cycles stay
/// undecorated and only vertices `2k` away from the border are promised.
pub(crate) fn finish(g: &LatticeGraph, colour: &[u8], d: usize, field: &LabelField, k: usize) -> Result<Decorated> {
    match g.topology {
        Topology::Torus => {
            let dec = orient_cycles(g, colour, d, field)?;
            reject_wrapping(g, &dec)?;
            Ok(Decorated::new(dec))
        }
        Topology::Box => {
            let (dec, open) = orient_cycles_lenient(g, colour, d, field)?;
            let mut out = Decorated::new(dec);
            out.mask = Some(interior_mask(g, 2 * k as u32));
            out.stat("open_components", open as f64);
            Ok(out)
        }
    }
}

pub(crate) fn reject_wrapping(g: &LatticeGraph, dec: &Decoration) -> Result<()> {
    let census = monochrome_components(g, dec);
    match census.components.iter().find(|c| !c.contractible()) {
        Some(c) => Err(Error::WrappingMonochromeCycle(c.edges[0])),
        None => Ok(()),
    }
}
