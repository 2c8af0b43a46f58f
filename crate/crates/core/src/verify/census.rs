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

use crate::decorators::{Decoration, UNDECORATED};
use crate::lattice::{EdgeId, LatticeGraph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Cycle,
    Path,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub colour: u8,
    pub kind: ComponentKind,
    /// In walk order for cycles.
    pub edges: Vec<EdgeId>,
    /// Winding vector of the closed walk (cycles only; zero otherwise).
    pub winding: Vec<i32>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contractible(&self) -> bool {
        self.winding.iter().all(|&w| w == 0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub components: Vec<Component>,
}

impl Census {
    /// Cycle-length histogram of one colour.
    pub fn cycle_lengths(&self, colour: u8) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.components {
            if c.colour == colour && c.kind == ComponentKind::Cycle {
                *h.entry(c.len()).or_insert(0) += 1;
            }
        }
        h
    }

    pub fn non_cycles(&self) -> usize {
        self.components.iter().filter(|c| c.kind != ComponentKind::Cycle).count()
    }

    pub fn wrapping(&self) -> usize {
        self.components.iter().filter(|c| c.kind == ComponentKind::Cycle && !c.contractible()).count()
    }

    /// Every component is a contractible cycle.
    pub fn all_contractible_cycles(&self) -> bool {
        self.non_cycles() == 0 && self.wrapping() == 0
    }
}

/// Splits every colour class into connected components and classifies them.
pub fn monochrome_components(g: &LatticeGraph, dec: &Decoration) -> Census {
    let k = g.naxes();
    let mut seen = vec![false; g.m()];
    let mut comps = Vec::new();
    let class_deg = |v: VertexId, c: u8| g.neighbors(v).iter().filter(|&&(_, e)| dec.colour[e as usize] == c).count();
    for e0 in 0..g.m() as EdgeId {
        let c = dec.colour[e0 as usize];
        if seen[e0 as usize] || c == UNDECORATED {
            continue;
        }
        let mut edges = Vec::new();
        let mut verts = Vec::new();
        let mut stack = vec![e0];
        seen[e0 as usize] = true;
        while let Some(e) = stack.pop() {
            edges.push(e);
            let (u, v) = g.endpoints(e);
            for x in [u, v] {
                verts.push(x);
                for &(_, f) in g.neighbors(x) {
                    if !seen[f as usize] && dec.colour[f as usize] == c {
                        seen[f as usize] = true;
                        stack.push(f);
                    }
                }
            }
        }
        verts.sort_unstable();
        verts.dedup();
        let degs: Vec<usize> = verts.iter().map(|&v| class_deg(v, c)).collect();
        let kind = if degs.iter().all(|&x| x == 2) && edges.len() == verts.len() {
            ComponentKind::Cycle
        } else if degs.iter().all(|&x| x <= 2) && edges.len() + 1 == verts.len() {
            ComponentKind::Path
        } else {
            ComponentKind::Other
        };
        let mut winding = vec![0i32; k];
        if kind == ComponentKind::Cycle {
            let start = g.endpoints(e0).0;
            let mut order = Vec::with_capacity(edges.len());
            let (mut v, mut e) = (start, e0);
            loop {
                order.push(e);
                g.add_dart_shift(e, v, &mut winding);
                v = g.other(e, v);
                let next =
                    g.neighbors(v).iter().find(|&&(_, f)| f != e && dec.colour[f as usize] == c).map(|&(_, f)| f);
                match next {
                    Some(f) if f != e0 => e = f,
                    _ => break,
                }
            }
            edges = order;
        }
        comps.push(Component { colour: c, kind, edges, winding });
    }
    Census { components: comps }
}
