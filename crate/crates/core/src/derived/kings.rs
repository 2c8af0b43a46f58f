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

use crate::decorators::{schreier_square_using, Decorated, Decoration};
use crate::hierarchy::HierarchySource;
use crate::lattice::{square_sublattices, LatticeGraph};
use crate::rng::LabelField;
use crate::Result;
use std::sync::Arc;

const VIEWS: [&str; 3] = ["axis", "even", "odd"];

/// Schreier decoration of the king's graph with four colours: the axis
/// lattice takes colours 0 and 1, both diagonal lattices take 2 and 3.
pub fn square_diag_decorate(
    g: &LatticeGraph,
    field: &LabelField,
    source: HierarchySource,
    k: usize,
) -> Result<Decorated> {
    let views = square_sublattices(g)?;
    let mut dec = Decoration::empty(g, 4);
    let mut out_stats = Vec::new();
    for (i, sv) in views.iter().enumerate() {
        let f = field.derive(VIEWS[i]).through(Arc::new(sv.vmap.clone()));
        let part = schreier_square_using(&sv.graph, &f, source, k)?;
        let offset = if i == 0 { 0 } else { 2 };
        for (ve, &be) in sv.emap.iter().enumerate() {
            dec.colour[be as usize] = part.decoration.colour[ve] + offset;
            dec.head[be as usize] = sv.vmap[part.decoration.head[ve] as usize];
        }
        for (key, v) in &part.stats {
            out_stats.push((format!("{}.{key}", VIEWS[i]), *v));
        }
    }
    let mut out = Decorated::new(dec);
    for (key, v) in out_stats {
        out.stat(&key, v);
    }
    Ok(out)
}
