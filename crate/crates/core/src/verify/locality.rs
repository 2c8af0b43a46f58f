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

use crate::decorators::Decoration;
use crate::lattice::{LatticeGraph, VertexId};
use crate::rng::channels::verify::PROBE;
use crate::rng::LabelField;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub vertex: VertexId,
    pub trials: usize,
    /// Reruns whose pipeline returned an error (not compared).
    pub errored: usize,
    /// First trial whose decoration at the vertex differed.
    pub changed_at: Option<usize>,
}

impl Probe {
    /// The decoration at the vertex never changed and at least one rerun
    /// was compared.
    pub fn stable(&self) -> bool {
        self.changed_at.is_none() && self.errored < self.trials
    }
}

fn local(g: &LatticeGraph, dec: &Decoration, v: VertexId) -> Vec<(u8, VertexId)> {
    g.neighbors(v).iter().map(|&(_, e)| (dec.colour[e as usize], dec.head[e as usize])).collect()
}

/// Reruns `pipeline` with the labels outside `region` resampled and checks
/// that the colours and heads of the edges at `v` stay the same.
pub fn locality_probe(
    g: &LatticeGraph,
    field: &LabelField,
    pipeline: impl Fn(&LabelField) -> Result<Decoration>,
    v: VertexId,
    region: &[VertexId],
    trials: usize,
) -> Result<Probe> {
    let base = pipeline(field)?;
    let want = local(g, &base, v);
    let mut inside = vec![false; g.n()];
    for &x in region {
        inside[x as usize] = true;
    }
    let inside = Arc::new(inside);
    let mut probe = Probe { vertex: v, trials, errored: 0, changed_at: None };
    for t in 0..trials {
        let alt = field.label(v, PROBE) ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        match pipeline(&field.resampled_outside(inside.clone(), alt)) {
            Ok(dec) => {
                if local(g, &dec, v) != want {
                    probe.changed_at = Some(t);
                    break;
                }
            }
            Err(_) => probe.errored += 1,
        }
    }
    Ok(probe)
}
