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

//! Strong orientation of monochromatic cycles.

use super::{Decoration, UNDECORATED};
use crate::lattice::{EdgeId, LatticeGraph, VertexId};
use crate::rng::channels::decorators::{CYCLE_DIR, CYCLE_EDGE};
use crate::rng::LabelField;
use crate::{Error, Result};

/// Orients every monochromatic cycle of `colour`: the edge with the largest
/// joint endpoint label is directed from its larger-label endpoint to the
/// smaller one and the rest of the cycle follows.
pub fn orient_cycles(g: &LatticeGraph, colour: &[u8], d: usize, field: &LabelField) -> Result<Decoration> {
    let (dec, bad) = orient(g, colour, d, field, true)?;
    debug_assert_eq!(bad, 0);
    Ok(dec)
}

/// As [`orient_cycles`], but components that are not cycles are left
/// undecorated; returns how many there were.
pub fn orient_cycles_lenient(
    g: &LatticeGraph,
    colour: &[u8],
    d: usize,
    field: &LabelField,
) -> Result<(Decoration, usize)> {
    orient(g, colour, d, field, false)
}

fn orient(g: &LatticeGraph, colour: &[u8], d: usize, field: &LabelField, strict: bool) -> Result<(Decoration, usize)> {
    if colour.len() != g.m() {
        return Err(Error::Invalid(format!("{} colours for {} edges", colour.len(), g.m())));
    }
    let mut dec = Decoration::empty(g, d);
    let mut seen = vec![false; g.m()];
    let mut bad = 0usize;
    let same = |v: VertexId, c: u8| -> Vec<EdgeId> {
        g.neighbors(v).iter().filter(|&&(_, e)| colour[e as usize] == c).map(|&(_, e)| e).collect()
    };
    let mut comp: Vec<EdgeId> = Vec::new();
    let mut stack: Vec<EdgeId> = Vec::new();
    for e0 in 0..g.m() as EdgeId {
        let c = colour[e0 as usize];
        if seen[e0 as usize] || c == UNDECORATED {
            continue;
        }
        if c as usize >= d {
            return Err(Error::Invalid(format!("edge {e0} has colour {c} >= {d}")));
        }
        comp.clear();
        seen[e0 as usize] = true;
        stack.push(e0);
        let mut cycle = true;
        let mut witness = 0;
        while let Some(e) = stack.pop() {
            comp.push(e);
            let (u, v) = g.endpoints(e);
            for x in [u, v] {
                let inc = same(x, c);
                if inc.len() != 2 {
                    cycle = false;
                    witness = x;
                }
                for f in inc {
                    if !seen[f as usize] {
                        seen[f as usize] = true;
                        stack.push(f);
                    }
                }
            }
        }
        if !cycle {
            if strict {
                return Err(Error::NonCycleComponent(witness));
            }
            bad += 1;
            continue;
        }
        let mut best = (0u64, 0 as EdgeId);
        for &e in &comp {
            let (u, v) = g.endpoints(e);
            best = best.max((field.joint_label(&[u, v], CYCLE_EDGE)?, e));
        }
        let start = best.1;
        let (u, v) = g.endpoints(start);
        let (tail0, head0) = if field.greater(u, v, CYCLE_DIR) { (u, v) } else { (v, u) };
        let mut e = start;
        let mut head = head0;
        loop {
            dec.colour[e as usize] = c;
            dec.head[e as usize] = head;
            let next = same(head, c).into_iter().find(|&f| f != e).expect("cycle vertex has two edges");
            if next == start {
                break;
            }
            head = g.other(next, head);
            e = next;
        }
        debug_assert_eq!(g.other(start, head0), tail0);
    }
    Ok((dec, bad))
}
