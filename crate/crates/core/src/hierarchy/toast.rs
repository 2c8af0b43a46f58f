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

//! Toast hierarchies from nested scales of discrete centre sets.
//!
//! Scale `i` uses centres `r_i`-apart with `r_i = r_0 * 4^i` and balls of
//! radius `(r_i - s) / 2` around them, so balls of one scale are more than
//! `s` apart. Balls are placed from the top scale down; a ball is kept when
//! every vertex within `s - 1` of it lies in one already placed region (or
//! in none), which then becomes its parent.

use super::HierarchyTree;
use crate::lattice::{LatticeGraph, VertexId};
use crate::rng::channels::decorators::{TOAST, TOAST_LEN};
use crate::rng::LabelField;
use crate::{Error, Result};

const ROUND_CHANNELS: u64 = 64;

/// Maximal `r`-discrete vertex set (pairwise distance `> r`, every vertex
/// within `r` of the set), grown in rounds: a vertex joins when it is not
/// yet covered and its label beats every other uncovered vertex within `r`.
/// Round `j` reads channel `channel + j mod 64`.
pub fn maximal_r_discrete(g: &LatticeGraph, field: &LabelField, r: u32, channel: u64) -> Vec<VertexId> {
    let n = g.n();
    if r == 0 {
        return (0..n as VertexId).collect();
    }
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    let mut round = 0u64;
    let none = (0u64, u32::MAX);
    let mut cur = vec![none; n];
    let mut next = vec![none; n];
    while covered.iter().any(|&c| !c) {
        let ch = channel + round % ROUND_CHANNELS;
        for v in 0..n {
            cur[v] = if covered[v] { none } else { (field.label(v as VertexId, ch), v as u32) };
        }
        let own = cur.clone();
        for _ in 0..r {
            for v in 0..n {
                let mut best = cur[v];
                for &(w, _) in g.neighbors(v as VertexId) {
                    if cur[w as usize].1 != u32::MAX && (best.1 == u32::MAX || cur[w as usize] > best) {
                        best = cur[w as usize];
                    }
                }
                next[v] = best;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        let fresh: Vec<VertexId> = (0..n).filter(|&v| !covered[v] && cur[v] == own[v]).map(|v| v as VertexId).collect();
        let dist = g.bfs(&fresh, r);
        for v in 0..n {
            if dist[v] != u32::MAX {
                covered[v] = true;
            }
        }
        out.extend(fresh);
        round += 1;
    }
    out.sort_unstable();
    out
}

/// Base separation of centres at the lowest scale for spacing `s`.
pub fn toast_r0(s: usize) -> usize {
    2 * s + s.div_ceil(4)
}

/// Radii of the usable scales: balls must fit in the smallest window side.
pub fn toast_scales(g: &LatticeGraph, s: usize) -> Vec<(usize, usize)> {
    let side = g.dims.iter().copied().min().unwrap_or(0);
    let mut out = Vec::new();
    let mut r = toast_r0(s);
    for _ in 0..(TOAST_LEN / ROUND_CHANNELS) {
        let rho = (r - s) / 2;
        if 2 * rho + 1 > side {
            break;
        }
        out.push((r, rho));
        r *= 4;
    }
    out
}

/// An `s`-spaced toast hierarchy on any window.
pub fn toast_hierarchy(g: &LatticeGraph, field: &LabelField, s: usize) -> Result<HierarchyTree> {
    if s == 0 {
        return Err(Error::Invalid("toast spacing must be positive".into()));
    }
    let scales = toast_scales(g, s);
    if scales.is_empty() {
        return Err(Error::WindowTooSmall(format!(
            "no toast scale fits: need a side of at least {} for spacing {s}",
            2 * ((toast_r0(s) - s) / 2) + 1
        )));
    }
    let n = g.n();
    // Region label per vertex (deepest placed region), 0 = root.
    let mut owner = vec![0u32; n];
    let mut parent = vec![0u32];
    for (i, &(r, rho)) in scales.iter().enumerate().rev() {
        let centres = maximal_r_discrete(g, field, r as u32, TOAST + ROUND_CHANNELS * i as u64);
        let mut placed = Vec::new();
        for &x in &centres {
            let near = g.bfs(&[x], (rho + s - 1) as u32);
            let mut host = None;
            let mut ok = true;
            for v in 0..n {
                if near[v] == u32::MAX {
                    continue;
                }
                match host {
                    None => host = Some(owner[v]),
                    Some(h) if h != owner[v] => {
                        ok = false;
                        break;
                    }
                    _ => {}
                }
            }
            if ok {
                let ball: Vec<usize> = (0..n).filter(|&v| near[v] <= rho as u32).collect();
                placed.push((host.unwrap_or(0), ball));
            }
        }
        // Balls of one scale are more than s apart, so they are placed together.
        for (host, ball) in placed {
            let id = parent.len() as u32;
            parent.push(host);
            for v in ball {
                owner[v] = id;
            }
        }
    }
    let mut t = HierarchyTree::from_assignment(&owner, &parent, 0);
    t.spacing = Some(s);
    Ok(t)
}
