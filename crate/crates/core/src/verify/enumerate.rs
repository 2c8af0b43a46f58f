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

//! Exhaustive enumeration of balanced orientations of small graphs.
//!
//! Edges are decided in id order, each with its stored orientation first.
//! A branch is cut as soon as some vertex cannot reach balance with its
//! remaining undecided edges.

use crate::decorators::Orientation;
use crate::lattice::{EdgeId, LatticeGraph, VertexId};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const MAX_EDGES: usize = 26;
/// Edges whose choices are split across workers.
const SHARD_EDGES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub edges: usize,
    pub count: u64,
    /// Orientations on which the predicate failed.
    pub violations: u64,
    pub first_violation: Option<Vec<VertexId>>,
}

impl EnumerationSummary {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

struct Search<'a> {
    g: &'a LatticeGraph,
    /// out minus in, per vertex
    bal: Vec<i32>,
    /// undecided incident edges, per vertex
    left: Vec<i32>,
    head: Vec<VertexId>,
}

impl<'a> Search<'a> {
    fn new(g: &'a LatticeGraph) -> Search<'a> {
        let left = (0..g.n() as VertexId).map(|v| g.deg(v) as i32).collect();
        Search { g, bal: vec![0; g.n()], left, head: (0..g.m() as EdgeId).map(|e| g.endpoints(e).1).collect() }
    }

    fn feasible(&self, v: VertexId) -> bool {
        let (b, l) = (self.bal[v as usize], self.left[v as usize]);
        b.abs() <= l && (b + l) % 2 == 0
    }

    /// Orients `e` towards `h`; false if that rules out balance.
    fn push(&mut self, e: EdgeId, forward: bool) -> bool {
        let (a, b) = self.g.endpoints(e);
        let (t, h) = if forward { (a, b) } else { (b, a) };
        self.head[e as usize] = h;
        self.bal[t as usize] += 1;
        self.bal[h as usize] -= 1;
        self.left[a as usize] -= 1;
        self.left[b as usize] -= 1;
        self.feasible(a) && self.feasible(b)
    }

    fn pop(&mut self, e: EdgeId) {
        let (a, b) = self.g.endpoints(e);
        let h = self.head[e as usize];
        let t = if h == b { a } else { b };
        self.bal[t as usize] -= 1;
        self.bal[h as usize] += 1;
        self.left[a as usize] += 1;
        self.left[b as usize] += 1;
    }

    fn run(&mut self, e: usize, visit: &mut dyn FnMut(&[VertexId])) {
        if e == self.g.m() {
            visit(&self.head);
            return;
        }
        for fw in [true, false] {
            if self.push(e as EdgeId, fw) {
                self.run(e + 1, visit);
            }
            self.pop(e as EdgeId);
        }
    }
}

fn initially_feasible(g: &LatticeGraph) -> bool {
    (0..g.n() as VertexId).all(|v| g.deg(v).is_multiple_of(2))
}

/// Calls `visit` on every balanced orientation of `g`; returns the count.
pub fn enumerate_balanced_orientations(g: &LatticeGraph, mut visit: impl FnMut(&Orientation)) -> Result<u64> {
    if g.m() > MAX_EDGES {
        return Err(Error::TooLarge(g.m()));
    }
    let mut count = 0u64;
    if !initially_feasible(g) {
        return Ok(0);
    }
    let mut s = Search::new(g);
    s.run(0, &mut |head| {
        count += 1;
        visit(&Orientation { head: head.to_vec() });
    });
    Ok(count)
}

/// Parallel enumeration with a predicate. The first `8` edge choices are
/// spread over the rayon pool; counts and verdicts are merged, so the result
/// does not depend on scheduling. `max_edges` bounds the search.
pub fn enumerate_sharded(
    g: &LatticeGraph,
    max_edges: usize,
    pred: impl Fn(&Orientation) -> bool + Sync,
) -> Result<EnumerationSummary> {
    if g.m() > max_edges {
        return Err(Error::TooLarge(g.m()));
    }
    let mut out = EnumerationSummary { edges: g.m(), count: 0, violations: 0, first_violation: None };
    if !initially_feasible(g) {
        return Ok(out);
    }
    let s = SHARD_EDGES.min(g.m());
    let parts: Vec<(u64, u64, Option<Vec<VertexId>>)> = (0..1u32 << s)
        .into_par_iter()
        .map(|prefix| {
            let mut st = Search::new(g);
            let mut pushed = 0;
            let mut ok = true;
            for i in 0..s {
                pushed += 1;
                if !st.push(i as EdgeId, prefix >> i & 1 == 0) {
                    ok = false;
                    break;
                }
            }
            let (mut count, mut bad, mut first) = (0u64, 0u64, None);
            if ok {
                st.run(s, &mut |head| {
                    count += 1;
                    let or = Orientation { head: head.to_vec() };
                    if !pred(&or) {
                        bad += 1;
                        if first.is_none() {
                            first = Some(or.head);
                        }
                    }
                });
            }
            for i in (0..pushed).rev() {
                st.pop(i as EdgeId);
            }
            (count, bad, first)
        })
        .collect();
    for (c, b, f) in parts {
        out.count += c;
        out.violations += b;
        if out.first_violation.is_none() {
            out.first_violation = f;
        }
    }
    Ok(out)
}
