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

use super::check_balanced;
use crate::decorators::Orientation;
use crate::lattice::{EdgeId, Kind, LatticeGraph};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rung counts of a balanced orientation of `H x C_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityInvariant {
    /// `n[i]`: rungs oriented from layer `i` to layer `i + 1`.
    pub n: Vec<usize>,
    /// `back[i]`: rungs oriented from layer `i + 1` to layer `i`.
    pub back: Vec<usize>,
    pub constant: bool,
    /// `n[i] + back[i] = |V(H)|` for every `i`.
    pub complementary: bool,
    /// Sign of `2 n[0] - |V(H)|`.
    pub sign: i32,
}

/// Counts forward rungs between consecutive layers of the product `g` of
/// `h` with a cycle.
pub fn parity_invariant(h: &LatticeGraph, g: &LatticeGraph, or: &Orientation) -> Result<ParityInvariant> {
    let nh = h.n();
    if g.kind != Kind::Product || nh == 0 || !g.n().is_multiple_of(nh) {
        return Err(Error::WrongKind { expected: "product", got: g.kind.name().to_string() });
    }
    let report = check_balanced(g, or);
    if let Some(c) = report.first_failure() {
        let v = c.witness.as_ref().and_then(|w| w.vertices.first().copied()).unwrap_or(0);
        return Err(Error::NotBalanced(v));
    }
    let m = g.n() / nh;
    let mut n = vec![0usize; m];
    let mut back = vec![0usize; m];
    for e in 0..g.m() as EdgeId {
        if g.dir(e) != 1 {
            continue;
        }
        let (a, b) = g.endpoints(e);
        let i = a as usize / nh;
        debug_assert_eq!(b as usize / nh, (i + 1) % m);
        if or.head[e as usize] == b {
            n[i] += 1;
        } else {
            back[i] += 1;
        }
    }
    let constant = n.iter().all(|&x| x == n[0]);
    let complementary = n.iter().zip(&back).all(|(a, b)| a + b == nh);
    let sign = (2 * n[0]).cmp(&nh) as i32;
    Ok(ParityInvariant { n, back, constant, complementary, sign })
}
