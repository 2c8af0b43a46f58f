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

//! Seeded per-vertex labels.
//!
//! `label(v, channel)` is a ChaCha8 keystream word addressed by
//! `(channel, v)` under a key derived from the master seed, the graph
//! descriptor and the retry epoch, so any label can be evaluated on its own.

use crate::lattice::{LatticeGraph, VertexId};
use crate::{Error, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};
use std::sync::Arc;

/// Channel namespaces. Each module draws only from its own range.
pub mod channels {
    pub struct Namespace {
        pub module: &'static str,
        pub start: u64,
        pub len: u64,
    }

    pub const NAMESPACES: &[Namespace] = &[
        Namespace { module: "hierarchy", start: 0x0000, len: 0x1000 },
        Namespace { module: "decorators", start: 0x1000, len: 0x1000 },
        Namespace { module: "derived", start: 0x2000, len: 0x100 },
        Namespace { module: "verify", start: 0x2100, len: 0x100 },
    ];

    pub mod hierarchy {
        pub const COLOUR: u64 = 0;
        pub const FACE_COIN: u64 = 1;
        /// One channel per coarsening round.
        pub const COARSEN: u64 = 0x100;
        pub const COARSEN_ROUNDS: u64 = 0x100;
    }

    pub mod decorators {
        pub const CYCLE_EDGE: u64 = 0x1000;
        pub const CYCLE_DIR: u64 = 0x1001;
        pub const SQ_ANCHOR: u64 = 0x1010;
        pub const SQ_C4: u64 = 0x1011;
        pub const SQ_IFACE: u64 = 0x1012;
        pub const TRI_GROUP_DIR: u64 = 0x1020;
        pub const TRI_ANCHOR: u64 = 0x1021;
        pub const TRI_C4: u64 = 0x1022;
        pub const TRI_BLUE_DIR: u64 = 0x1023;
        pub const TRI_IFACE: u64 = 0x1024;
        pub const TRI_SEAM: u64 = 0x1025;
        pub const KAG_PATTERN: u64 = 0x1030;
        pub const ORI_PATTERN: u64 = 0x1040;
        pub const ORI_EULER_START: u64 = 0x1041;
        pub const ORI_EULER_DIR: u64 = 0x1042;
        pub const GRID_GROUP: u64 = 0x1050;
        pub const GRID_PAIR: u64 = 0x1051;
        pub const GRID_ANCHOR: u64 = 0x1052;
        pub const GRID_C4: u64 = 0x1053;
        pub const GRID_SEAM: u64 = 0x1054;
        pub const PROD_SIDE: u64 = 0x1061;
        pub const PROD_RESIDUAL: u64 = 0x1062;
        pub const PROD_EULER_DIR: u64 = 0x1063;
        /// One channel per selection round of the product layer set.
        pub const PROD_SET: u64 = 0x1080;
        pub const PROD_SET_ROUNDS: u64 = 0x40;
        /// Toast centre rounds, `TOAST + 64 * scale + round`.
        pub const TOAST: u64 = 0x1400;
        pub const TOAST_LEN: u64 = 0x400;
    }

    pub mod derived {
        pub const CYCLE_PHASE: u64 = 0x2000;
        pub const LG_MATCH: u64 = 0x2001;
    }

    pub mod verify {
        pub const PROBE: u64 = 0x2100;
    }

    /// Every fixed channel with the module that owns it.
    pub fn registry() -> Vec<(&'static str, u64, u64)> {
        use decorators as d;
        vec![
            ("hierarchy", hierarchy::COLOUR, 1),
            ("hierarchy", hierarchy::FACE_COIN, 1),
            ("hierarchy", hierarchy::COARSEN, hierarchy::COARSEN_ROUNDS),
            ("decorators", d::CYCLE_EDGE, 1),
            ("decorators", d::CYCLE_DIR, 1),
            ("decorators", d::SQ_ANCHOR, 1),
            ("decorators", d::SQ_C4, 1),
            ("decorators", d::SQ_IFACE, 1),
            ("decorators", d::TRI_GROUP_DIR, 1),
            ("decorators", d::TRI_ANCHOR, 1),
            ("decorators", d::TRI_C4, 1),
            ("decorators", d::TRI_BLUE_DIR, 1),
            ("decorators", d::TRI_IFACE, 1),
            ("decorators", d::TRI_SEAM, 1),
            ("decorators", d::KAG_PATTERN, 1),
            ("decorators", d::ORI_PATTERN, 1),
            ("decorators", d::ORI_EULER_START, 1),
            ("decorators", d::ORI_EULER_DIR, 1),
            ("decorators", d::GRID_GROUP, 1),
            ("decorators", d::GRID_PAIR, 1),
            ("decorators", d::GRID_ANCHOR, 1),
            ("decorators", d::GRID_C4, 1),
            ("decorators", d::GRID_SEAM, 1),
            ("decorators", d::PROD_SET, d::PROD_SET_ROUNDS),
            ("decorators", d::PROD_SIDE, 1),
            ("decorators", d::PROD_RESIDUAL, 1),
            ("decorators", d::PROD_EULER_DIR, 1),
            ("decorators", d::TOAST, d::TOAST_LEN),
            ("derived", derived::CYCLE_PHASE, 1),
            ("derived", derived::LG_MATCH, 1),
            ("verify", verify::PROBE, 1),
        ]
    }
}

#[derive(Clone)]
struct Overlay {
    inside: Arc<Vec<bool>>,
    alt_seed: u64,
    key: [u8; 32],
}

/// Deterministic iid uniform labels indexed by vertex and channel.
#[derive(Clone)]
pub struct LabelField {
    seed: u64,
    graph_id: u64,
    epoch: u32,
    path: Vec<u8>,
    key: [u8; 32],
    overlay: Option<Overlay>,
    remap: Option<Arc<Vec<VertexId>>>,
}

impl std::fmt::Debug for LabelField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LabelField")
            .field("seed", &self.seed)
            .field("graph_id", &self.graph_id)
            .field("epoch", &self.epoch)
            .finish_non_exhaustive()
    }
}

fn derive_key(seed: u64, graph_id: u64, epoch: u32, tag: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"schreier-lab/labels/v1");
    h.update(seed.to_le_bytes());
    h.update(graph_id.to_le_bytes());
    h.update(epoch.to_le_bytes());
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag);
    h.finalize().into()
}

pub fn graph_id(descriptor: &str) -> u64 {
    let d = Sha256::digest(descriptor.as_bytes());
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

fn keystream_word(key: &[u8; 32], v: u64, channel: u64) -> u64 {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(channel);
    rng.set_word_pos(u128::from(v) * 2);
    rng.next_u64()
}

/// Maps a 64-bit label to `[0, 1)`.
pub fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl LabelField {
    pub fn new(seed: u64, g: &LatticeGraph) -> LabelField {
        Self::from_parts(seed, graph_id(&g.descriptor()))
    }

    pub fn from_parts(seed: u64, graph_id: u64) -> LabelField {
        let mut f = LabelField { seed, graph_id, epoch: 0, path: Vec::new(), key: [0; 32], overlay: None, remap: None };
        f.rekey();
        f
    }

    fn rekey(&mut self) {
        self.key = derive_key(self.seed, self.graph_id, self.epoch, &self.path);
        if let Some(o) = &mut self.overlay {
            let mut t = self.path.clone();
            t.extend_from_slice(b"/overlay/");
            t.extend_from_slice(&o.alt_seed.to_le_bytes());
            o.key = derive_key(self.seed, self.graph_id, self.epoch, &t);
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    /// Fresh, independent labels for retry number `epoch`.
    pub fn with_epoch(&self, epoch: u32) -> LabelField {
        let mut f = self.clone();
        f.epoch = epoch;
        f.rekey();
        f
    }

    /// Independent sub-field, for running a pipeline on a derived graph.
    pub fn derive(&self, tag: &str) -> LabelField {
        let mut f = self.clone();
        f.path.push(b'/');
        f.path.extend_from_slice(tag.as_bytes());
        f.rekey();
        f
    }

    /// Labels of a view graph read through `map` (view vertex -> base vertex).
    pub fn through(&self, map: Arc<Vec<VertexId>>) -> LabelField {
        let mut f = self.clone();
        f.remap = Some(map);
        f
    }

    /// Same labels on `inside`, fresh labels drawn from `alt_seed` elsewhere.
    /// `inside` is indexed by base vertex ids.
    pub fn resampled_outside(&self, inside: Arc<Vec<bool>>, alt_seed: u64) -> LabelField {
        let mut f = self.clone();
        f.overlay = Some(Overlay { inside, alt_seed, key: [0; 32] });
        f.rekey();
        f
    }

    /// Raw 64-bit label.
    pub fn label(&self, v: VertexId, channel: u64) -> u64 {
        let v = match &self.remap {
            Some(m) => m[v as usize],
            None => v,
        };
        if let Some(o) = &self.overlay {
            if !o.inside[v as usize] {
                return keystream_word(&o.key, u64::from(v), channel);
            }
        }
        keystream_word(&self.key, u64::from(v), channel)
    }

    pub fn uniform(&self, v: VertexId, channel: u64) -> f64 {
        unit(self.label(v, channel))
    }

    /// Fair coin from a single vertex label.
    pub fn coin(&self, v: VertexId, channel: u64) -> bool {
        self.label(v, channel) >> 63 == 1
    }

    /// Permutation-invariant combination of the labels of `set`.
    pub fn joint_label(&self, set: &[VertexId], channel: u64) -> Result<u64> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut ls: Vec<(u64, VertexId)> = set.iter().map(|&v| (self.label(v, channel), v)).collect();
        ls.sort_unstable();
        let mut h = Sha256::new();
        h.update(channel.to_le_bytes());
        for (l, _) in &ls {
            h.update(l.to_le_bytes());
        }
        let d = h.finalize();
        Ok(u64::from_le_bytes(d[..8].try_into().expect("8 bytes")))
    }

    /// Uniform index in `0..alternatives` driven by the joint label.
    pub fn choose(&self, set: &[VertexId], channel: u64, alternatives: usize) -> Result<usize> {
        if alternatives == 0 {
            return Err(Error::ZeroAlternatives);
        }
        let j = self.joint_label(set, channel)?;
        Ok(((u128::from(j) * alternatives as u128) >> 64) as usize)
    }

    /// Vertex of `set` with the largest label (vertex id breaks ties).
    pub fn argmax(&self, set: &[VertexId], channel: u64) -> Result<VertexId> {
        set.iter().map(|&v| (self.label(v, channel), v)).max().map(|(_, v)| v).ok_or(Error::EmptySet)
    }

    /// Strict order on vertices by label, id tiebreak.
    pub fn greater(&self, a: VertexId, b: VertexId, channel: u64) -> bool {
        (self.label(a, channel), a) > (self.label(b, channel), b)
    }
}
