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

//! JSON persistence (schema 1), SVG rendering, run configurations and the
//! experiment suites.

mod run;
pub mod suites;
mod svg;

pub use run::{base_graph, generate, Generated, Pipeline, RunConfig, PIPELINES};
pub use svg::{render_svg, Slice};

use crate::decorators::{Decoration, Orientation};
use crate::derived::{EdgeColouring, Matching};
use crate::hierarchy::{ClusterBoundary, HierarchyTree};
use crate::lattice::{EdgeId, GraphJson, Kind, LatticeGraph, Topology, VertexId};
use crate::verify::{
    check_balanced_masked, check_matching, check_proper, check_schreier_masked, monochrome_components, Report, Witness,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const SCHEMA: u32 = 1;

/// What a file carries besides its graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Decoration { d: usize, colour: Vec<u8>, head: Vec<VertexId> },
    Orientation { head: Vec<VertexId> },
    Colouring { colours: usize, colour: Vec<u8> },
    Matching { edges: Vec<EdgeId> },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Decoration { .. } => "decoration",
            Payload::Orientation { .. } => "orientation",
            Payload::Colouring { .. } => "colouring",
            Payload::Matching { .. } => "matching",
        }
    }
}

/// A generated artifact together with the graph it lives on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub schema: u32,
    pub config: RunConfig,
    pub retries: u32,
    pub graph: GraphJson,
    #[serde(flatten)]
    pub payload: Payload,
    /// Vertices the output is promised on; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<VertexId>>,
    /// Union of the cluster boundaries the construction used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<EdgeId>>,
    #[serde(default)]
    pub stats: BTreeMap<String, f64>,
}

impl OutputFile {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<OutputFile> {
        let f: OutputFile = serde_json::from_str(s)?;
        if f.schema != SCHEMA {
            return Err(Error::Invalid(format!("unsupported schema {}", f.schema)));
        }
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<OutputFile> {
        OutputFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn decoration(&self) -> Option<Decoration> {
        match &self.payload {
            Payload::Decoration { d, colour, head } => {
                Some(Decoration { d: *d, colour: colour.clone(), head: head.clone() })
            }
            _ => None,
        }
    }

    fn mask_bits(&self, n: usize) -> Result<Option<Vec<bool>>> {
        let Some(list) = &self.mask else { return Ok(None) };
        let mut bits = vec![false; n];
        for &v in list {
            *bits.get_mut(v as usize).ok_or_else(|| Error::Invalid(format!("mask vertex {v} out of range")))? = true;
        }
        Ok(Some(bits))
    }
}

/// Hierarchy dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyJson {
    pub schema: u32,
    pub kind: String,
    pub root: u32,
    /// `None` for the root.
    pub parent: Vec<Option<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<usize>,
    pub colours: usize,
    pub clusters: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_edges: Option<Vec<Vec<EdgeId>>>,
}

impl HierarchyJson {
    pub fn new(t: &HierarchyTree, hb: Option<&ClusterBoundary>) -> HierarchyJson {
        HierarchyJson {
            schema: SCHEMA,
            kind: "hierarchy".into(),
            root: t.root(),
            parent: (0..t.len() as u32).map(|c| t.parent(c)).collect(),
            eta: t.eta.clone(),
            spacing: t.spacing,
            colours: t.colours,
            clusters: t.clusters().to_vec(),
            boundary_edges: hb.map(|h| h.edges.clone()),
        }
    }

    /// Rebuilds the tree on a graph with `n` vertices.
    pub fn to_tree(&self, n: usize) -> Result<HierarchyTree> {
        let nc = self.clusters.len();
        if self.parent.len() != nc || self.root as usize >= nc {
            return Err(Error::Invalid("hierarchy tables disagree".into()));
        }
        let mut assign = vec![u32::MAX; n];
        for (c, vs) in self.clusters.iter().enumerate() {
            for &v in vs {
                let slot =
                    assign.get_mut(v as usize).ok_or_else(|| Error::Invalid(format!("vertex {v} out of range")))?;
                if *slot != u32::MAX {
                    return Err(Error::Invalid(format!("vertex {v} in two clusters")));
                }
                *slot = c as u32;
            }
        }
        if assign.contains(&u32::MAX) {
            return Err(Error::Invalid("hierarchy does not cover every vertex".into()));
        }
        let parent: Vec<u32> = self.parent.iter().enumerate().map(|(c, p)| p.unwrap_or(c as u32)).collect();
        let mut t = HierarchyTree::from_assignment(&assign, &parent, self.root);
        t.eta = self.eta.clone();
        t.spacing = self.spacing;
        t.colours = self.colours;
        Ok(t)
    }
}

pub(crate) fn boundary_union(hb: &ClusterBoundary) -> Vec<EdgeId> {
    let mut es: Vec<EdgeId> = hb.edges.iter().flatten().copied().collect();
    es.sort_unstable();
    es.dedup();
    es
}

/// Re-checks a file from scratch on the graph it carries.
pub fn verify_file(f: &OutputFile) -> Result<Report> {
    let g = f.graph.to_graph()?;
    let mask = f.mask_bits(g.n())?;
    Ok(verify_payload(&g, &f.payload, mask.as_deref()))
}

pub fn verify_payload(g: &LatticeGraph, payload: &Payload, mask: Option<&[bool]>) -> Report {
    match payload {
        Payload::Decoration { d, colour, head } => {
            let dec = Decoration { d: *d, colour: colour.clone(), head: head.clone() };
            let mut r = check_schreier_masked(g, &dec, mask);
            if r.ok() && g.topology == Topology::Torus && mask.is_none() {
                let census = monochrome_components(g, &dec);
                if g.kind == Kind::LineGraph {
                    // Lifted decorations make no promise about orbit lengths.
                    let detail = format!("{} components, {} wrapping", census.components.len(), census.wrapping());
                    r.pass("census", &detail);
                    return r;
                }
                match census
                    .components
                    .iter()
                    .find(|c| !c.contractible() || c.kind != crate::verify::ComponentKind::Cycle)
                {
                    None => r.pass("census", &format!("{} contractible cycles", census.components.len())),
                    Some(c) => r.fail("census", "wrapping or non-cycle component", Witness::edges(c.edges.clone())),
                }
            }
            r
        }
        Payload::Orientation { head } => check_balanced_masked(g, &Orientation { head: head.clone() }, mask),
        Payload::Colouring { colours, colour } => {
            check_proper(g, &EdgeColouring { colour: colour.clone(), colours: *colours })
        }
        Payload::Matching { edges } => check_matching(g, &Matching { edges: edges.clone() }),
    }
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Invalid(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Process exit code for an error: 3 when retries ran out, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RetriesExhausted(..) => 3,
        _ => 2,
    }
}
