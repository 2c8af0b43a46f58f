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

//! Run configurations and the pipeline dispatcher behind `generate`.

use super::{HierarchyJson, OutputFile, Payload, SCHEMA};
use crate::decorators::{
    balanced_orientation_planar_using, find_perfect_matching, schreier_grid_d, schreier_kagome_using, schreier_product,
    schreier_square_using, schreier_t3464, schreier_triangular_using, with_retries, Decorated, ProductOptions, Retried,
};
use crate::derived::{
    lift_to_line_graph, light, line_graph_matching, matching_from_colouring, proper_colouring_from_decoration,
    square_diag_decorate,
};
use crate::hierarchy::HierarchySource;
use crate::lattice::{
    build_archimedean, build_grid_d, build_product_with_cycle, build_square_diag, custom, line_graph, GraphJson, Kind,
    LatticeGraph, Topology, VertexId,
};
use crate::rng::LabelField;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Square,
    Triangular,
    Kagome,
    T3464,
    /// Balanced orientation of a planar lattice (`--kind`).
    Orientation,
    Grid,
    Product,
    SquareDiag,
    /// Proper 4-colouring of the square lattice.
    Colouring,
    /// Perfect matching of the square lattice.
    Matching,
    /// Decoration of the line graph of the square lattice.
    LineLift,
    /// Perfect matching of the line graph of the square lattice.
    LineMatching,
}

pub const PIPELINES: &[(&str, Pipeline)] = &[
    ("square", Pipeline::Square),
    ("triangular", Pipeline::Triangular),
    ("kagome", Pipeline::Kagome),
    ("t3464", Pipeline::T3464),
    ("orientation", Pipeline::Orientation),
    ("grid", Pipeline::Grid),
    ("product", Pipeline::Product),
    ("square-diag", Pipeline::SquareDiag),
    ("colouring", Pipeline::Colouring),
    ("matching", Pipeline::Matching),
    ("line-lift", Pipeline::LineLift),
    ("line-matching", Pipeline::LineMatching),
];

impl Pipeline {
    pub fn parse(s: &str) -> Option<Pipeline> {
        PIPELINES.iter().find(|(n, _)| *n == s).map(|&(_, p)| p)
    }

    pub fn name(self) -> &'static str {
        PIPELINES.iter().find(|(_, p)| *p == self).map(|(n, _)| *n).expect("listed")
    }
}

/// Everything that determines a run. Two runs with equal configs produce
/// byte-identical files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub pipeline: Pipeline,
    /// Lattice for `orientation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    pub dims: Vec<usize>,
    pub topology: Topology,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Dimension for `grid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub seed: u64,
    pub max_retries: u32,
    pub source: HierarchySource,
    /// Base graph `H` for `product`: `c<n>`, `k<a>,<b>` or `k44`-style.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default)]
    pub tightened: bool,
}

impl RunConfig {
    pub fn new(pipeline: Pipeline, dims: Vec<usize>, seed: u64) -> RunConfig {
        RunConfig {
            pipeline,
            kind: None,
            dims,
            topology: Topology::Torus,
            k: None,
            d: None,
            seed,
            max_retries: 16,
            source: HierarchySource::Percolation,
            base: None,
            tightened: false,
        }
    }

    pub fn spacing(&self) -> usize {
        self.k.unwrap_or(8)
    }

    fn planar_dims(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [w, h] => Ok((w, h)),
            [s] => Ok((s, s)),
            _ => Err(Error::UnsupportedDims(format!("{} needs WxH dims, got {:?}", self.pipeline.name(), self.dims))),
        }
    }

    /// The graph the pipeline decorates (before any line-graph step).
    pub fn base_graph(&self) -> Result<LatticeGraph> {
        use Pipeline as P;
        match self.pipeline {
            P::Square | P::Colouring | P::Matching | P::LineLift | P::LineMatching => {
                let (w, h) = self.planar_dims()?;
                build_archimedean(Kind::Square, w, h, self.topology)
            }
            P::Triangular | P::Kagome | P::T3464 => {
                let (w, h) = self.planar_dims()?;
                let kind = match self.pipeline {
                    P::Triangular => Kind::Triangular,
                    P::Kagome => Kind::Kagome,
                    _ => Kind::T3464,
                };
                build_archimedean(kind, w, h, self.topology)
            }
            P::Orientation => {
                let (w, h) = self.planar_dims()?;
                build_archimedean(self.kind.unwrap_or(Kind::Square), w, h, self.topology)
            }
            P::SquareDiag => {
                let (w, h) = self.planar_dims()?;
                build_square_diag(w, h, self.topology)
            }
            P::Grid => {
                let d = self.d.unwrap_or(3);
                let sides = match self.dims[..] {
                    [s] => vec![s; d],
                    _ => self.dims.clone(),
                };
                build_grid_d(d, &sides, self.topology)
            }
            P::Product => {
                let h = base_graph(self.base.as_deref().unwrap_or("c4"))?;
                let [m] = self.dims[..] else {
                    return Err(Error::UnsupportedDims(format!("product needs one cycle length, got {:?}", self.dims)));
                };
                build_product_with_cycle(&h, m)
            }
        }
    }
}

/// `c<n>` (cycle), `k<a>,<b>` or `k<a><b>` (complete bipartite, one digit each).
pub fn base_graph(name: &str) -> Result<LatticeGraph> {
    let bad = || Error::Invalid(format!("unknown base graph {name:?}"));
    if let Some(n) = name.strip_prefix('c') {
        let n: usize = n.parse().map_err(|_| bad())?;
        if n < 3 {
            return Err(bad());
        }
        let edges: Vec<(VertexId, VertexId)> = (0..n as VertexId).map(|i| (i, (i + 1) % n as VertexId)).collect();
        return custom(n, &edges);
    }
    let rest = name.strip_prefix('k').ok_or_else(bad)?;
    let (a, b) = match rest.split_once(',') {
        Some((a, b)) => (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?),
        None if rest.len() == 2 && rest.bytes().all(|c| c.is_ascii_digit()) => {
            ((rest.as_bytes()[0] - b'0') as usize, (rest.as_bytes()[1] - b'0') as usize)
        }
        None => return Err(bad()),
    };
    if a == 0 || b == 0 {
        return Err(bad());
    }
    let mut edges = Vec::with_capacity(a * b);
    for x in 0..a {
        for y in a..a + b {
            edges.push((x as VertexId, y as VertexId));
        }
    }
    custom(a + b, &edges)
}

/// A finished run.
#[derive(Clone, Debug)]
pub struct Generated {
    pub file: OutputFile,
    pub hierarchy: Option<HierarchyJson>,
    pub retries: u32,
    pub rejected: Vec<String>,
}

fn decorated_file(cfg: &RunConfig, g: &LatticeGraph, r: Retried<Decorated>) -> Generated {
    let out = r.value;
    let hierarchy = out.hierarchy_tree().map(|t| HierarchyJson::new(t, out.hierarchy.as_ref()));
    let boundary = out.hierarchy.as_ref().map(super::boundary_union);
    Generated {
        file: OutputFile {
            schema: SCHEMA,
            config: cfg.clone(),
            retries: r.retries,
            graph: GraphJson::from_graph(g),
            payload: Payload::Decoration {
                d: out.decoration.d,
                colour: out.decoration.colour,
                head: out.decoration.head,
            },
            mask: out.mask.map(|m| mask_list(&m)),
            boundary,
            stats: out.stats,
        },
        hierarchy,
        retries: r.retries,
        rejected: r.rejected,
    }
}

pub(crate) fn mask_list(m: &[bool]) -> Vec<VertexId> {
    (0..m.len() as VertexId).filter(|&v| m[v as usize]).collect()
}

fn plain_file(cfg: &RunConfig, g: &LatticeGraph, retries: u32, payload: Payload) -> OutputFile {
    OutputFile {
        schema: SCHEMA,
        config: cfg.clone(),
        retries,
        graph: GraphJson::from_graph(g),
        payload,
        mask: None,
        boundary: None,
        stats: BTreeMap::new(),
    }
}

/// Runs the configured pipeline with retries.
pub fn generate(cfg: &RunConfig) -> Result<Generated> {
    use Pipeline as P;
    let g = cfg.base_graph()?;
    let field = LabelField::new(cfg.seed, &g);
    let k = cfg.spacing();
    let src = cfg.source;
    let retry = |t: &dyn Fn(&LabelField) -> Result<Decorated>| with_retries(&field, cfg.max_retries, |f| t(f));
    match cfg.pipeline {
        P::Square => Ok(decorated_file(cfg, &g, retry(&|f| schreier_square_using(&g, f, src, k))?)),
        P::Triangular => Ok(decorated_file(cfg, &g, retry(&|f| schreier_triangular_using(&g, f, src, k))?)),
        P::Kagome => Ok(decorated_file(cfg, &g, retry(&|f| schreier_kagome_using(&g, f, src, k))?)),
        P::T3464 => Ok(decorated_file(cfg, &g, retry(&|f| schreier_t3464(&g, f))?)),
        P::Grid => Ok(decorated_file(cfg, &g, retry(&|f| schreier_grid_d(&g, f, k))?)),
        P::SquareDiag => Ok(decorated_file(cfg, &g, retry(&|f| square_diag_decorate(&g, f, src, k))?)),
        P::Product => {
            let h = base_graph(cfg.base.as_deref().unwrap_or("c4"))?;
            let m = find_perfect_matching(&h)
                .ok_or_else(|| Error::Invalid(format!("base graph {:?} has no perfect matching", cfg.base)))?;
            let opts = ProductOptions { tightened: cfg.tightened };
            Ok(decorated_file(cfg, &g, retry(&|f| schreier_product(&g, &h, &m, f, opts))?))
        }
        P::Orientation => {
            let r = with_retries(&field, cfg.max_retries, |f| balanced_orientation_planar_using(&g, f, src, k))?;
            let po = r.value;
            let mut file = plain_file(cfg, &g, r.retries, Payload::Orientation { head: po.orientation.head });
            file.mask = po.mask.map(|m| mask_list(&m));
            file.boundary = Some(super::boundary_union(&po.hierarchy));
            file.stats = po.stats;
            Ok(Generated {
                file,
                hierarchy: Some(HierarchyJson::new(&po.hierarchy.tree, Some(&po.hierarchy))),
                retries: r.retries,
                rejected: r.rejected,
            })
        }
        P::Colouring | P::Matching | P::LineLift | P::LineMatching => {
            if g.topology != Topology::Torus {
                return Err(Error::UnsupportedDims(format!("{} needs a torus", cfg.pipeline.name())));
            }
            let r = retry(&|f| schreier_square_using(&g, f, src, k))?;
            let dec = &r.value.decoration;
            let derived_field = field.derive(cfg.pipeline.name());
            let (graph, payload) = match cfg.pipeline {
                P::Colouring => {
                    let ec = proper_colouring_from_decoration(&g, dec, &derived_field)?;
                    (g.clone(), Payload::Colouring { colours: ec.colours, colour: ec.colour })
                }
                P::Matching => {
                    let ec = proper_colouring_from_decoration(&g, dec, &derived_field)?;
                    let m = matching_from_colouring(&ec, light(0))?;
                    (g.clone(), Payload::Matching { edges: m.edges })
                }
                P::LineLift => {
                    let (lg, inc) = line_graph(&g)?;
                    let l = lift_to_line_graph(&g, dec, &lg, &inc)?;
                    (lg, Payload::Decoration { d: l.d, colour: l.colour, head: l.head })
                }
                _ => {
                    let (lg, inc) = line_graph(&g)?;
                    let m = line_graph_matching(&g, &dec.orientation(), &lg, &inc, &derived_field)?;
                    (lg, Payload::Matching { edges: m.edges })
                }
            };
            Ok(Generated {
                file: plain_file(cfg, &graph, r.retries, payload),
                hierarchy: None,
                retries: r.retries,
                rejected: r.rejected,
            })
        }
    }
}
