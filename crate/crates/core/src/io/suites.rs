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

//! Experiment suites. Each suite runs one family of pipelines over many
//! seeds (in parallel) and reports numbered criteria.

use super::{generate, verify_file, verify_payload, OutputFile, Payload, Pipeline, RunConfig};
use crate::decorators::{
    balanced_orientation_planar_using, find_perfect_matching, interface_patterns, schreier_grid_d,
    schreier_kagome_using, schreier_product, schreier_square_using, schreier_t3464, schreier_triangular_using,
    triangle_fix, with_retries, Decorated, Decoration, Orientation, ProductOptions,
};
use crate::derived::{
    dark, lift_to_line_graph, light, line_graph_matching, matching_from_colouring, proper_colouring_from_decoration,
    square_diag_decorate, EdgeColouring, Matching,
};
use crate::hierarchy::{
    build_hierarchy, coarsen, percolation_clusters, rounds_for_spacing, ClusterBoundary, HierarchySource, HierarchyTree,
};
use crate::lattice::{
    build_archimedean, build_grid_d, build_product_with_cycle, build_square_diag, custom, line_graph, EdgeId, Kind,
    LatticeGraph, Topology, VertexId,
};
use crate::rng::LabelField;
use crate::verify::{
    check_balanced, check_boundary, check_hierarchy, check_matching, check_proper, check_schreier, enumerate_sharded,
    grandparent_distances, locality_probe, monochrome_components, parity_invariant, Report,
};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

pub const SUITES: &[&str] = &[
    "acceptance-square",
    "acceptance-triangular",
    "acceptance-kagome",
    "acceptance-t3464",
    "acceptance-grid",
    "acceptance-orientation",
    "oracle-parity",
    "acceptance-product",
    "acceptance-derived",
    "determinism",
];

/// Exact counts of balanced orientations of `K3 x C_4` and `K3 x C_5`,
/// cross-checked against a transfer-matrix count.
pub const K3_C4_COUNT: u64 = 548;
pub const K3_C5_COUNT: u64 = 2116;

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Overrides the seed count of every seeded criterion.
    pub seeds: Option<usize>,
    pub max_retries: Option<u32>,
}

impl SuiteOptions {
    fn seeds(&self, default: usize) -> usize {
        self.seeds.unwrap_or(default)
    }

    fn retries(&self) -> u32 {
        self.max_retries.unwrap_or(16)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    /// Acceptance criterion number.
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub criteria: Vec<Criterion>,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

fn crit(id: u32, name: &str, pass: bool, detail: String) -> Criterion {
    Criterion { id, name: name.to_string(), pass, detail }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteResult> {
    let t = Instant::now();
    let criteria = match name {
        "acceptance-square" => square(opts)?,
        "acceptance-triangular" => triangular(opts)?,
        "acceptance-kagome" => kagome(opts)?,
        "acceptance-t3464" => t3464(opts)?,
        "acceptance-grid" => grid(opts)?,
        "acceptance-orientation" => orientation(opts)?,
        "oracle-parity" => parity_oracle()?,
        "acceptance-product" => product(opts)?,
        "acceptance-derived" => derived(opts)?,
        "determinism" => determinism()?,
        _ => return Err(Error::Invalid(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    };
    Ok(SuiteResult { suite: name.to_string(), criteria, seconds: t.elapsed().as_secs_f64() })
}

/// Outcome of one seed.
#[derive(Default)]
struct Trial {
    ok: bool,
    retries: u32,
    note: String,
    hier: Option<std::result::Result<(), String>>,
    /// Flag-free clusters and violations of the grandparent bound.
    coarse: (usize, usize, u32),
    clusters: usize,
    max_cycle: usize,
    wrapping: usize,
    /// Component counts bucketed by `ceil(log2(length))`.
    hist: BTreeMap<u32, usize>,
}

fn first_fail(r: &Report) -> String {
    r.first_failure().map(|c| format!("{}: {}", c.name, c.detail)).unwrap_or_default()
}

/// Audits of one accepted hierarchy.
fn hierarchy_audit(
    g: &LatticeGraph,
    tree: &HierarchyTree,
    hb: Option<&ClusterBoundary>,
    k: usize,
) -> std::result::Result<(), String> {
    let r = check_hierarchy(g, tree, Some(k));
    if !r.ok() {
        return Err(first_fail(&r));
    }
    if let Some(hb) = hb {
        let r = check_boundary(g, hb, k);
        if !r.ok() {
            return Err(first_fail(&r));
        }
    }
    Ok(())
}

/// Rebuilds the coarsened percolation tree of an accepted trial and
/// measures `d(C, C^{++})` against `2^m + 1`.
fn coarse_audit(g: &LatticeGraph, f: &LabelField, spacing: usize) -> Result<(usize, usize, u32)> {
    let cl = percolation_clusters(g, f)?;
    let t = build_hierarchy(g, &cl)?;
    let m = rounds_for_spacing(spacing);
    let t = coarsen(&t, f, m)?;
    let bound = (1u32 << m) + 1;
    let ds = grandparent_distances(g, &t, bound);
    let bad = ds.iter().filter(|(_, d)| matches!(d, Some(x) if *x < bound)).count();
    Ok((ds.len(), bad, bound))
}

struct DecoratorRun<'a> {
    g: &'a LatticeGraph,
    seeds: usize,
    retries: u32,
    k: usize,
    /// Colours of the hierarchy (for the coarsening audit).
    colours: usize,
    source: HierarchySource,
}

impl DecoratorRun<'_> {
    fn run(
        &self,
        pipeline: impl Fn(&LabelField) -> Result<Decorated> + Sync,
        extra: impl Fn(&Decorated, &LabelField) -> std::result::Result<(), String> + Sync,
    ) -> Vec<Trial> {
        let g = self.g;
        (0..self.seeds as u64)
            .into_par_iter()
            .map(|seed| {
                let field = LabelField::new(seed, g);
                let r = match with_retries(&field, self.retries, &pipeline) {
                    Ok(r) => r,
                    Err(e) => return Trial { note: format!("seed {seed}: {e}"), ..Trial::default() },
                };
                let fe = field.with_epoch(r.retries);
                let out = &r.value;
                let mut t = Trial { retries: r.retries, ..Trial::default() };
                let rep = check_schreier(g, &out.decoration);
                let census = monochrome_components(g, &out.decoration);
                t.wrapping = census.wrapping() + census.non_cycles();
                t.max_cycle = census.components.iter().map(|c| c.len()).max().unwrap_or(0);
                for c in &census.components {
                    *t.hist.entry(c.len().max(1).next_power_of_two().trailing_zeros()).or_default() += 1;
                }
                let extra = extra(out, &fe);
                t.ok = rep.ok() && census.all_contractible_cycles() && extra.is_ok();
                if !rep.ok() {
                    t.note = format!("seed {seed}: {}", first_fail(&rep));
                } else if !census.all_contractible_cycles() {
                    t.note = format!("seed {seed}: {} wrapping or non-cycle components", t.wrapping);
                } else if let Err(e) = extra {
                    t.note = format!("seed {seed}: {e}");
                }
                if let Some(tree) = out.hierarchy_tree() {
                    t.clusters = tree.len();
                    t.hier = Some(hierarchy_audit(g, tree, out.hierarchy.as_ref(), self.k));
                }
                if self.source == HierarchySource::Percolation && self.colours > 0 {
                    match coarse_audit(g, &fe, self.colours * self.k) {
                        Ok(c) => t.coarse = c,
                        Err(e) => t.hier = Some(Err(format!("coarsening audit: {e}"))),
                    }
                }
                t
            })
            .collect()
    }
}

/// `limit` is a wall-clock bound in seconds that is part of the criterion.
fn summarize(id: u32, name: &str, trials: &[Trial], max_retries: u32, secs: f64, limit: Option<f64>) -> Criterion {
    let ok = trials.iter().filter(|t| t.ok).count();
    let retries: u32 = trials.iter().map(|t| t.retries).sum();
    let worst = trials.iter().map(|t| t.retries).max().unwrap_or(0);
    let clusters = trials.iter().map(|t| t.clusters).sum::<usize>() as f64 / trials.len().max(1) as f64;
    let cyc = trials.iter().map(|t| t.max_cycle).max().unwrap_or(0);
    let mut detail = format!(
        "{ok}/{} seeds valid, retries total {retries} max {worst} (limit {max_retries}), mean clusters {clusters:.1}, longest cycle {cyc}, {secs:.1} s",
        trials.len()
    );
    let mut hist = BTreeMap::<u32, usize>::new();
    for t in trials {
        for (&b, &n) in &t.hist {
            *hist.entry(b).or_default() += n;
        }
    }
    let buckets: Vec<String> = hist.iter().map(|(b, n)| format!("<={}: {n}", 1usize << b)).collect();
    detail.push_str(&format!("; cycle lengths {{{}}}", buckets.join(", ")));
    if let Some(t) = trials.iter().find(|t| !t.ok) {
        detail.push_str(&format!("; first failure {}", t.note));
    }
    let fast = limit.is_none_or(|l| secs < l);
    if let Some(l) = limit {
        detail.push_str(&format!("; runtime limit {l} s {}", if fast { "met" } else { "EXCEEDED" }));
    }
    crit(id, name, ok == trials.len() && fast, detail)
}

fn summarize_hierarchy(name: &str, trials: &[Trial]) -> Criterion {
    let audited: Vec<&Trial> = trials.iter().filter(|t| t.hier.is_some()).collect();
    let bad: Vec<&Trial> = audited.iter().copied().filter(|t| !matches!(t.hier, Some(Ok(())))).collect();
    let flag_free: usize = trials.iter().map(|t| t.coarse.0).sum();
    let coarse_bad: usize = trials.iter().map(|t| t.coarse.1).sum();
    let bound = trials.iter().map(|t| t.coarse.2).max().unwrap_or(0);
    let mut detail = format!(
        "{}/{} accepted hierarchies pass tree, spacing and boundary audits",
        audited.len() - bad.len(),
        audited.len()
    );
    if bound > 0 {
        detail.push_str(&format!(
            "; grandparent distance >= {bound} on {}/{flag_free} flag-free clusters",
            flag_free - coarse_bad
        ));
    }
    if let Some(Some(Err(e))) = bad.first().map(|t| &t.hier) {
        detail.push_str(&format!("; first failure {e}"));
    }
    crit(6, name, bad.is_empty() && coarse_bad == 0, detail)
}

fn torus(kind: Kind, w: usize, h: usize) -> Result<LatticeGraph> {
    build_archimedean(kind, w, h, Topology::Torus)
}

fn square(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let g = torus(Kind::Square, 128, 128)?;
    let mut out = Vec::new();
    for source in [HierarchySource::Percolation, HierarchySource::Toast] {
        let t = Instant::now();
        let run = DecoratorRun { g: &g, seeds: opts.seeds(50), retries: opts.retries(), k: 8, colours: 2, source };
        let trials = run.run(
            |f| schreier_square_using(&g, f, source, 8),
            |out, _| match out.stats.get("recolour_parity_violations") {
                Some(&x) if x == 0.0 => Ok(()),
                Some(x) => Err(format!("{x} recolouring parity violations")),
                None => Err("recolouring parity not reported".into()),
            },
        );
        let tag = format!("{source:?}").to_lowercase();
        out.push(summarize(
            1,
            &format!("square 128x128 k=8 ({tag})"),
            &trials,
            opts.retries(),
            t.elapsed().as_secs_f64(),
            Some(60.0),
        ));
        out.push(summarize_hierarchy(&format!("hierarchy audits, square ({tag})"), &trials));
    }
    Ok(out)
}

fn triangular(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let g = torus(Kind::Triangular, 96, 96)?;
    let mut out = Vec::new();
    for source in [HierarchySource::Percolation, HierarchySource::Toast] {
        let t = Instant::now();
        let run = DecoratorRun { g: &g, seeds: opts.seeds(50), retries: opts.retries(), k: 8, colours: 4, source };
        let trials = run.run(|f| schreier_triangular_using(&g, f, source, 8), |_, _| Ok(()));
        let tag = format!("{source:?}").to_lowercase();
        out.push(summarize(
            2,
            &format!("triangular 96x96 k=8 ({tag})"),
            &trials,
            opts.retries(),
            t.elapsed().as_secs_f64(),
            None,
        ));
        out.push(summarize_hierarchy(&format!("hierarchy audits, triangular ({tag})"), &trials));
    }
    Ok(out)
}

/// Every vertex meets 0 or 2 fixed boundary edges (over all clusters).
fn kagome_boundaries_disjoint(g: &LatticeGraph, hb: &ClusterBoundary) -> std::result::Result<(), String> {
    let (fixed, _) = triangle_fix(g, hb);
    let mut cnt = vec![0u32; g.n()];
    for es in &fixed {
        for &e in es {
            let (a, b) = g.endpoints(e);
            cnt[a as usize] += 1;
            cnt[b as usize] += 1;
        }
    }
    match (0..g.n()).find(|&v| cnt[v] != 0 && cnt[v] != 2) {
        Some(v) => Err(format!("vertex {v} meets {} fixed boundary edges", cnt[v])),
        None => Ok(()),
    }
}

fn kagome(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let g = torus(Kind::Kagome, 96, 96)?;
    let mut out = Vec::new();
    for source in [HierarchySource::Percolation, HierarchySource::Toast] {
        let t = Instant::now();
        let run = DecoratorRun { g: &g, seeds: opts.seeds(50), retries: opts.retries(), k: 8, colours: 1, source };
        let trials = run.run(
            |f| schreier_kagome_using(&g, f, source, 8),
            |out, _| match &out.hierarchy {
                Some(hb) => kagome_boundaries_disjoint(&g, hb),
                None => Err("no hierarchy".into()),
            },
        );
        let tag = format!("{source:?}").to_lowercase();
        out.push(summarize(
            2,
            &format!("kagome 96x96 k=8, boundaries vertex-disjoint ({tag})"),
            &trials,
            opts.retries(),
            t.elapsed().as_secs_f64(),
            None,
        ));
        out.push(summarize_hierarchy(&format!("hierarchy audits, kagome ({tag})"), &trials));
    }
    Ok(out)
}

fn t3464(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let g = torus(Kind::T3464, 32, 32)?;
    let t = Instant::now();
    let seeds = opts.seeds(200);
    let results: Vec<std::result::Result<u32, String>> = (0..seeds as u64)
        .into_par_iter()
        .map(|seed| {
            let f = LabelField::new(seed, &g);
            let r = with_retries(&f, 0, |f| schreier_t3464(&g, f)).map_err(|e| format!("seed {seed}: {e}"))?;
            let dec = &r.value.decoration;
            let rep = check_schreier(&g, dec);
            if !rep.ok() {
                return Err(format!("seed {seed}: {}", first_fail(&rep)));
            }
            let census = monochrome_components(&g, dec);
            let red: Vec<usize> = census.cycle_lengths(0).into_keys().collect();
            let blue: Vec<usize> = census.cycle_lengths(1).into_keys().collect();
            if red != [3] || blue != [6] || census.non_cycles() > 0 {
                return Err(format!("seed {seed}: colour 0 lengths {red:?}, colour 1 lengths {blue:?}"));
            }
            Ok(r.retries)
        })
        .collect();
    let ok = results.iter().filter(|r| r.is_ok()).count();
    let retries: u32 = results.iter().filter_map(|r| r.as_ref().ok()).sum();
    let mut detail = format!("{ok}/{seeds} valid, cycle lengths {{3}} and {{6}}, {retries} retries");
    if let Some(Err(e)) = results.iter().find(|r| r.is_err()) {
        detail.push_str(&format!("; {e}"));
    }
    let secs = t.elapsed().as_secs_f64();
    let valid =
        crit(3, "t3464 32x32 validity", ok == seeds && secs < 5.0, format!("{detail}, {secs:.2} s (limit 5 s)"));

    let t = Instant::now();
    let field = LabelField::new(0, &g);
    let samples: Vec<VertexId> = (0..100).map(|i| (i * g.n() / 100) as VertexId).collect();
    let probes: Vec<std::result::Result<bool, String>> = samples
        .par_iter()
        .map(|&v| {
            let dist = g.bfs(&[v], 6);
            let region: Vec<VertexId> = (0..g.n() as VertexId).filter(|&x| dist[x as usize] <= 6).collect();
            locality_probe(&g, &field, |f| schreier_t3464(&g, f).map(|d| d.decoration), v, &region, 4)
                .map(|p| p.stable())
                .map_err(|e| e.to_string())
        })
        .collect();
    let stable = probes.iter().filter(|p| matches!(p, Ok(true))).count();
    let local = crit(
        3,
        "t3464 locality, radius-6 region",
        stable == samples.len(),
        format!(
            "{stable}/{} sampled vertices stable over 4 resamplings, {:.2} s",
            samples.len(),
            t.elapsed().as_secs_f64()
        ),
    );
    Ok(vec![valid, local])
}

/// Pairs of even clusters one odd level apart whose interface patterns
/// differ by more than one transposition.
fn pattern_jumps(t: &HierarchyTree, f: &LabelField, d: usize) -> Result<(usize, usize)> {
    let pats = interface_patterns(t, f, d)?;
    let (mut pairs, mut bad) = (0, 0);
    for c in 0..t.len() as u32 {
        let Some(p) = &pats[c as usize] else { continue };
        let Some(a) = t.ancestor(c, 2) else { continue };
        let Some(q) = &pats[a as usize] else { continue };
        pairs += 1;
        let diff = p.iter().zip(q).filter(|(x, y)| x != y).count();
        if diff != 0 && diff != 2 {
            bad += 1;
        }
    }
    Ok((pairs, bad))
}

fn grid(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let g = build_grid_d(3, &[48, 48, 48], Topology::Torus)?;
    let t = Instant::now();
    let run = DecoratorRun {
        g: &g,
        seeds: opts.seeds(20),
        retries: opts.retries(),
        k: 8,
        colours: 4,
        source: HierarchySource::Toast,
    };
    let trials = run.run(
        |f| schreier_grid_d(&g, f, 8),
        |out, f| {
            let tree = out.hierarchy_tree().ok_or("no hierarchy")?;
            match pattern_jumps(tree, f, 3) {
                Ok((_, 0)) => Ok(()),
                Ok((p, b)) => Err(format!("{b}/{p} adjacent interface patterns differ by more than a transposition")),
                Err(e) => Err(e.to_string()),
            }
        },
    );
    Ok(vec![
        summarize(
            4,
            "Z^3 48^3 toast k=8, adjacent patterns within one transposition",
            &trials,
            opts.retries(),
            t.elapsed().as_secs_f64(),
            Some(600.0),
        ),
        summarize_hierarchy("hierarchy audits, Z^3 (toast)", &trials),
    ])
}

fn orientation(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    for kind in [Kind::Square, Kind::Triangular] {
        let g = torus(kind, 128, 128)?;
        let t = Instant::now();
        let seeds = opts.seeds(50);
        let res: Vec<std::result::Result<(u32, std::result::Result<(), String>), String>> = (0..seeds as u64)
            .into_par_iter()
            .map(|seed| {
                let f = LabelField::new(seed, &g);
                let r = with_retries(&f, opts.retries(), |f| {
                    balanced_orientation_planar_using(&g, f, HierarchySource::Percolation, 8)
                })
                .map_err(|e| format!("seed {seed}: {e}"))?;
                let rep = check_balanced(&g, &r.value.orientation);
                if !rep.ok() {
                    return Err(format!("seed {seed}: {}", first_fail(&rep)));
                }
                let hb = &r.value.hierarchy;
                Ok((r.retries, hierarchy_audit(&g, &hb.tree, Some(hb), 8)))
            })
            .collect();
        let ok = res.iter().filter(|r| r.is_ok()).count();
        let hier_bad = res.iter().filter(|r| matches!(r, Ok((_, Err(_))))).count();
        let retries: u32 = res.iter().filter_map(|r| r.as_ref().ok().map(|x| x.0)).sum();
        let mut detail =
            format!("{ok}/{seeds} balanced everywhere, {retries} retries, {:.1} s", t.elapsed().as_secs_f64());
        if let Some(Err(e)) = res.iter().find(|r| r.is_err()) {
            detail.push_str(&format!("; {e}"));
        }
        out.push(crit(5, &format!("balanced orientation, {} 128x128", kind.name()), ok == seeds, detail));
        out.push(crit(
            6,
            &format!("hierarchy audits, orientation on {}", kind.name()),
            hier_bad == 0,
            format!("{}/{ok} accepted hierarchies pass", ok - hier_bad),
        ));
    }
    Ok(out)
}

fn complete_graph(n: usize) -> Result<LatticeGraph> {
    let es: Vec<(VertexId, VertexId)> =
        (0..n as VertexId).flat_map(|a| (a + 1..n as VertexId).map(move |b| (a, b))).collect();
    custom(n, &es)
}

fn parity_oracle() -> Result<Vec<Criterion>> {
    let k3 = complete_graph(3)?;
    let mut out = Vec::new();
    for (m, want) in [(4usize, K3_C4_COUNT), (5, K3_C5_COUNT)] {
        let g = build_product_with_cycle(&k3, m)?;
        let t = Instant::now();
        let s = enumerate_sharded(&g, 40, |o| {
            parity_invariant(&k3, &g, o).map(|p| p.constant && p.complementary && p.sign != 0).unwrap_or(false)
        })?;
        out.push(crit(
            7,
            &format!("K3 x C{m} exhaustive ({} edges)", g.m()),
            s.holds() && s.count == want,
            format!(
                "2^{}-space exhausted, {} balanced orientations (pinned {want}), {} violations of constant n(i) / sign != 0, {:.3} s",
                g.m(),
                s.count,
                s.violations,
                t.elapsed().as_secs_f64()
            ),
        ));
    }
    Ok(out)
}

fn product(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    for base in ["c4", "k44"] {
        let h = super::base_graph(base)?;
        let matching =
            find_perfect_matching(&h).ok_or_else(|| Error::Invalid(format!("{base} has no perfect matching")))?;
        for m in [10usize, 12] {
            let g = build_product_with_cycle(&h, m)?;
            for tightened in [false, true] {
                let seeds = opts.seeds(50);
                let res: Vec<std::result::Result<usize, String>> = (0..seeds as u64)
                    .into_par_iter()
                    .map(|seed| {
                        let f = LabelField::new(seed, &g);
                        let r = with_retries(&f, opts.retries(), |f| {
                            schreier_product(&g, &h, &matching, f, ProductOptions { tightened })
                        })
                        .map_err(|e| format!("seed {seed}: {e}"))?;
                        let dec = &r.value.decoration;
                        let rep = check_schreier(&g, dec);
                        if !rep.ok() {
                            return Err(format!("seed {seed}: {}", first_fail(&rep)));
                        }
                        let census = monochrome_components(&g, dec);
                        let lens = census.cycle_lengths(0);
                        if let Some(l) = lens.keys().find(|&&l| l % 2 == 1) {
                            return Err(format!("seed {seed}: odd first-colour cycle of length {l}"));
                        }
                        Ok(lens.keys().max().copied().unwrap_or(0))
                    })
                    .collect();
                let ok = res.iter().filter(|r| r.is_ok()).count();
                let longest = res.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
                let bound = 3 * h.n();
                let pass = ok == seeds && (!tightened || longest <= bound);
                let mut detail = format!("{ok}/{seeds} valid with even first-colour cycles, longest {longest}");
                if tightened {
                    detail.push_str(&format!(" (bound {bound})"));
                }
                if let Some(Err(e)) = res.iter().find(|r| r.is_err()) {
                    detail.push_str(&format!("; {e}"));
                }
                let tag = if tightened { ", tightened" } else { "" };
                out.push(crit(8, &format!("{base} x C{m}{tag}"), pass, detail));
            }
        }
    }
    Ok(out)
}

fn derived(opts: &SuiteOptions) -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    let g = torus(Kind::Square, 64, 64)?;
    let seeds = opts.seeds(50);
    let res: Vec<std::result::Result<(), String>> = (0..seeds as u64)
        .into_par_iter()
        .map(|seed| {
            let f = LabelField::new(seed, &g);
            let r = with_retries(&f, opts.retries(), |f| schreier_square_using(&g, f, HierarchySource::Percolation, 8))
                .map_err(|e| e.to_string())?;
            let dec = &r.value.decoration;
            let ec = proper_colouring_from_decoration(&g, dec, &f.derive("colouring")).map_err(|e| e.to_string())?;
            let rep = check_proper(&g, &ec);
            if !rep.ok() {
                return Err(first_fail(&rep));
            }
            let m = matching_from_colouring(&ec, light(0)).map_err(|e| e.to_string())?;
            let rep = check_matching(&g, &m);
            if !rep.ok() {
                return Err(first_fail(&rep));
            }
            let halves = (0..g.m()).all(|e| {
                let c = ec.colour[e];
                (c == light(0) || c == dark(0)) == (dec.colour[e] == 0)
            });
            if !halves {
                return Err("light/dark halves do not match the first colour".into());
            }
            Ok(())
        })
        .collect();
    let ok = res.iter().filter(|r| r.is_ok()).count();
    out.push(crit(
        9,
        "proper 4-colouring and perfect matching, square 64x64",
        ok == seeds,
        format!("{ok}/{seeds} proper colourings with perfect light class{}", fail_note(&res)),
    ));

    let kg = build_square_diag(64, 64, Topology::Torus)?;
    let n = opts.seeds(10);
    let res: Vec<std::result::Result<(), String>> = (0..n as u64)
        .into_par_iter()
        .map(|seed| {
            let f = LabelField::new(seed, &kg);
            let r = with_retries(&f, opts.retries(), |f| square_diag_decorate(&kg, f, HierarchySource::Toast, 8))
                .map_err(|e| e.to_string())?;
            let rep = check_schreier(&kg, &r.value.decoration);
            if !rep.ok() {
                return Err(first_fail(&rep));
            }
            if !monochrome_components(&kg, &r.value.decoration).all_contractible_cycles() {
                return Err("wrapping component".into());
            }
            Ok(())
        })
        .collect();
    let ok = res.iter().filter(|r| r.is_ok()).count();
    out.push(crit(9, "king's graph 64x64, d = 4", ok == n, format!("{ok}/{n} valid{}", fail_note(&res))));

    let g = torus(Kind::Square, 32, 32)?;
    let (lg, inc) = line_graph(&g)?;
    let res: Vec<std::result::Result<(), String>> = (0..n as u64)
        .into_par_iter()
        .map(|seed| {
            let f = LabelField::new(seed, &g);
            let r = with_retries(&f, opts.retries(), |f| schreier_square_using(&g, f, HierarchySource::Toast, 8))
                .map_err(|e| e.to_string())?;
            let dec = &r.value.decoration;
            let lifted = lift_to_line_graph(&g, dec, &lg, &inc).map_err(|e| e.to_string())?;
            let rep = check_schreier(&lg, &lifted);
            if !rep.ok() {
                return Err(format!("lift: {}", first_fail(&rep)));
            }
            let m = line_graph_matching(&g, &dec.orientation(), &lg, &inc, &f).map_err(|e| e.to_string())?;
            let rep = check_matching(&lg, &m);
            if !rep.ok() {
                return Err(format!("line matching: {}", first_fail(&rep)));
            }
            Ok(())
        })
        .collect();
    let ok = res.iter().filter(|r| r.is_ok()).count();
    out.push(crit(
        9,
        "line graph of square 32x32: 3-colour lift and perfect matching",
        ok == n,
        format!("{ok}/{n} lifts valid and matchings perfect{}", fail_note(&res)),
    ));
    Ok(out)
}

fn fail_note(res: &[std::result::Result<(), String>]) -> String {
    match res.iter().find_map(|r| r.as_ref().err()) {
        Some(e) => format!("; first failure {e}"),
        None => String::new(),
    }
}

/// Does `check` fail after `edit`?
fn flips(ok_before: bool, ok_after: bool) -> bool {
    ok_before && !ok_after
}

fn determinism() -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    let mut cfgs = vec![
        RunConfig::new(Pipeline::Square, vec![32, 32], 3),
        RunConfig::new(Pipeline::T3464, vec![8, 8], 1),
        RunConfig::new(Pipeline::Colouring, vec![16, 16], 2),
        RunConfig::new(Pipeline::LineMatching, vec![16, 16], 2),
    ];
    let mut orient = RunConfig::new(Pipeline::Orientation, vec![24, 24], 5);
    orient.kind = Some(Kind::Triangular);
    orient.source = HierarchySource::Toast;
    cfgs.push(orient);
    let mut prod = RunConfig::new(Pipeline::Product, vec![12], 4);
    prod.base = Some("k44".into());
    cfgs.push(prod);
    let dir = std::env::temp_dir().join(format!("schreier-lab-determinism-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut notes = Vec::new();
    let mut pass = true;
    for (i, cfg) in cfgs.iter().enumerate() {
        let a = generate(cfg)?.file.to_json()?;
        let b = generate(cfg)?.file.to_json()?;
        let path = dir.join(format!("run{i}.json"));
        super::write_atomic(&path, a.as_bytes())?;
        let back = OutputFile::read(&path)?;
        let again = back.to_json()?;
        let verified = verify_file(&back)?.ok();
        let same = a == b && a == again;
        pass &= same && verified;
        notes.push(format!("{}: identical {same}, reload verifies {verified}", cfg.pipeline.name()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    out.push(crit(10, "replay and round trip", pass, notes.join("; ")));

    let (ok, detail) = perturbations()?;
    out.push(crit(10, "checker perturbations flip pass to fail", ok, detail));
    Ok(out)
}

/// One targeted edit per checker.
fn perturbations() -> Result<(bool, String)> {
    let mut results: Vec<(&str, bool)> = Vec::new();
    let g = torus(Kind::Square, 48, 48)?;
    let f = LabelField::new(11, &g);
    let r = with_retries(&f, 16, |f| schreier_square_using(&g, f, HierarchySource::Toast, 4))?;
    let dec = r.value.decoration.clone();

    let mut bad = dec.clone();
    bad.head[5] = bad.tail(&g, 5);
    let before = check_schreier(&g, &dec);
    let after = check_schreier(&g, &bad);
    let (a, b) = g.endpoints(5);
    let witnessed = after
        .first_failure()
        .and_then(|c| c.witness.as_ref())
        .is_some_and(|w| w.vertices.iter().any(|&v| v == a || v == b));
    results.push(("schreier", flips(before.ok(), after.ok()) && witnessed));

    let or = dec.orientation();
    let mut rev = or.clone();
    rev.head[7] = g.other(7, rev.head[7]);
    let after = check_balanced(&g, &rev);
    let two = after.first_failure().and_then(|c| c.witness.as_ref()).is_some_and(|w| w.vertices.len() == 2);
    results.push(("balanced", flips(check_balanced(&g, &or).ok(), after.ok()) && two));

    let ec = proper_colouring_from_decoration(&g, &dec, &f)?;
    let mut bad_ec: EdgeColouring = ec.clone();
    let e0 = g.neighbors(0)[0].1;
    let e1 = g.neighbors(0)[1].1;
    bad_ec.colour[e1 as usize] = bad_ec.colour[e0 as usize];
    results.push(("proper", flips(check_proper(&g, &ec).ok(), check_proper(&g, &bad_ec).ok())));

    let m = matching_from_colouring(&ec, light(0))?;
    let mut short: Matching = m.clone();
    short.edges.pop();
    results.push(("matching", flips(check_matching(&g, &m).ok(), check_matching(&g, &short).ok())));

    // Straight lines are Schreier-valid but wrap the torus.
    let lines = Decoration {
        d: 2,
        colour: (0..g.m() as EdgeId).map(|e| g.dir(e) as u8).collect(),
        head: (0..g.m() as EdgeId).map(|e| g.endpoints(e).1).collect(),
    };
    let census_ok = |d: &Decoration| {
        verify_payload(&g, &Payload::Decoration { d: 2, colour: d.colour.clone(), head: d.head.clone() }, None).ok()
    };
    results.push(("census", flips(census_ok(&dec), census_ok(&lines))));

    let hb = r.value.hierarchy.clone().ok_or_else(|| Error::Invalid("square run without hierarchy".into()))?;
    let t = &hb.tree;
    let before = check_hierarchy(&g, t, Some(4)).ok();
    let leaves: Vec<u32> = {
        let ch = t.children();
        (0..t.len() as u32).filter(|&c| !t.is_root(c) && ch[c as usize].is_empty()).collect()
    };
    let hier_flip = if leaves.len() >= 2 {
        let (x, y) = (leaves[0], leaves[leaves.len() - 1]);
        let assign: Vec<u32> = t.assignment().iter().map(|&c| if c == y { x } else { c }).collect();
        let merged = HierarchyTree::from_assignment(&assign, t.parents(), t.root());
        flips(before, check_hierarchy(&g, &merged, Some(4)).ok())
    } else {
        false
    };
    results.push(("hierarchy", hier_flip));

    let mut parents = t.parents().to_vec();
    let leaf = leaves.first().copied();
    let parent_flip = match leaf {
        Some(c) => {
            parents[c as usize] =
                (0..t.len() as u32).find(|&x| x != c && Some(x) != t.parent(c) && t.parent(x) != Some(c)).unwrap_or(c);
            let edited = HierarchyTree::from_assignment(t.assignment(), &parents, t.root());
            flips(before, check_hierarchy(&g, &edited, Some(4)).ok())
        }
        None => false,
    };
    results.push(("parent", parent_flip));

    let mut cut = hb.clone();
    let boundary_flip = match cut.edges.iter().position(|es| !es.is_empty()) {
        Some(c) => {
            cut.edges[c].pop();
            flips(check_boundary(&g, &hb, 4).ok(), check_boundary(&g, &cut, 4).ok())
        }
        None => false,
    };
    results.push(("boundary", boundary_flip));

    let k3 = complete_graph(3)?;
    let pg = build_product_with_cycle(&k3, 4)?;
    let mut first = None;
    crate::verify::enumerate_balanced_orientations(&pg, |o| {
        if first.is_none() {
            first = Some(o.clone());
        }
    })?;
    let parity_flip = match first {
        Some(o) => {
            let mut o2: Orientation = o.clone();
            o2.head[0] = pg.other(0, o2.head[0]);
            parity_invariant(&k3, &pg, &o).is_ok()
                && matches!(parity_invariant(&k3, &pg, &o2), Err(Error::NotBalanced(_)))
        }
        None => false,
    };
    results.push(("parity", parity_flip));

    let ok = results.iter().all(|(_, b)| *b);
    let detail = results
        .iter()
        .map(|(n, b)| format!("{n} {}", if *b { "flips" } else { "DOES NOT FLIP" }))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((ok, detail))
}
