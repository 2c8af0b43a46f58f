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

use clap::{Args, Parser, Subcommand};
use schreier_lab::hierarchy::{ClusterBoundary, HierarchySource};
use schreier_lab::io::suites::{run_suite, SuiteOptions, SUITES};
use schreier_lab::io::{
    exit_code, generate, render_svg, verify_file, write_atomic, HierarchyJson, OutputFile, Pipeline, RunConfig, Slice,
    PIPELINES,
};
use schreier_lab::lattice::{Kind, Topology};
use schreier_lab::verify::{check_boundary, check_hierarchy};
use schreier_lab::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "schreier-lab", version, about = "Random Schreier decorations on lattice windows")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one pipeline and write its JSON output.
    Generate(GenerateArgs),
    /// Re-check a JSON output (and optionally a hierarchy dump).
    Verify {
        file: PathBuf,
        /// Hierarchy dump to audit against the file's graph.
        #[arg(long)]
        hierarchy: Option<PathBuf>,
        /// Spacing to audit the hierarchy against.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Draw a JSON output as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fixed coordinates for grids of dimension three or more, e.g. `z=0`.
        #[arg(long)]
        slice: Option<String>,
    },
    /// Run a named experiment suite, or `all`.
    Experiment {
        #[arg(long)]
        suite: String,
        /// Seed count override.
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        max_retries: Option<u32>,
        /// Write the results as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    pipeline: String,
    /// Lattice for `orientation`: square or triangular.
    #[arg(long)]
    kind: Option<String>,
    /// `WxH`, or one side (`48` for grids, `m` for products).
    #[arg(long)]
    dims: String,
    #[arg(long, default_value = "torus")]
    topology: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    max_retries: u32,
    /// percolation or toast.
    #[arg(long, default_value = "percolation")]
    source: String,
    /// Base graph for `product`.
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    tightened: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    render: Option<PathBuf>,
    #[arg(long)]
    slice: Option<String>,
    #[arg(long)]
    dump_hierarchy: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad dims {s:?}"))))
        .collect()
}

fn config(a: &GenerateArgs) -> Result<RunConfig> {
    let pipeline = Pipeline::parse(&a.pipeline).ok_or_else(|| {
        let names: Vec<&str> = PIPELINES.iter().map(|(n, _)| *n).collect();
        Error::Invalid(format!("unknown pipeline {:?}; known: {}", a.pipeline, names.join(", ")))
    })?;
    let mut cfg = RunConfig::new(pipeline, parse_dims(&a.dims)?, a.seed);
    cfg.kind = match &a.kind {
        Some(k) => Some(Kind::parse(k).ok_or_else(|| Error::Invalid(format!("unknown kind {k:?}")))?),
        None => None,
    };
    cfg.topology = match a.topology.as_str() {
        "torus" => Topology::Torus,
        "box" => Topology::Box,
        t => return Err(Error::Invalid(format!("unknown topology {t:?}; use torus or box"))),
    };
    cfg.k = a.k;
    cfg.d = a.d;
    cfg.max_retries = a.max_retries;
    cfg.source = HierarchySource::parse(&a.source)
        .ok_or_else(|| Error::Invalid(format!("unknown source {:?}; use percolation or toast", a.source)))?;
    cfg.base = a.base.clone();
    cfg.tightened = a.tightened;
    Ok(cfg)
}

fn slice(s: &Option<String>) -> Result<Option<Slice>> {
    s.as_deref().map(Slice::parse).transpose()
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string(v)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn cmd_generate(a: &GenerateArgs) -> Result<ExitCode> {
    let cfg = config(a)?;
    let sl = slice(&a.slice)?;
    let t = Instant::now();
    let out = generate(&cfg)?;
    let secs = t.elapsed().as_secs_f64();
    eprintln!("seed {} retries {} time {secs:.3} s", cfg.seed, out.retries);
    for r in &out.rejected {
        eprintln!("  rejected: {r}");
    }
    let report = verify_file(&out.file)?;
    let json = out.file.to_json()?;
    match &a.out {
        Some(p) => write_atomic(p, json.as_bytes())?,
        None => print!("{json}"),
    }
    if let Some(p) = &a.render {
        write_atomic(p, render_svg(&out.file, sl.as_ref())?.as_bytes())?;
    }
    if let Some(p) = &a.dump_hierarchy {
        let h = out
            .hierarchy
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("{} builds no hierarchy", cfg.pipeline.name())))?;
        write_json(p, h)?;
    }
    if !report.ok() {
        eprintln!("{}", report.first_failure().map(|c| format!("FAIL {}: {}", c.name, c.detail)).unwrap_or_default());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(file: &Path, hierarchy: Option<&Path>, k: Option<usize>) -> Result<ExitCode> {
    let f = OutputFile::read(file)?;
    let mut report = verify_file(&f)?;
    if let Some(hp) = hierarchy {
        let h: HierarchyJson = serde_json::from_str(&std::fs::read_to_string(hp)?)?;
        let g = f.graph.to_graph()?;
        let t = h.to_tree(g.n())?;
        let k = k.or(h.spacing);
        report.merge(check_hierarchy(&g, &t, k));
        if let (Some(edges), Some(k)) = (&h.boundary_edges, k) {
            let hb = ClusterBoundary::from_edges(&g, t, edges.clone());
            report.merge(check_boundary(&g, &hb, k));
        }
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        if let Some(w) = c.witness.as_ref().filter(|_| !c.pass) {
            println!("  witness {}", serde_json::to_string(w)?);
        }
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_experiment(suite: &str, opts: &SuiteOptions, out: Option<&Path>) -> Result<ExitCode> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut results = Vec::new();
    for name in names {
        let r = run_suite(name, opts)?;
        println!("== {} ({:.1} s)", r.suite, r.seconds);
        for c in &r.criteria {
            println!("[{}] criterion {:>2} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
        }
        results.push(r);
    }
    if let Some(p) = out {
        write_json(p, &results)?;
    }
    Ok(if results.iter().all(|r| r.pass()) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Generate(a) => cmd_generate(&a),
        Cmd::Verify { file, hierarchy, k } => cmd_verify(&file, hierarchy.as_deref(), k),
        Cmd::Render { file, out, slice: s } => {
            let f = OutputFile::read(&file)?;
            write_atomic(&out, render_svg(&f, slice(&s)?.as_ref())?.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Experiment { suite, seeds, max_retries, out } => {
            cmd_experiment(&suite, &SuiteOptions { seeds, max_retries }, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SCHREIER_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
