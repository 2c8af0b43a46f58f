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

use schreier_lab::io::{
    generate, render_svg, verify_file, HierarchyJson, OutputFile, Pipeline, RunConfig, Slice, PIPELINES,
};
use schreier_lab::lattice::Topology;
use std::path::{Path, PathBuf};
use std::process::Command;

fn cfg(p: Pipeline, dims: Vec<usize>, seed: u64) -> RunConfig {
    RunConfig::new(p, dims, seed)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("schreier-lab-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schreier-lab"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn json_round_trip_is_byte_identical() {
    for (p, dims) in [
        (Pipeline::Square, vec![32, 32]),
        (Pipeline::T3464, vec![6, 6]),
        (Pipeline::Colouring, vec![32, 32]),
        (Pipeline::Matching, vec![32, 32]),
    ] {
        let out = generate(&cfg(p, dims, 3)).unwrap();
        let s = out.file.to_json().unwrap();
        let back = OutputFile::from_json(&s).unwrap();
        assert_eq!(back, out.file);
        assert_eq!(back.to_json().unwrap(), s);
        assert!(verify_file(&back).unwrap().ok());
    }
}

#[test]
fn same_config_same_bytes() {
    let c = cfg(Pipeline::Square, vec![48, 48], 9);
    assert_eq!(generate(&c).unwrap().file.to_json().unwrap(), generate(&c).unwrap().file.to_json().unwrap());
    let other = cfg(Pipeline::Square, vec![48, 48], 10);
    assert_ne!(generate(&c).unwrap().file.to_json().unwrap(), generate(&other).unwrap().file.to_json().unwrap());
}

#[test]
fn schema_mismatch_is_rejected() {
    let out = generate(&cfg(Pipeline::T3464, vec![4, 4], 0)).unwrap();
    let s = out.file.to_json().unwrap().replacen("\"schema\":1", "\"schema\":2", 1);
    assert!(OutputFile::from_json(&s).is_err());
    assert!(OutputFile::from_json("{\"schema\":1}").is_err());
}

#[test]
fn hierarchy_dump_round_trip() {
    let out = generate(&cfg(Pipeline::Square, vec![48, 48], 4)).unwrap();
    let h = out.hierarchy.unwrap();
    let s = serde_json::to_string(&h).unwrap();
    let back: HierarchyJson = serde_json::from_str(&s).unwrap();
    assert_eq!(back, h);
    let t = back.to_tree(48 * 48).unwrap();
    assert_eq!(HierarchyJson::new(&t, None).clusters, h.clusters);
    assert!(back.to_tree(10).is_err());
}

#[test]
fn svg_has_one_arrow_per_edge() {
    let out = generate(&cfg(Pipeline::Square, vec![16, 16], 1)).unwrap();
    let svg = render_svg(&out.file, None).unwrap();
    assert_eq!(svg.matches("marker-end").count(), 512);
    assert!(svg.starts_with("<svg"));

    let grid = {
        let mut c = cfg(Pipeline::Grid, vec![48, 48, 48], 0);
        c.d = Some(3);
        generate(&c).unwrap().file
    };
    assert!(render_svg(&grid, None).is_err());
    let sliced = render_svg(&grid, Some(&Slice::parse("z=3").unwrap())).unwrap();
    assert_eq!(sliced.matches("marker-end").count(), 2 * 48 * 48);
}

#[test]
fn every_pipeline_generates_a_valid_file() {
    for &(name, p) in PIPELINES {
        let mut c = match p {
            Pipeline::Grid => cfg(p, vec![48, 48, 48], 2),
            Pipeline::T3464 => cfg(p, vec![6, 6], 2),
            Pipeline::Product => cfg(p, vec![12], 2),
            Pipeline::Triangular => cfg(p, vec![96, 96], 2),
            _ => cfg(p, vec![32, 32], 2),
        };
        if p == Pipeline::Grid {
            c.d = Some(3);
        }
        if p == Pipeline::Product {
            c.base = Some("c4".into());
        }
        let out = generate(&c).unwrap_or_else(|e| panic!("{name}: {e}"));
        let r = verify_file(&out.file).unwrap();
        assert!(r.ok(), "{name}: {:?}", r.first_failure());
    }
}

#[test]
fn box_windows_verify_on_their_mask() {
    let mut c = cfg(Pipeline::Square, vec![40, 40], 5);
    c.topology = Topology::Box;
    let out = generate(&c).unwrap();
    assert!(out.file.mask.is_some());
    assert!(verify_file(&out.file).unwrap().ok());
}

fn write(path: &Path, s: &str) {
    std::fs::write(path, s).unwrap();
}

#[test]
fn cli_exit_codes() {
    let good = tmp("good.json");
    let hier = tmp("good.hier.json");
    let st = bin()
        .args(["generate", "--pipeline", "square", "--dims", "32x32", "--seed", "1", "--out"])
        .arg(&good)
        .arg("--dump-hierarchy")
        .arg(&hier)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(code(bin().arg("verify").arg(&good)), 0);
    assert_eq!(code(bin().arg("verify").arg(&good).arg("--hierarchy").arg(&hier)), 0);

    let mut f = OutputFile::read(&good).unwrap();
    if let schreier_lab::io::Payload::Decoration { head, .. } = &mut f.payload {
        let g = f.graph.to_graph().unwrap();
        head[0] = g.other(0, head[0]);
    }
    let bad = tmp("bad.json");
    write(&bad, &f.to_json().unwrap());
    assert_eq!(code(bin().arg("verify").arg(&bad)), 1);

    let broken = tmp("broken.json");
    write(&broken, "{ not json");
    assert_eq!(code(bin().arg("verify").arg(&broken)), 2);
    assert_eq!(code(bin().arg("verify").arg(tmp("missing.json"))), 2);
    assert_eq!(code(bin().args(["generate", "--pipeline", "nonsense", "--dims", "8x8"])), 2);
    assert_eq!(code(bin().args(["experiment", "--suite", "no-such-suite"])), 2);

    let svg = tmp("good.svg");
    assert_eq!(code(bin().arg("render").arg(&good).arg("--out").arg(&svg)), 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("marker-end"));
}

#[test]
fn cli_retries_exhausted() {
    let run = |retries: &str| {
        bin()
            .args(["generate", "--pipeline", "triangular", "--dims", "24x24", "--seed", "5", "--max-retries", retries])
            .arg("--out")
            .arg(tmp("tri.json"))
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(run("0"), 3);
    assert_eq!(run("0"), 3);
}
