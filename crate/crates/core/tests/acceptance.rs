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

//! Runs every experiment suite and prints one line per acceptance criterion.

use schreier_lab::io::suites::{run_suite, SuiteOptions, SUITES};

fn main() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for &suite in SUITES {
        let res = run_suite(suite, &opts).unwrap_or_else(|e| panic!("{suite}: {e}"));
        for c in &res.criteria {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            println!("[{tag}] criterion {} {} ({suite}): {}", c.id, c.name, c.detail);
            if !c.pass {
                failed.push(format!("{suite}/{}", c.name));
            }
        }
        println!("       {suite} took {:.1} s", res.seconds);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
