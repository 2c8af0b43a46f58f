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

//! Finitary factor-of-iid constructions on finite lattice windows:
//! Schreier decorations, balanced orientations, proper edge colourings and
//! perfect matchings, with exact verifiers and enumeration oracles.

mod bipartite;
pub mod decorators;
pub mod derived;
mod dsu;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod lattice;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
