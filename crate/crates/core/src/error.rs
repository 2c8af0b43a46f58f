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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported dimensions: {0}")]
    UnsupportedDims(String),
    #[error("input graph is not regular of even degree: {0}")]
    NonRegularInput(String),
    #[error("operation needs a {expected} lattice, got {got}")]
    WrongKind { expected: &'static str, got: String },
    #[error("face {0} has no coin")]
    MissingFaceChoice(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("zero alternatives")]
    ZeroAlternatives,
    #[error("cluster {0} wraps the torus")]
    WrappingCluster(u32),
    #[error("ambiguous parent for cluster {0}")]
    AmbiguousParent(u32),
    #[error("coarsening rounds {m} too few for spacing {k}")]
    InsufficientCoarsening { m: u32, k: usize },
    #[error("hierarchy spacing {have:?} below required {need}")]
    InsufficientSpacing { have: Option<usize>, need: usize },
    #[error("graph has no face data")]
    FaceDataMissing,
    #[error("monochromatic cycle through edge {0} wraps the torus")]
    WrappingMonochromeCycle(u32),
    #[error("colour class component through vertex {0} is not a cycle")]
    NonCycleComponent(u32),
    #[error("no independent set")]
    NoIndependentSet,
    #[error("residual decomposition failed: {0}")]
    ResidualDecompositionFailed(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("no admissible seam location")]
    SeamBlocked,
    #[error("odd monochromatic cycle through edge {0}")]
    OddCycle(u32),
    #[error("colouring incomplete at edge {0}")]
    IncompleteColouring(u32),
    #[error("source decoration invalid at vertex {0}")]
    InvalidSourceDecoration(u32),
    #[error("d must be even, got {0}")]
    OddD(usize),
    #[error("orientation not balanced at vertex {0}")]
    NotBalanced(u32),
    #[error("graph too large for enumeration: {0} edges")]
    TooLarge(usize),
    #[error("retries exhausted after {0} trials: {1}")]
    RetriesExhausted(u32, String),
    #[error("kind {0} is not planar")]
    NonPlanarKind(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors after which a fresh set of channels may succeed.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            Error::WrappingCluster(_)
                | Error::AmbiguousParent(_)
                | Error::WrappingMonochromeCycle(_)
                | Error::SeamBlocked
                | Error::NoIndependentSet
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("json: {e}"))
    }
}
