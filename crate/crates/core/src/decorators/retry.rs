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

//! Rejection sampling over retry epochs.

use crate::rng::LabelField;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Retried<T> {
    pub value: T,
    /// Rejected trials before the accepted one.
    pub retries: u32,
    pub rejected: Vec<String>,
}

/// Runs `trial` on epochs `0, 1, ...` until it succeeds or fails with a
/// non-retryable error. At most `max_retries` rejections are tolerated.
pub fn with_retries<T>(
    field: &LabelField,
    max_retries: u32,
    mut trial: impl FnMut(&LabelField) -> Result<T>,
) -> Result<Retried<T>> {
    let mut rejected = Vec::new();
    for epoch in 0..=max_retries {
        match trial(&field.with_epoch(epoch)) {
            Ok(value) => return Ok(Retried { value, retries: epoch, rejected }),
            Err(e) if e.is_retryable() => rejected.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(max_retries + 1, rejected.last().cloned().unwrap_or_default()))
}
