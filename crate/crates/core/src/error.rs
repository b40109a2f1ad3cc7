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

/// Errors produced while building graphs and colorings or running the
/// simulation and the oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("palette size must be at least 1")]
    EmptyPalette,
    #[error("color {color} outside palette 1..={palette}")]
    ColorOutOfRange { color: u32, palette: u32 },
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("scheduler selected vertex {0}, which is not conflicted")]
    NotConflicted(usize),
    #[error("persistent run selected vertex {0} twice")]
    Reselected(usize),
    #[error("scripted order exhausted after {0} selections")]
    ScriptExhausted(usize),
    #[error("state space too large: {what} = {size} exceeds guard {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
