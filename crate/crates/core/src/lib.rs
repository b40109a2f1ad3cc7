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

//! Decentralized (Δ+1)-coloring in the conflict detection model.
//!
//! A vertex only knows its own color and whether some neighbor shares it.
//! Two recoloring processes are simulated:
//!
//! * Decentralized Coloring: a conflicted vertex is selected and takes one
//!   uniform color from `1..=D`.
//! * Persistent Decentralized Coloring: the selected vertex keeps drawing
//!   until it is no longer conflicted.
//!
//! Both support random or fixed starting colorings and random, fixed or
//! adversarial selection orders ([`engine`], [`adversary`]). The [`oracle`]
//! module computes exact expectations on small instances; its functions are
//! generic over [`Scalar`], with [`Rational`] giving exact answers.

pub mod adversary;
pub mod coloring;
pub mod dsu;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod scalar;

pub use adversary::{bad_bipartite_start, AdversaryStrategy, MimicMode};
pub use coloring::{Color, Coloring, PotentialKind};
pub use engine::{
    run_decentralized, run_persistent, Permutation, RunOptions, RunResult, SchedulerPolicy,
    StartPolicy,
};
pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
pub use oracle::ExactValue;
pub use scalar::Scalar;

/// Arbitrary-precision rational used for exact oracle values.
pub type Rational = num_rational::BigRational;

/// Oracle expectation in exact arithmetic.
pub type ExactExpectation = oracle::Expectation<Rational>;

/// Oracle expectation in double precision.
pub type Expectation64 = oracle::Expectation<f64>;

/// Oracle expectation in single precision.
pub type Expectation32 = oracle::Expectation<f32>;
