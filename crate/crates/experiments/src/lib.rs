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

//! Trial runner, statistics, parameter sweeps, drift checks and the
//! acceptance criteria for `dcolor-core`.

pub mod acceptance;
pub mod config;
pub mod drift;
pub mod error;
pub mod oracle;
pub mod stats;
pub mod sweep;
pub mod trials;

pub use acceptance::{
    run_criterion, run_suite, AcceptanceOptions, AcceptanceReport, Criterion, CriterionResult,
    Suite,
};
pub use config::{Algorithm, Counter, ExperimentConfig, GraphSpec, Instance, OrderSpec, StartSpec};
pub use drift::{drift_check, DriftCheckOptions, DriftKind, DriftReport, PotentialFn};
pub use error::{ExperimentError, Result};
pub use oracle::{expected_draws, OracleAnswer};
pub use stats::{Accumulator, SummaryStats, Z99};
pub use sweep::{sweep, SweepAxis, SweepRow, SweepTable};
pub use trials::{
    run_instance, run_trials, write_report, TrialOptions, TrialOutcome, TrialReport, TrialRow,
};
