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

//! Exact expectations for a config, dispatched to the right oracle.

use dcolor_core::oracle::{
    exact_expected_recolorings_dc_with, exact_expected_recolorings_persistent, ChainScheduler,
    PersistentOrder, SolveMethod, SolveOptions,
};
use dcolor_core::{AdversaryStrategy, ExactValue, Rational, SchedulerPolicy};
use serde::Serialize;

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleAnswer {
    /// Expected step-3 draws as `p/q (≈ x)`; for an iterated solve the
    /// fraction is the midpoint of the certified bracket.
    pub step3_draws: String,
    pub approx: f64,
    /// Adds the n initial draws.
    pub total_draws: f64,
    pub method: String,
    pub error_bound: f64,
    pub transient_states: Option<usize>,
}

/// Expected step-3 draws of `cfg`. Chains with more than `exact_state_limit`
/// transient states are solved by certified iteration.
pub fn expected_draws(
    cfg: &ExperimentConfig,
    exact_state_limit: Option<usize>,
) -> Result<OracleAnswer> {
    let inst = cfg.resolve()?;
    let n = inst.graph.vertex_count() as f64;
    let unsupported =
        |what: &str| ExperimentError::Config(format!("the oracle does not support {what}"));
    match inst.algorithm {
        Algorithm::Dc => {
            let chain = match &inst.scheduler {
                SchedulerPolicy::UniformRandom => ChainScheduler::UniformRandom,
                SchedulerPolicy::FixedPermutation(p) => ChainScheduler::FixedPermutation(p.clone()),
                SchedulerPolicy::Adversary(AdversaryStrategy::MimicPersistent(mode)) => {
                    ChainScheduler::MimicPersistent(*mode)
                }
                SchedulerPolicy::Adversary(AdversaryStrategy::MinPhiDrift) => {
                    ChainScheduler::MinPhiDrift
                }
                SchedulerPolicy::Adversary(AdversaryStrategy::MaxConflicted) => {
                    ChainScheduler::MaxConflicted
                }
                SchedulerPolicy::Adversary(AdversaryStrategy::Scripted(_)) => {
                    return Err(unsupported("scripted orders"))
                }
            };
            let mut opts = SolveOptions::default();
            if let Some(limit) = exact_state_limit {
                opts.exact_state_limit = limit;
            }
            let e = exact_expected_recolorings_dc_with::<Rational>(
                &inst.graph,
                inst.palette,
                &inst.start,
                &chain,
                &opts,
            )?;
            let value = ExactValue(e.value);
            Ok(OracleAnswer {
                approx: value.to_f64(),
                total_draws: value.to_f64() + n,
                step3_draws: value.to_string(),
                method: match e.method {
                    SolveMethod::ExactElimination => "exact_elimination".into(),
                    SolveMethod::CertifiedIteration { iterations } => {
                        format!("certified_iteration ({iterations} sweeps)")
                    }
                },
                error_bound: e.error_bound,
                transient_states: Some(e.transient_states),
            })
        }
        Algorithm::Persistent => {
            let order = match &inst.scheduler {
                SchedulerPolicy::UniformRandom => PersistentOrder::AllPermutationsAverage,
                SchedulerPolicy::FixedPermutation(p) => PersistentOrder::Fixed(p.clone()),
                SchedulerPolicy::Adversary(_) => {
                    return Err(unsupported("adversarial orders for the persistent variant"))
                }
            };
            let v: Rational = exact_expected_recolorings_persistent(
                &inst.graph,
                inst.palette,
                &inst.start,
                &order,
            )?;
            let value = ExactValue(v);
            Ok(OracleAnswer {
                approx: value.to_f64(),
                total_draws: value.to_f64() + n,
                step3_draws: value.to_string(),
                method: "exact_recursion".into(),
                error_bound: 0.0,
                transient_states: None,
            })
        }
    }
}
