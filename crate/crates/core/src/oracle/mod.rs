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

//! Exact ground truth for small instances.

mod drift;
mod markov;
mod persistent;
mod states;

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

pub use drift::{
    conflicted_vertex_table, exact_expected_conflict_deltas, exact_expected_phi_delta,
    expected_delta_with, recolor_deltas, verify_fig2_deltas, ConflictDeltas,
};
pub use markov::{
    exact_expected_recolorings_dc, exact_expected_recolorings_dc_with, ChainScheduler, Expectation,
    SolveMethod, SolveOptions,
};
pub use persistent::{
    exact_expected_recolorings_persistent, PersistentOrder, MAX_PERMUTATION_VERTICES,
};
pub use states::MAX_RAW_STATES;

/// An exact rational, displayed as `p/q (≈ decimal)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(pub Rational);

impl ExactValue {
    pub fn new(value: Rational) -> ExactValue {
        ExactValue(value)
    }

    pub fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> String {
        self.0.numer().to_string()
    }

    pub fn denom(&self) -> String {
        self.0.denom().to_string()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<Rational> for ExactValue {
    fn from(value: Rational) -> Self {
        ExactValue(value)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} (≈ {})",
            self.0.numer(),
            self.0.denom(),
            self.to_f64()
        )
    }
}

/// H_k = Σ_{i=1}^{k} 1/i, with H_0 = 0.
pub fn harmonic<S: Scalar>(k: u64) -> S {
    (1..=k).fold(S::zero(), |acc, i| acc + S::ratio(1, i))
}

/// Expected uniform draws from a universe of `universe` coupons until
/// `distinct` different ones have been seen, Σ_{i=0}^{k−1} D/(D−i). The first
/// draw is included.
pub fn expected_draws_to_collect<S: Scalar>(universe: u64, distinct: u64) -> Result<S> {
    if distinct == 0 || distinct > universe {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= D, got D = {universe}, k = {distinct}"
        )));
    }
    Ok((0..distinct).fold(S::zero(), |acc, i| acc + S::ratio(universe, universe - i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<Rational>(0), r(0, 1));
        assert_eq!(harmonic::<Rational>(1), r(1, 1));
        assert_eq!(harmonic::<Rational>(3), r(11, 6));
        assert_eq!(harmonic::<Rational>(3) * r(3, 1), r(11, 2));
        assert_eq!(harmonic::<Rational>(8) * r(8, 1), r(761, 35));
        assert!((harmonic::<f64>(8) * 8.0 - 21.742857142857142).abs() < 1e-12);
    }

    #[test]
    fn collecting() {
        assert_eq!(
            expected_draws_to_collect::<Rational>(7, 1).unwrap(),
            r(1, 1)
        );
        assert_eq!(
            expected_draws_to_collect::<Rational>(4, 3).unwrap(),
            r(13, 3)
        );
        for n in 1..12u64 {
            assert_eq!(
                expected_draws_to_collect::<Rational>(n, n).unwrap(),
                harmonic::<Rational>(n) * r(n as i64, 1)
            );
        }
        assert!(expected_draws_to_collect::<f64>(3, 4).is_err());
        assert!(expected_draws_to_collect::<f64>(3, 0).is_err());
    }

    #[test]
    fn collecting_is_dominated_by_the_clique_bound() {
        // E[collect d+1 of D] <= (d+1) H_d + 1 whenever D >= d+1 >= 2.
        for d in 1..10u64 {
            let bound = harmonic::<Rational>(d) * Rational::from_integer((d + 1).into()) + r(1, 1);
            for universe in d + 1..d + 12 {
                assert!(expected_draws_to_collect::<Rational>(universe, d + 1).unwrap() <= bound);
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(ExactValue(r(5, 2)).to_string(), "5/2 (≈ 2.5)");
        assert_eq!(ExactValue(r(4, 1)).to_string(), "4/1 (≈ 4)");
    }
}
