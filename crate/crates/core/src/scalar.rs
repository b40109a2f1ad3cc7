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

//! Scalar abstraction used by the exact oracles.
//!
//! Every expectation computed by the oracle is a rational combination of
//! counts, so the only operations required are field arithmetic plus a way to
//! lift integer counts into the scalar type. `f32`/`f64` give fast
//! approximations; [`Rational`](crate::Rational) gives exact answers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Field-like scalar the oracle computes in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// Lift a non-negative integer count.
    fn from_count(n: u64) -> Self;

    /// Closest representable value to `x`. Exact for binary floats when the
    /// scalar is rational.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `num / den`.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    /// Signed integer lift.
    fn from_signed(n: i64) -> Self {
        let magnitude = Self::from_count(n.unsigned_abs());
        if n < 0 {
            Self::zero() - magnitude
        } else {
            magnitude
        }
    }

    /// True when arithmetic in this type is exact.
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_count(n: u64) -> Self {
        n as f32
    }

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_exact() -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced_for_rationals() {
        let r = <BigRational as Scalar>::ratio(6, 4);
        assert_eq!(r, BigRational::new(3.into(), 2.into()));
        assert!(<BigRational as Scalar>::is_exact());
    }

    #[test]
    fn signed_lift() {
        assert_eq!(<f64 as Scalar>::from_signed(-3), -3.0);
        assert_eq!(
            <BigRational as Scalar>::from_signed(-2),
            BigRational::from_integer((-2).into())
        );
        assert_eq!(<f32 as Scalar>::ratio(1, 4), 0.25f32);
    }
}
