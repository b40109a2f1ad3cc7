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

//! Summary statistics from exact integer sums, so the result does not depend
//! on how trials were split across threads.

use serde::{Deserialize, Serialize};

/// z for a two-sided 99% normal interval.
pub const Z99: f64 = 2.576;

/// Running integer moments of a counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
    pub min: Option<u64>,
    pub max: Option<u64>,
}

impl Accumulator {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += u128::from(x);
        self.sum_sq += u128::from(x) * u128::from(x);
        self.min = Some(self.min.map_or(x, |m| m.min(x)));
        self.max = Some(self.max.map_or(x, |m| m.max(x)));
    }

    pub fn merge(mut self, other: Accumulator) -> Accumulator {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, other.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn summarize(&self, cap_hits: u64) -> SummaryStats {
        let n = self.count;
        let mean = if n == 0 {
            f64::NAN
        } else {
            self.sum as f64 / n as f64
        };
        // n·Σx² − (Σx)² is exact in integers and never negative.
        let sd = if n < 2 {
            0.0
        } else {
            let numer = u128::from(n) * self.sum_sq - self.sum * self.sum;
            (numer as f64 / (n as f64 * (n - 1) as f64)).sqrt()
        };
        let se = if n == 0 {
            f64::NAN
        } else {
            sd / (n as f64).sqrt()
        };
        SummaryStats {
            trials: n,
            mean,
            sd,
            se,
            ci_low: mean - Z99 * se,
            ci_high: mean + Z99 * se,
            min: self.min.unwrap_or(0),
            max: self.max.unwrap_or(0),
            cap_hits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Trials that entered the statistics.
    pub trials: u64,
    pub mean: f64,
    /// Sample standard deviation.
    pub sd: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub min: u64,
    pub max: u64,
    /// Trials that stopped at the step cap, whether included or not.
    pub cap_hits: u64,
}

impl SummaryStats {
    pub fn from_samples(samples: &[u64]) -> SummaryStats {
        let mut acc = Accumulator::default();
        for &x in samples {
            acc.push(x);
        }
        acc.summarize(0)
    }

    /// |mean − target| ≤ k·SE.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.se
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(xs: &[u64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
        let var = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }

    #[test]
    fn matches_two_pass_formulas() {
        let xs = [3u64, 7, 7, 19, 0, 4, 11];
        let s = SummaryStats::from_samples(&xs);
        let (mean, sd) = naive(&xs);
        assert!((s.mean - mean).abs() < 1e-12);
        assert!((s.sd - sd).abs() < 1e-12);
        assert!((s.se - sd / 7f64.sqrt()).abs() < 1e-12);
        assert_eq!((s.min, s.max, s.trials), (0, 19, 7));
        assert!(s.ci_low <= s.mean && s.mean <= s.ci_high);
        assert!((s.ci_high - s.mean - Z99 * s.se).abs() < 1e-12);
    }

    #[test]
    fn constant_samples_have_zero_spread() {
        let s = SummaryStats::from_samples(&[0; 10]);
        assert_eq!((s.mean, s.sd, s.se), (0.0, 0.0, 0.0));
        let one = SummaryStats::from_samples(&[5]);
        assert_eq!((one.mean, one.sd), (5.0, 0.0));
    }

    #[test]
    fn merge_is_order_independent() {
        let xs: Vec<u64> = (0..100).map(|i| (i * 37 % 23) as u64).collect();
        let mut whole = Accumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Accumulator::default(), Accumulator::default());
        xs[..41].iter().for_each(|&x| a.push(x));
        xs[41..].iter().for_each(|&x| b.push(x));
        assert_eq!(b.merge(a), whole);
        assert_eq!(Accumulator::default().merge(whole), whole);
    }

    #[test]
    fn empty_is_nan() {
        let s = Accumulator::default().summarize(3);
        assert!(s.mean.is_nan());
        assert_eq!(s.cap_hits, 3);
    }
}
