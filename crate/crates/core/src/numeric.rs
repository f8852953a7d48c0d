//! Small numerical helpers shared by the measure and the oracle.

use core::f64::consts::PI;

/// Neumaier-compensated running sum.
///
/// The inclusion-exclusion sums alternate in sign and the terms can be of
/// similar magnitude, so plain accumulation loses digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if libm::fabs(self.sum) >= libm::fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// `k!` as a float. Exact for every `k` this crate uses (k ≤ 22).
pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `Γ(k/2 + 1)` through the half-integer recurrence, starting from
/// `Γ(1) = 1` or `Γ(1/2) = √π`.
pub fn gamma_half_integer_plus_one(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        factorial(k / 2)
    } else {
        // Γ(1/2) · (1/2)(3/2)…(k/2)
        let mut g = libm::sqrt(PI);
        let mut x = 0.5;
        while x <= k as f64 / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Volume of the Euclidean unit ball in `k` dimensions,
/// `π^{k/2} / Γ(k/2 + 1)`.
pub fn unit_ball_volume(k: u32) -> f64 {
    libm::pow(PI, k as f64 / 2.0) / gamma_half_integer_plus_one(k)
}

/// The per-domain factor `k! · π^{k/2} / Γ(k/2 + 1)` of the combined-metric
/// hyperball volume. It is 1 for `k = 0` and 2 for `k = 1`.
pub fn domain_ball_factor(k: u32) -> f64 {
    factorial(k) * unit_ball_volume(k)
}
