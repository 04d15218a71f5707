//! Digamma and log-gamma for positive arguments: upward recurrence into the
//! range where the asymptotic series is accurate to rounding, then the
//! series.

use crate::math::ln;

/// Below this the recurrences shift the argument up first.
const SERIES_FROM: f64 = 10.0;

/// `ψ(x) = d/dx ln Γ(x)` for `x > 0`; NaN otherwise.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return if x == f64::INFINITY {
            f64::INFINITY
        } else {
            f64::NAN
        };
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < SERIES_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k x^2k), k = 1..6
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    shift + ln(x) - 0.5 / x - tail
}

/// `ln Γ(x)` for `x > 0`; NaN otherwise.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return if x == f64::INFINITY {
            f64::INFINITY
        } else {
            f64::NAN
        };
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < SERIES_FROM {
        shift -= ln(x);
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let tail = (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r * (1.0 / 1680.0 - r / 1188.0)))) / x;
    let half_ln_two_pi = 0.918_938_533_204_672_8;
    shift + (x - 0.5) * ln(x) - x + half_ln_two_pi + tail
}
