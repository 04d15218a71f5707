use alloc::vec::Vec;
use core::fmt;

/// Where the distortion side information is available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Neither,
    Decoder,
    Encoder,
    Both,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Neither,
        Scenario::Decoder,
        Scenario::Encoder,
        Scenario::Both,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::Neither => "NONE",
            Scenario::Decoder => "DEC",
            Scenario::Encoder => "ENC",
            Scenario::Both => "BOTH",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.label().eq_ignore_ascii_case(label))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One point of a rate-distortion curve found at Lagrange slope `slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdPoint {
    /// nats per sample
    pub rate: f64,
    pub distortion: f64,
    pub slope: f64,
    pub scenario: Scenario,
}

impl RdPoint {
    /// Value of the Lagrangian `R + λ·D` at this point.
    pub fn lagrangian(&self) -> f64 {
        self.rate + self.slope * self.distortion
    }

    /// Supporting line `R(d) ≥ F − λ·d` through this point.
    #[inline]
    fn support(&self, d: f64) -> f64 {
        self.lagrangian() - self.slope * d
    }
}

/// Result of comparing two curves at matched distortions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveGap {
    /// `max |R_a(D) − R_b(D)|` over the common distortion range.
    pub max_abs_gap: f64,
    /// `max (R_a(D) − R_b(D))`, positive when `a` lies above `b` somewhere.
    pub max_excess: f64,
    /// Distortion where `max_abs_gap` is attained.
    pub at_distortion: f64,
    /// Slope of the supporting line of `a` active at that distortion.
    pub at_slope: f64,
    /// Number of distortions compared.
    pub evaluated: usize,
}

/// A rate-distortion curve swept by slope.
///
/// Points are kept in increasing slope order, which is decreasing
/// distortion. Matched-distortion values come from the envelope of the
/// supporting lines `R = F_j − λ_j·D`: it passes through every swept point,
/// lower-bounds the convex curve in between, and preserves the pointwise
/// ordering of Lagrangians between two curves swept on the same slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct RdCurve {
    pub scenario: Scenario,
    points: Vec<RdPoint>,
}

impl RdCurve {
    pub fn new(scenario: Scenario, mut points: Vec<RdPoint>) -> Self {
        points.sort_by(|a, b| a.slope.total_cmp(&b.slope));
        Self { scenario, points }
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(min D, max D)` over the swept points.
    pub fn distortion_range(&self) -> Option<(f64, f64)> {
        let lo = self.points.iter().map(|p| p.distortion).reduce(f64::min)?;
        let hi = self.points.iter().map(|p| p.distortion).reduce(f64::max)?;
        Some((lo, hi))
    }

    fn active_line(&self, d: f64) -> Option<&RdPoint> {
        self.points
            .iter()
            .max_by(|a, b| a.support(d).total_cmp(&b.support(d)))
    }

    /// Rate at distortion `d` from the supporting-line envelope; `None`
    /// outside the swept range.
    pub fn rate_at(&self, d: f64) -> Option<f64> {
        let (lo, hi) = self.distortion_range()?;
        if d < lo - 1e-12 || d > hi + 1e-12 {
            return None;
        }
        self.active_line(d).map(|p| p.support(d).max(0.0))
    }

    /// Rate at distortion `d` by linear interpolation between the two swept
    /// points bracketing it.
    pub fn chord_rate_at(&self, d: f64) -> Option<f64> {
        let sorted = self.sorted_by_distortion();
        let first = sorted.first()?;
        let last = sorted.last()?;
        if d < first.distortion - 1e-12 || d > last.distortion + 1e-12 {
            return None;
        }
        for w in sorted.windows(2) {
            let (a, b) = (w[0], w[1]);
            if d <= b.distortion {
                let span = b.distortion - a.distortion;
                if span <= 1e-15 {
                    return Some(a.rate.min(b.rate));
                }
                let t = (d - a.distortion) / span;
                return Some(a.rate + t * (b.rate - a.rate));
            }
        }
        Some(last.rate)
    }

    fn sorted_by_distortion(&self) -> Vec<RdPoint> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.distortion
                .total_cmp(&b.distortion)
                .then(b.rate.total_cmp(&a.rate))
        });
        pts
    }

    /// Rates never increase with distortion (within `tol`).
    pub fn is_non_increasing(&self, tol: f64) -> bool {
        self.sorted_by_distortion()
            .windows(2)
            .all(|w| w[1].rate <= w[0].rate + tol)
    }

    /// Consecutive chord slopes are non-decreasing. The tolerance is in
    /// rate units: every point may sit at most `tol` above the chord of its
    /// neighbours, which keeps nearly coincident points from turning
    /// rounding noise into huge slope differences.
    pub fn is_convex(&self, tol: f64) -> bool {
        self.sorted_by_distortion().windows(3).all(|w| {
            let (a, b, c) = (&w[0], &w[1], &w[2]);
            let span = c.distortion - a.distortion;
            if span <= 0.0 {
                return b.rate <= a.rate.max(c.rate) + tol;
            }
            let t = (b.distortion - a.distortion) / span;
            b.rate <= a.rate + t * (c.rate - a.rate) + tol
        })
    }

    /// Distortions where either envelope can change slope inside `[lo, hi]`.
    fn knots(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        out.extend(
            self.points
                .iter()
                .map(|p| p.distortion)
                .filter(|d| *d >= lo && *d <= hi),
        );
        for w in self.points.windows(2) {
            let dl = w[1].slope - w[0].slope;
            if dl > 0.0 {
                let d = (w[1].lagrangian() - w[0].lagrangian()) / dl;
                if d >= lo && d <= hi {
                    out.push(d);
                }
            }
        }
    }

    /// Compares `self` against `other` at matched distortions over the
    /// common range. Both envelopes are piecewise linear, so evaluating at
    /// the union of their knots finds the exact extreme gaps.
    pub fn gap_to(&self, other: &RdCurve) -> Option<CurveGap> {
        let (a_lo, a_hi) = self.distortion_range()?;
        let (b_lo, b_hi) = other.distortion_range()?;
        let (lo, hi) = (a_lo.max(b_lo), a_hi.min(b_hi));
        if lo > hi {
            return None;
        }
        let mut ds = alloc::vec![lo, hi];
        self.knots(lo, hi, &mut ds);
        other.knots(lo, hi, &mut ds);
        let mut gap = CurveGap {
            max_abs_gap: 0.0,
            max_excess: f64::NEG_INFINITY,
            at_distortion: lo,
            at_slope: f64::NAN,
            evaluated: 0,
        };
        for d in ds {
            let (Some(ra), Some(rb)) = (self.rate_at(d), other.rate_at(d)) else {
                continue;
            };
            gap.evaluated += 1;
            let diff = ra - rb;
            gap.max_excess = gap.max_excess.max(diff);
            if diff.abs() >= gap.max_abs_gap {
                gap.max_abs_gap = diff.abs();
                gap.at_distortion = d;
                gap.at_slope = self.active_line(d).map_or(f64::NAN, |p| p.slope);
            }
        }
        Some(gap)
    }
}
