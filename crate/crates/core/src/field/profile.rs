use crate::error::{invalid, Result};

/// Radial weight ξ(r) used by the multiplier identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightProfile {
    /// `r` up to `r0`, then constant.
    Truncated { r0: f64 },
    /// `r` up to 1, then `2^{−(2δ−1)}(1+r)^{2δ−1}`.
    PowerDelta { delta: f64 },
    /// `r²` up to `r0`, then `r0^{2−α} r^α`.
    TwoDAlpha { r0: f64, alpha: f64 },
    /// `r²/2` up to 1/2, `2^{−2δ}(1+r)^{2δ−1}` from 1 on, cubic Hermite between.
    TwoDDelta { delta: f64 },
}

impl WeightProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightProfile::Truncated { r0 } => r0 > 0.0,
            WeightProfile::PowerDelta { delta } | WeightProfile::TwoDDelta { delta } => delta > 0.5 && delta <= 1.0,
            WeightProfile::TwoDAlpha { r0, alpha } => r0 > 0.0 && alpha > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("bad weight profile {self:?}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightProfile::Truncated { .. } => "truncated",
            WeightProfile::PowerDelta { .. } => "power_delta",
            WeightProfile::TwoDAlpha { .. } => "two_d_alpha",
            WeightProfile::TwoDDelta { .. } => "two_d_delta",
        }
    }

    /// Radii where ξ′ may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            WeightProfile::Truncated { r0 } | WeightProfile::TwoDAlpha { r0, .. } => vec![r0],
            WeightProfile::PowerDelta { .. } => vec![1.0],
            WeightProfile::TwoDDelta { .. } => vec![0.5, 1.0],
        }
    }

    /// `(ξ(r), ξ′(r))`; at a breakpoint the outer piece is used.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match *self {
            WeightProfile::Truncated { r0 } => {
                if r < r0 {
                    (r, 1.0)
                } else {
                    (r0, 0.0)
                }
            }
            WeightProfile::PowerDelta { delta } => {
                if r < 1.0 {
                    (r, 1.0)
                } else {
                    power_tail(r, delta, -(2.0 * delta - 1.0))
                }
            }
            WeightProfile::TwoDAlpha { r0, alpha } => {
                if r < r0 {
                    (r * r, 2.0 * r)
                } else {
                    let c = r0.powf(2.0 - alpha);
                    (c * r.powf(alpha), c * alpha * r.powf(alpha - 1.0))
                }
            }
            WeightProfile::TwoDDelta { delta } => {
                if r < 0.5 {
                    (r * r / 2.0, r)
                } else if r >= 1.0 {
                    power_tail(r, delta, -2.0 * delta)
                } else {
                    let (p0, m0) = (0.125, 0.5);
                    let (p1, m1) = power_tail(1.0, delta, -2.0 * delta);
                    hermite(0.5, 1.0, p0, m0, p1, m1, r)
                }
            }
        }
    }
}

/// `2^e (1+r)^{2δ−1}` and its derivative.
fn power_tail(r: f64, delta: f64, e: f64) -> (f64, f64) {
    let p = 2.0 * delta - 1.0;
    let c = 2f64.powf(e);
    (c * (1.0 + r).powf(p), c * p * (1.0 + r).powf(p - 1.0))
}

fn hermite(a: f64, b: f64, pa: f64, ma: f64, pb: f64, mb: f64, r: f64) -> (f64, f64) {
    let h = b - a;
    let t = (r - a) / h;
    let (t2, t3) = (t * t, t * t * t);
    let v = (2.0 * t3 - 3.0 * t2 + 1.0) * pa + (t3 - 2.0 * t2 + t) * h * ma + (-2.0 * t3 + 3.0 * t2) * pb + (t3 - t2) * h * mb;
    let d = ((6.0 * t2 - 6.0 * t) * pa + (3.0 * t2 - 4.0 * t + 1.0) * h * ma + (-6.0 * t2 + 6.0 * t) * pb + (3.0 * t2 - 2.0 * t) * h * mb) / h;
    (v, d)
}
