//! Closed-form reference solutions used as ground truth.

mod analytic;
mod bessel;

pub use analytic::{manufactured_pair, AnalyticField, AnalyticSampler};
pub use bessel::{bessel01, Bessel01};

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Normal-incidence reflection and transmission coefficients of the plane
/// interface between media `mu1` (incident side) and `mu2` at real `lambda`.
pub fn transmission_coefficients(mu1: f64, mu2: f64, lambda: f64) -> Result<(Complex64, Complex64)> {
    if !(mu1 > 0.0 && mu2 > 0.0 && lambda > 0.0) {
        return Err(invalid("mu1, mu2 and lambda must be positive"));
    }
    let k1 = Complex64::new((lambda * mu1).sqrt(), 0.0);
    let k2 = Complex64::new((lambda * mu2).sqrt(), 0.0);
    Ok(analytic::reflection_transmission(k1, k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_cases() {
        let (r, t) = transmission_coefficients(1.0, 1.0, 3.0).unwrap();
        assert_eq!((r, t), (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
        let (r, t) = transmission_coefficients(1.0, 4.0, 1.0).unwrap();
        assert!((r - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((t - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((1.0 * (1.0 - r.norm_sqr()) - 2.0 * t.norm_sqr()).abs() < 1e-15);
        assert!(transmission_coefficients(1.0, 4.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn matching_conditions(mu1 in 0.1f64..10.0, mu2 in 0.1f64..10.0, lambda in 0.01f64..100.0) {
            let (r, t) = transmission_coefficients(mu1, mu2, lambda).unwrap();
            let (k1, k2) = ((lambda * mu1).sqrt(), (lambda * mu2).sqrt());
            prop_assert!((1.0 + r - t).norm() < 1e-14);
            prop_assert!((k1 * (1.0 - r) - k2 * t).norm() < 1e-13 * k1.max(k2));
            prop_assert!((k1 * (1.0 - r.norm_sqr()) - k2 * t.norm_sqr()).abs() < 1e-13 * k1.max(k2));
        }
    }
}
