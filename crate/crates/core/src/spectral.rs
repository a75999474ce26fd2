//! Spectral parameter `z = λ + iη`, the branch of `k = (zμ)^{1/2}` with
//! `Im k ≥ 0`, and the dimensional constants.
//!
//! The branch is always evaluated through the closed forms for `c_a` and
//! `c_b`, never through a generic complex square root, so the choice of sheet
//! is pinned even on the real axis.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Which closed half-plane a parameter belongs to. Only matters when `η = 0`,
/// where it selects the upper (`+√λ`) or lower (`−√λ`) boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPlane {
    Plus,
    Minus,
}

impl HalfPlane {
    pub fn flip(self) -> Self {
        match self {
            HalfPlane::Plus => HalfPlane::Minus,
            HalfPlane::Minus => HalfPlane::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            HalfPlane::Plus => 1.0,
            HalfPlane::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    lambda: f64,
    eta: f64,
    half_plane: HalfPlane,
}

impl SpectralParam {
    /// Off-axis parameter. The half-plane tag follows the sign of `eta`;
    /// `eta = 0` lands on the `Plus` boundary.
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        let hp = if eta < 0.0 { HalfPlane::Minus } else { HalfPlane::Plus };
        Self::with_half_plane(lambda, eta, hp)
    }

    /// Real-axis boundary value `λ ± i0`.
    pub fn boundary(lambda: f64, half_plane: HalfPlane) -> Result<Self> {
        Self::with_half_plane(lambda, 0.0, half_plane)
    }

    pub fn with_half_plane(lambda: f64, eta: f64, half_plane: HalfPlane) -> Result<Self> {
        if !lambda.is_finite() || !eta.is_finite() {
            return Err(invalid("spectral parameter must be finite"));
        }
        if lambda < 0.0 {
            return Err(invalid(format!("lambda = {lambda} < 0 is unsupported")));
        }
        if (eta > 0.0 && half_plane == HalfPlane::Minus) || (eta < 0.0 && half_plane == HalfPlane::Plus) {
            return Err(invalid("half-plane tag contradicts the sign of eta"));
        }
        Ok(Self { lambda, eta, half_plane })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn half_plane(&self) -> HalfPlane {
        self.half_plane
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.lambda, self.eta)
    }

    pub fn abs_z(&self) -> f64 {
        self.lambda.hypot(self.eta)
    }

    pub fn is_real(&self) -> bool {
        self.eta == 0.0
    }

    /// `conj(z)` in the opposite half-plane.
    pub fn conj(&self) -> Self {
        Self { lambda: self.lambda, eta: -self.eta, half_plane: self.half_plane.flip() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoefficients {
    pub c_a: f64,
    pub c_b: f64,
    /// `e(z) = √(2(|z| + λ))`
    pub e_z: f64,
}

impl BranchCoefficients {
    /// `c_a + i c_b`, the branch root of `z` itself.
    pub fn root(&self) -> Complex64 {
        Complex64::new(self.c_a, self.c_b)
    }
}

pub fn branch_coefficients(z: &SpectralParam) -> Result<BranchCoefficients> {
    let (lambda, eta) = (z.lambda, z.eta);
    let abs_z = z.abs_z();
    if abs_z == 0.0 {
        return Err(invalid("z = 0 has no branch coefficients"));
    }
    let s = abs_z + lambda;
    let e_z = (2.0 * s).sqrt();
    let (c_a, c_b) = if eta == 0.0 {
        (z.half_plane.sign() * lambda.sqrt(), 0.0)
    } else {
        (eta.signum() * (s / 2.0).sqrt(), eta.abs() / e_z)
    };
    Ok(BranchCoefficients { c_a, c_b, e_z })
}

/// `k(x, z)` for a point with coefficient `mu`.
pub fn k_at(z: &SpectralParam, mu: f64) -> Result<Complex64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(invalid(format!("mu = {mu} must be positive")));
    }
    Ok(branch_coefficients(z)?.root() * mu.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionConstants {
    pub c_n: f64,
    pub c_delta: f64,
}

pub fn dimension_constants(n: usize, delta: f64) -> Result<DimensionConstants> {
    if n < 2 {
        return Err(invalid(format!("dimension {n} < 2")));
    }
    check_delta(delta)?;
    let nf = n as f64;
    Ok(DimensionConstants {
        c_n: (nf - 1.0) * (nf - 3.0) / 4.0,
        c_delta: (2.0 * delta - 1.0) / 2f64.powf(2.0 * delta - 1.0),
    })
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.5 && delta <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("delta = {delta} outside (1/2, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_plus_four_i() {
        let z = SpectralParam::new(3.0, 4.0).unwrap();
        let b = branch_coefficients(&z).unwrap();
        assert_eq!((b.c_a, b.c_b), (2.0, 1.0));
        assert_eq!(b.e_z, 4.0);
        assert_eq!(b.root() * b.root(), Complex64::new(3.0, 4.0));
        let k = k_at(&z, 1.0).unwrap();
        assert_eq!(k, Complex64::new(2.0, 1.0));
        assert_eq!(k.norm_sqr(), 5.0);
    }

    #[test]
    fn real_axis_limits() {
        let p = branch_coefficients(&SpectralParam::boundary(9.0, HalfPlane::Plus).unwrap()).unwrap();
        assert_eq!((p.c_a, p.c_b), (3.0, 0.0));
        let m = branch_coefficients(&SpectralParam::boundary(9.0, HalfPlane::Minus).unwrap()).unwrap();
        assert_eq!((m.c_a, m.c_b), (-3.0, 0.0));
        let k = k_at(&SpectralParam::boundary(1.0, HalfPlane::Plus).unwrap(), 4.0).unwrap();
        assert_eq!(k, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn pure_imaginary() {
        let z = SpectralParam::new(0.0, 1.0).unwrap();
        let b = branch_coefficients(&z).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.c_a - r).abs() < 1e-15 && (b.c_b - r).abs() < 1e-15);
        let k = k_at(&z, 2.0).unwrap();
        assert!((k - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!((k * k - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn constants() {
        assert_eq!(dimension_constants(3, 1.0).unwrap().c_n, 0.0);
        assert_eq!(dimension_constants(2, 1.0).unwrap().c_n, -0.25);
        assert_eq!(dimension_constants(2, 1.0).unwrap().c_delta, 0.5);
        let c = dimension_constants(3, 0.75).unwrap().c_delta;
        assert!((c - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!(dimension_constants(3, 0.5).is_err());
        assert!(dimension_constants(3, 1.01).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(branch_coefficients(&SpectralParam::new(0.0, 0.0).unwrap()).is_err());
        assert!(SpectralParam::new(-1.0, 1.0).is_err());
        assert!(SpectralParam::with_half_plane(1.0, 1.0, HalfPlane::Minus).is_err());
        assert!(k_at(&SpectralParam::new(1.0, 1.0).unwrap(), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn squares_back(lambda in 0.0f64..1e6, eta in -1e6f64..1e6, mu in 1e-3f64..1e3) {
            prop_assume!(lambda.hypot(eta) > 1e-6);
            let z = SpectralParam::new(lambda, eta).unwrap();
            let k = k_at(&z, mu).unwrap();
            let target = z.z() * mu;
            prop_assert!((k * k - target).norm() <= 1e-14 * target.norm());
            prop_assert!(k.im >= 0.0);
            if eta != 0.0 {
                prop_assert!(k.im > 0.0);
            }
        }

        #[test]
        fn conjugation_negates_real_part(lambda in 1e-3f64..1e3, eta in -1e3f64..1e3) {
            // k(conj z) = -conj(k(z)): the Im k >= 0 branch is kept on both sides.
            let z = SpectralParam::new(lambda, eta).unwrap();
            let k = k_at(&z, 1.5).unwrap();
            let kc = k_at(&z.conj(), 1.5).unwrap();
            prop_assert_eq!(kc, -k.conj());
        }

        #[test]
        fn continuous_onto_real_axis(lambda in 1e-2f64..1e2) {
            let b0 = branch_coefficients(&SpectralParam::boundary(lambda, HalfPlane::Plus).unwrap()).unwrap();
            let b1 = branch_coefficients(&SpectralParam::new(lambda, 1e-9).unwrap()).unwrap();
            prop_assert!((b0.root() - b1.root()).norm() < 1e-8);
            let m0 = branch_coefficients(&SpectralParam::boundary(lambda, HalfPlane::Minus).unwrap()).unwrap();
            let m1 = branch_coefficients(&SpectralParam::new(lambda, -1e-9).unwrap()).unwrap();
            prop_assert!((m0.root() - m1.root()).norm() < 1e-8);
        }
    }
}
