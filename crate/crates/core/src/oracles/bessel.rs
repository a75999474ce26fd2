//! Bessel functions of orders 0 and 1 for real positive arguments.
//!
//! Below [`ASYMPTOTIC_FROM`] the `J_k` come from Miller's backward recurrence
//! normalized by `J_0 + 2 Σ J_{2k} = 1`, and `Y_0`, `Y_1` from the Neumann
//! series in those `J_k`. Above it the Hankel asymptotic expansion is summed
//! to its smallest term.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_FROM: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Bessel01 {
    /// `H_0^{(1)}(x) = J_0 + i Y_0`
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    /// `H_1^{(1)}(x) = J_1 + i Y_1`
    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

/// `J_0, J_1, Y_0, Y_1` at `x > 0`.
pub fn bessel01(x: f64) -> Bessel01 {
    assert!(x > 0.0 && x.is_finite(), "bessel01 needs a finite positive argument, got {x}");
    if x >= ASYMPTOTIC_FROM {
        asymptotic(x)
    } else {
        miller_neumann(x)
    }
}

fn miller_neumann(x: f64) -> Bessel01 {
    let start = {
        let m = (x + 20.0 + 6.0 * x.sqrt()).ceil() as usize;
        m + m % 2
    };
    // j[k] ∝ J_k(x), k = 0..=start+1
    let mut j = vec![0.0; start + 2];
    j[start + 1] = 0.0;
    j[start] = 1e-30;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in &mut j[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * j[k];
    }
    for v in &mut j {
        *v /= norm;
    }

    let ln_term = (x / 2.0).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=start / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
    }
    let y0 = 2.0 / PI * (ln_term * j[0] - 2.0 * s0);
    let y1 = 2.0 / PI * (-j[0] / x + ln_term * j[1] + s1);
    Bessel01 { j0: j[0], j1: j[1], y0, y1 }
}

/// `(P, Q)` of the Hankel expansion for order `nu`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        // a_k / x^k enters Q for odd k, P for even k, with sign (−1)^{⌊k/2⌋}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
    }
    (p, q)
}

fn asymptotic(x: f64) -> Bessel01 {
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    // χ0 = x − π/4, χ1 = x − 3π/4 without forming x − π/4 explicitly
    let (c0, s0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let (c1, s1) = ((s - c) * FRAC_1_SQRT_2, -(c + s) * FRAC_1_SQRT_2);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    Bessel01 {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, J0, J1, Y0, Y1) from an unrelated rational-approximation library.
    const REFERENCE: [(f64, f64, f64, f64, f64); 10] = [
        (0.001, 0.9999997500000155, 0.0004999999375000026, -4.471416611375923, -636.6221672311395),
        (0.1, 0.99750156206604, 0.049937526036242, -1.5342386513503667, -6.458951094702027),
        (1.0, 0.7651976865579665, 0.44005058574493355, 0.08825696421567697, -0.7812128213002888),
        (2.5, -0.04838377646819804, 0.497094102464274, 0.498070359615232, 0.14591813796678577),
        (7.3, 0.2882169476350144, 0.08257043049325785, 0.0627738863740376, -0.2845943718680721),
        (10.0, -0.24593576445134832, 0.04347274616886141, 0.05567116728359961, 0.24901542420695388),
        (24.9, 0.08324596835301536, -0.1348556995314088, -0.1364991839967653, -0.0860025575955544),
        (25.1, 0.10827567149994938, -0.11463478413442246, -0.11676770763803707, -0.11062223322783109),
        (60.0, -0.09147180408906201, 0.046598383758166224, 0.047358952209449155, 0.09186960936986693),
        (1000.0, 0.02478668615242003, 0.00472831190708902, 0.004715917977623586, -0.024784331292351868),
    ];

    /// Bessel's integrals, evaluated with quadratures unrelated to the
    /// implementation:
    /// `J_n = (1/π)∫_0^π cos(nτ − x sin τ)dτ`,
    /// `Y_n = (1/π)∫_0^π sin(x sin τ − nτ)dτ − (1/π)∫_0^∞ (e^{nt} + (−1)^n e^{−nt}) e^{−x sinh t} dt`.
    fn by_integrals(x: f64) -> Bessel01 {
        let m = 4000;
        let trap = |f: &dyn Fn(f64) -> f64| -> f64 {
            let h = PI / m as f64;
            let mut s = f(0.0) + f(PI);
            for i in 1..m {
                s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / (3.0 * PI)
        };
        let j0 = trap(&|t| (x * t.sin()).cos());
        let j1 = trap(&|t| (t - x * t.sin()).cos());
        let a0 = trap(&|t| (x * t.sin()).sin());
        let a1 = trap(&|t| (x * t.sin() - t).sin());
        // tail integrals on [0, T] by composite Simpson with many panels
        let t_max = (60.0 / x).asinh() + 1.0;
        let panels = 40_000;
        let simpson = |f: &dyn Fn(f64) -> f64| -> f64 {
            let h = t_max / panels as f64;
            let mut s = f(0.0) + f(t_max);
            for i in 1..panels {
                s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let b0 = simpson(&|t| 2.0 * (-x * t.sinh()).exp());
        let b1 = simpson(&|t| (t.exp() - (-t).exp()) * (-x * t.sinh()).exp());
        Bessel01 { j0, j1, y0: a0 - b0 / PI, y1: a1 - b1 / PI }
    }

    #[test]
    fn matches_reference_values() {
        for &(x, j0, j1, y0, y1) in &REFERENCE {
            let b = bessel01(x);
            for (got, want) in [(b.j0, j0), (b.j1, j1), (b.y0, y0), (b.y1, y1)] {
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1e-2), "x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn matches_integral_representations() {
        for x in [0.3, 1.0, 3.7, 8.0, 15.0, 24.0, 26.0, 40.0] {
            let a = bessel01(x);
            let b = by_integrals(x);
            for (got, want) in [(a.j0, b.j0), (a.j1, b.j1), (a.y0, b.y0), (a.y1, b.y1)] {
                assert!((got - want).abs() < 1e-9, "x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn hankel_at_one() {
        let h = bessel01(1.0).h0();
        assert!((h.re - 0.76520).abs() < 1e-5 && (h.im - 0.08826).abs() < 1e-5);
    }

    #[test]
    fn wronskian() {
        // J0 Y0' − J0' Y0 = J1 Y0 − J0 Y1 = 2/(πx)
        let mut x = 0.1;
        while x <= 50.0 {
            let b = bessel01(x);
            let w = b.j1 * b.y0 - b.j0 * b.y1;
            assert!((w - 2.0 / (PI * x)).abs() < 1e-8 * (2.0 / (PI * x)), "x={x}");
            x += 0.0731;
        }
    }

    #[test]
    fn continuous_across_method_switch() {
        let a = bessel01(ASYMPTOTIC_FROM * (1.0 - 1e-12));
        let b = bessel01(ASYMPTOTIC_FROM);
        // the series side carries a few ulps of cancellation from the Neumann sums
        for (p, q) in [(a.j0, b.j0), (a.j1, b.j1), (a.y0, b.y0), (a.y1, b.y1)] {
            assert!((p - q).abs() < 1e-11, "{p} vs {q}");
        }
    }
}
