//! Closed-form profile functions of the rotational catenoid family.
//!
//! With `K = sqrt(a^2 - 1/4)`:
//!
//! * `A(s)^2 = a cosh(2s) + 1/2`
//! * `B(s)^2 = a cosh(2s) - 1/2`
//! * `|II|^2(s) = 2K^2 / B(s)^4`
//!
//! `B^2` is evaluated as `(a - 1/2) + 2a sinh^2 s` to avoid cancellation
//! when `a` is close to `1/2`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Width of the near-degenerate window above `a = 1/2`.
pub const NEAR_DEGENERATE_WIDTH: f64 = 1e-4;

/// Family parameter `a > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ParamA(f64);

impl ParamA {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.5 {
            Ok(Self(a))
        } else {
            Err(LabError::Domain(a))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `a - 1/2`, the distance to the degenerate endpoint.
    #[inline]
    pub fn offset(self) -> f64 {
        self.0 - 0.5
    }

    /// `K^2 = (a - 1/2)(a + 1/2)`.
    #[inline]
    pub fn k_squared(self) -> f64 {
        self.offset() * (self.0 + 0.5)
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.k_squared().sqrt()
    }

    /// True inside `(1/2, 1/2 + 1e-4)`, where `B(0)` is small enough to
    /// degrade conditioning.
    pub fn is_near_degenerate(self) -> bool {
        self.offset() < NEAR_DEGENERATE_WIDTH
    }
}

impl TryFrom<f64> for ParamA {
    type Error = LabError;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<ParamA> for f64 {
    fn from(a: ParamA) -> f64 {
        a.0
    }
}

/// Profile data at one value of the arc parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub s: f64,
    /// `A(s)^2`.
    pub a2: f64,
    /// `B(s)^2`.
    pub b2: f64,
    pub b: f64,
    /// `B'(s)`.
    pub b_prime: f64,
    /// `B''(s)`, from direct differentiation of the closed form.
    pub b_double_prime: f64,
    /// `|II|^2(s)`.
    pub ii2: f64,
}

impl ProfilePoint {
    #[inline]
    pub fn a_profile(&self) -> f64 {
        self.a2.sqrt()
    }
}

/// `B(s)^2` in the cancellation-free form.
#[inline]
pub fn b_squared(a: ParamA, s: f64) -> f64 {
    let sh = s.sinh();
    a.offset() + 2.0 * a.value() * sh * sh
}

#[inline]
pub fn b_profile(a: ParamA, s: f64) -> f64 {
    b_squared(a, s).sqrt()
}

/// `B'(s) = a sinh(2s) / B(s)`.
#[inline]
pub fn b_prime(a: ParamA, s: f64) -> f64 {
    a.value() * (2.0 * s).sinh() / b_profile(a, s)
}

/// `|II|^2(s) = 2K^2 / B^4`.
#[inline]
pub fn second_fundamental_form_sq(a: ParamA, s: f64) -> f64 {
    let b2 = b_squared(a, s);
    2.0 * a.k_squared() / (b2 * b2)
}

/// `|II|^2` from the hyperboloid embedding
/// `X = (A cosh phi, A sinh phi, B cos theta, B sin theta)` in `R^{3,1}`,
/// via the unit normal at `theta = 0`. Independent of the closed form
/// `2K^2 / B^4`; `phi` is the twist angle at `s` (any value gives the same
/// result by boost invariance).
pub fn second_fundamental_form_sq_embedded(a: ParamA, s: f64, phi: f64) -> f64 {
    let b2 = b_squared(a, s);
    let b = b2.sqrt();
    let a_prof = (b2 + 1.0).sqrt();
    let db = b_prime(a, s);
    let da = b * db / a_prof;
    let dphi = a.k() / (a_prof * a_prof * b);
    let (ch, sh) = (phi.cosh(), phi.sinh());
    let x = [a_prof * ch, a_prof * sh, b];
    let xs = [da * ch + a_prof * dphi * sh, da * sh + a_prof * dphi * ch, db];
    // Lorentz-orthogonal complement of span{X, X_s} in the (-,+,+) block.
    let cross = [
        x[1] * xs[2] - x[2] * xs[1],
        x[2] * xs[0] - x[0] * xs[2],
        x[0] * xs[1] - x[1] * xs[0],
    ];
    let normal = [-cross[0], cross[1], cross[2]];
    let norm_sq = -normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2];
    // II(theta, theta) = <X_thetatheta, N> with X_thetatheta = (0, 0, -B, 0).
    let kappa = -b * normal[2] / (norm_sq.sqrt() * b2);
    2.0 * kappa * kappa
}

/// Evaluate every profile quantity at `s`.
pub fn eval_profile(a: ParamA, s: f64) -> ProfilePoint {
    let av = a.value();
    let b2 = b_squared(a, s);
    let b = b2.sqrt();
    let sh2 = (2.0 * s).sinh();
    let ch2 = (2.0 * s).cosh();
    let b_prime = av * sh2 / b;
    // d/ds [a sinh(2s) / B] = 2a cosh(2s)/B - a sinh(2s) B' / B^2
    let b_double_prime = 2.0 * av * ch2 / b - av * av * sh2 * sh2 / (b2 * b);
    ProfilePoint {
        s,
        a2: b2 + 1.0,
        b2,
        b,
        b_prime,
        b_double_prime,
        ii2: 2.0 * a.k_squared() / (b2 * b2),
    }
}

/// `B B'' + B'^2 - (1 + 2B^2)`.
pub fn mori_residual(a: ParamA, s: f64) -> f64 {
    let p = eval_profile(a, s);
    p.b * p.b_double_prime + p.b_prime * p.b_prime - (1.0 + 2.0 * p.b2)
}

/// Radial potential `W_k = |II|^2 - 2 - k^2 / B^2` of Fourier mode `k`.
#[inline]
pub fn potential_wk(a: ParamA, s: f64, k: u32) -> f64 {
    let b2 = b_squared(a, s);
    let kk = f64::from(k) * f64::from(k);
    2.0 * a.k_squared() / (b2 * b2) - 2.0 - kk / b2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pa(a: f64) -> ParamA {
        ParamA::new(a).unwrap()
    }

    #[test]
    fn embedded_second_fundamental_form_matches_closed_form() {
        for a in [0.6, 1.0, 3.0] {
            let a = ParamA::new(a).unwrap();
            for (s, phi) in [(0.0, 0.0), (0.4, 0.1), (-0.9, -0.3), (1.5, 0.7)] {
                let closed = second_fundamental_form_sq(a, s);
                let embedded = second_fundamental_form_sq_embedded(a, s, phi);
                assert_relative_eq!(embedded, closed, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        for bad in [0.5, 0.2, -1.0, f64::NAN, f64::INFINITY] {
            assert!(ParamA::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn values_at_origin_for_unit_parameter() {
        let p = eval_profile(pa(1.0), 0.0);
        assert_relative_eq!(p.a2, 1.5, epsilon = 1e-15);
        assert_relative_eq!(p.b2, 0.5, epsilon = 1e-15);
        assert_eq!(p.b_prime, 0.0);
        assert_relative_eq!(p.ii2, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn potential_examples() {
        assert_relative_eq!(potential_wk(pa(1.0), 0.0, 0), 4.0, epsilon = 1e-14);
        assert_relative_eq!(potential_wk(pa(1.0), 0.0, 1), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn mori_identity_at_reference_points() {
        assert!(mori_residual(pa(1.0), 0.0).abs() < 1e-14);
        assert!(mori_residual(pa(2.0), 1.0).abs() < 1e-12);
        assert!(mori_residual(pa(0.51), 0.05).abs() < 1e-10);
    }

    #[test]
    fn b_squared_matches_textbook_form_away_from_degeneracy() {
        let a = pa(0.75);
        let naive = 0.75 * (0.6_f64).cosh() - 0.5;
        assert_relative_eq!(b_squared(a, 0.3), naive, max_relative = 1e-14);
    }
}
