//! Modified Bessel function of the first kind for real order.
//!
//! Everything is computed in log form of the exponentially scaled function
//! `e^{-x} I_nu(x)`. Small and moderate arguments use the power series
//! (all terms positive, summed with periodic rescaling); large arguments use
//! the Hankel expansion `e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k`.
//!
//! Internally the order may be any `nu > -1` (the Marcum integrand needs
//! `I_{nu-1}` with `nu < 1`); the public order type only admits `nu >= 0`.

use crate::error::{ensure_domain, Error, Result};
use crate::scalar::{ln_gamma, LN_SQRT_2PI};

/// Non-negative Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        ensure_domain!(nu >= 0.0 && nu.is_finite(), "Bessel order must be >= 0, got {nu}");
        Ok(Self(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Self::new(nu)
    }
}

/// Below this the Hankel expansion is never attempted.
const ASYMPTOTIC_MIN_X: f64 = 30.0;
const RESCALE: f64 = 1e200;

/// `ln(e^{-x} I_nu(x))` for `nu > -1`, `x >= 0`.
///
/// Returns `-inf` at `x = 0` for `nu > 0` and `+inf` for `-1 < nu < 0`.
pub(crate) fn ln_bessel_i_scaled_ext(nu: f64, x: f64) -> f64 {
    debug_assert!(nu > -1.0 && x >= 0.0, "nu = {nu}, x = {x}");
    if x == 0.0 {
        return if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if x > ASYMPTOTIC_MIN_X && x > 0.5 * nu * nu {
        if let Some(v) = ln_scaled_hankel(nu, x) {
            return v;
        }
    }
    ln_scaled_series(nu, x)
}

fn ln_scaled_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    // the sum is kept relative to the k = 0 term, rescaled when it grows large
    let mut ln_scale = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) - x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        sum += term;
        k += 1.0;
        let ratio = q / (k * (nu + k));
        term *= ratio;
        if ratio < 1.0 && term <= sum * 1e-17 {
            break;
        }
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    ln_scale + sum.ln()
}

/// Hankel expansion; `None` when the terms start growing before reaching
/// full precision.
fn ln_scaled_hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (k * 8.0 * x);
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
        k += 1.0;
        if k > 200.0 {
            return None;
        }
    }
    if sum <= 0.0 {
        return None;
    }
    Some(sum.ln() - LN_SQRT_2PI - 0.5 * x.ln())
}

fn check_x(x: f64) -> Result<()> {
    ensure_domain!(x >= 0.0 && !x.is_nan(), "Bessel argument must be >= 0, got {x}");
    Ok(())
}

/// `ln I_nu(x)`.
pub fn ln_bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(ln_bessel_i_scaled_ext(nu.0, x) + x)
}

/// Exponentially scaled Bessel function `e^{-x} I_nu(x)`, in `(0, 1]`.
pub fn bessel_i_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_x(x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(ln_bessel_i_scaled_ext(nu.0, x).exp())
}

/// Modified Bessel function of the first kind `I_nu(x)`.
pub fn bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    let v = ln_bessel_i(nu, x)?.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("I_{}({x}) exceeds the f64 range", nu.0)));
    }
    Ok(v)
}

/// Normalized Bessel function `gamma_nu(x) = 2^nu Gamma(nu+1) x^{-nu/2} I_nu(sqrt x)`,
/// which tends to 1 as `x -> 0+`.
pub fn normalized_gamma_nu(nu: BesselOrder, x: f64) -> Result<f64> {
    ensure_domain!(x > 0.0, "normalized_gamma_nu requires x > 0, got {x}");
    let nu = nu.0;
    let r = x.sqrt();
    let ln = nu * std::f64::consts::LN_2 + ln_gamma(nu + 1.0) - 0.5 * nu * x.ln()
        + ln_bessel_i_scaled_ext(nu, r)
        + r;
    let v = ln.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("gamma_{nu}({x}) exceeds the f64 range")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i(order(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(order(1.5), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(order(0.0), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(BesselOrder::new(-0.5).is_err());
        assert!(bessel_i(order(1.0), -1.0).is_err());
        assert!(normalized_gamma_nu(order(1.0), 0.0).is_err());
        assert!(normalized_gamma_nu(order(1.0), -2.0).is_err());
    }

    #[test]
    fn half_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(pi x)) sinh x
        for x in [1e-3, 0.2, 1.0, 5.0, 29.0, 31.0, 60.0, 250.0, 700.0] {
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * 0.5 * (-(-2.0 * x).exp_m1());
            let got = bessel_i_scaled(order(0.5), x).unwrap();
            assert!(rel(got, want) < 1e-13, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn negative_order_half() {
        // I_{-1/2}(x) = sqrt(2/(pi x)) cosh x
        for x in [0.05, 1.0, 12.0, 45.0] {
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * 0.5 * (1.0 + (-2.0 * x).exp());
            let got = ln_bessel_i_scaled_ext(-0.5, x).exp();
            assert!(rel(got, want) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn scaled_is_bounded() {
        for nu in [0.0, 0.5, 1.0, 3.7, 9.5] {
            for x in [0.0, 0.5, 10.0, 100.0, 500.0, 5000.0] {
                let v = bessel_i_scaled(order(nu), x).unwrap();
                assert!((0.0..=1.0).contains(&v), "nu={nu} x={x} v={v}");
                if x > 0.0 {
                    assert!(v > 0.0);
                }
            }
        }
        let v = bessel_i_scaled(order(1.0), 500.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(bessel_i(order(0.0), 800.0), Err(Error::Overflow(_))));
        assert!(bessel_i(order(0.0), 700.0).unwrap().is_finite());
    }

    #[test]
    fn normalized_gamma_limit_and_composition() {
        assert!((normalized_gamma_nu(order(2.0), 1e-12).unwrap() - 1.0).abs() < 1e-6);
        let want = 2.0 * 1.0 * 4.0f64.powf(-0.5) * bessel_i(order(1.0), 2.0).unwrap();
        assert!(rel(normalized_gamma_nu(order(1.0), 4.0).unwrap(), want) < 1e-14);
    }
}
