//! Truncated moments of a scaled noncentral chi-square variable expressed
//! through normalized Nuttall functions.
//!
//! If `g^2 ~ sigma^2 chi^2_{n, s^2/sigma^2}` then `g / sigma ~ chi_{n, s/sigma}`,
//! whose density is `x^{n/2} tau^{1-n/2} e^{-(x^2+tau^2)/2} I_{n/2-1}(tau x)`.
//! Multiplying by `x^{2j}` and integrating over `[b, inf)` gives the
//! normalized Nuttall function with orders `(n/2 + 2j, n/2 - 1)`, hence
//!
//! ```text
//! E[(g^2)^j ; lo < g^2 <= hi]
//!     = sigma^{2j} [ Q~_{n/2+2j, n/2-1}(s/sigma, sqrt(lo)/sigma)
//!                  - Q~_{n/2+2j, n/2-1}(s/sigma, sqrt(hi)/sigma) ].
//! ```

use crate::closed_form::{marcum_central, nuttall_norm_half_odd, HalfOddOrder, NuttallHalfOddOrders};
use crate::error::{ensure_domain, Result};
use crate::oracle::{ln_pdf_noncentral_chisq, Eval, Method, NuttallArgs, Oracle};
use crate::scalar::{gamma_q, ln_gamma};

/// Parameters of `g^2 ~ sigma^2 chi^2_{n, s^2/sigma^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledChiSquare {
    /// Degrees of freedom; `n >= 2` so that the Nuttall order `n/2 - 1` is nonnegative.
    pub n: f64,
    /// Amplitude noncentrality, `>= 0`.
    pub s: f64,
    pub sigma: f64,
}

impl ScaledChiSquare {
    pub fn new(n: f64, s: f64, sigma: f64) -> Result<Self> {
        ensure_domain!(n >= 2.0 && n.is_finite(), "degrees of freedom must be >= 2, got {n}");
        ensure_domain!(s >= 0.0 && s.is_finite(), "noncentrality s must be >= 0, got {s}");
        ensure_domain!(sigma > 0.0 && sigma.is_finite(), "sigma must be > 0, got {sigma}");
        Ok(Self { n, s, sigma })
    }

    /// Nuttall orders `(mu, nu)` for the moment exponent `j`.
    pub fn nuttall_orders(&self, j: f64) -> (f64, f64) {
        (0.5 * self.n + 2.0 * j, 0.5 * self.n - 1.0)
    }

    /// `tau = s / sigma`.
    pub fn tau(&self) -> f64 {
        self.s / self.sigma
    }
}

/// `E[(g^2)^j ; g^2 > x] / sigma^{2j}` as the normalized Nuttall upper tail.
fn scaled_upper_tail(dist: &ScaledChiSquare, j: f64, x: f64, oracle: &Oracle, force_oracle: bool) -> Result<Eval> {
    if x.is_infinite() {
        return Ok(Eval::exact(0.0, Method::ClosedForm));
    }
    let b = x.sqrt() / dist.sigma;
    let (mu, nu) = dist.nuttall_orders(j);
    let tau = dist.tau();
    if tau == 0.0 {
        // central chi: E[X^{2j}; X > b] = 2^j Gamma(n/2 + j, b^2/2) / Gamma(n/2)
        let h = 0.5 * dist.n;
        let ln = j * std::f64::consts::LN_2 + ln_gamma(h + j) - ln_gamma(h);
        let v = if j == 0.0 { marcum_central(h, b)? } else { ln.exp() * gamma_q(h + j, 0.5 * b * b)? };
        return Ok(Eval::new(v, 1e-14 * v, Method::ClosedForm));
    }
    if !force_oracle && HalfOddOrder::is_half_odd(mu) && HalfOddOrder::is_half_odd(nu) {
        return nuttall_norm_half_odd(NuttallHalfOddOrders::new(mu, nu)?, tau, b);
    }
    oracle.nuttall_q_norm(NuttallArgs::new(mu, nu, tau, b)?)
}

/// `E[(g^2)^j ; lo < g^2 <= hi]` with `0 <= lo <= hi`, `hi` possibly infinite.
pub fn truncated_moment(
    dist: &ScaledChiSquare,
    j: f64,
    lo: f64,
    hi: f64,
    oracle: &Oracle,
    force_oracle: bool,
) -> Result<Eval> {
    ensure_domain!(j >= 0.0 && j.is_finite(), "moment exponent must be >= 0, got {j}");
    ensure_domain!(lo >= 0.0 && lo.is_finite(), "interval start must be finite and >= 0, got {lo}");
    ensure_domain!(hi >= lo, "interval end {hi} is below start {lo}");
    if lo == hi {
        return Ok(Eval::exact(0.0, Method::ClosedForm));
    }
    let upper = scaled_upper_tail(dist, j, lo, oracle, force_oracle)?;
    let lower = scaled_upper_tail(dist, j, hi, oracle, force_oracle)?;
    let scale = (2.0 * j * dist.sigma.ln()).exp();
    let method = if upper.method == lower.method { upper.method } else { Method::Quadrature };
    let diff = (upper.value - lower.value).max(0.0);
    let err = upper.abs_error_estimate + lower.abs_error_estimate + 4.0 * f64::EPSILON * upper.value;
    Ok(Eval::new(scale * diff, scale * err, method))
}

/// The same moment by direct quadrature of `x^j f_{g^2}(x)` over `[lo, hi]`.
pub fn truncated_moment_quad(dist: &ScaledChiSquare, j: f64, lo: f64, hi: f64, oracle: &Oracle) -> Result<Eval> {
    ensure_domain!(j >= 0.0 && j.is_finite(), "moment exponent must be >= 0, got {j}");
    ensure_domain!(lo >= 0.0 && lo.is_finite() && hi >= lo, "invalid interval [{lo}, {hi}]");
    if lo == hi {
        return Ok(Eval::exact(0.0, Method::Quadrature));
    }
    let s2 = dist.sigma * dist.sigma;
    let lambda = dist.tau() * dist.tau();
    let n = dist.n;
    let ln_f = |x: f64| {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let u = x / s2;
        j * x.ln() - s2.ln() + ln_pdf_noncentral_chisq(n, lambda, u).unwrap_or(f64::NEG_INFINITY)
    };
    // mass of x^j f sits near sigma^2 (n + 2j + lambda)
    let hint = s2 * (n + 2.0 * j + lambda);
    let width = s2 * (2.0 * (n + 2.0 * j) + 4.0 * lambda).sqrt();
    oracle.integrate_ln_density(ln_f, lo, hi, hint, width)
}
