//! Reference values by adaptive quadrature of the defining integrals.
//!
//! Every integrand is handled as a log-density `g(t)`. The integrator locates
//! the peak of `g`, integrates `exp(g - g_max)` and multiplies the scale back
//! in at the end, so arguments in the hundreds neither overflow nor lose the
//! relative accuracy of tiny tail values. Upper integrals are truncated where
//! the integrand has dropped by `e^-50` relative to the peak; the discarded
//! tail is folded into the error estimate.

use std::fmt;

use crate::bessel::ln_bessel_i_scaled_ext;
use crate::error::{ensure_domain, Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::scalar::ln_gamma;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    Series,
    ClosedForm,
    Bound,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::ClosedForm => "closed_form",
            Method::Bound => "bound",
        })
    }
}

/// A computed value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

impl Eval {
    pub fn new(value: f64, abs_error_estimate: f64, method: Method) -> Self {
        Self { value, abs_error_estimate, method }
    }

    pub fn exact(value: f64, method: Method) -> Self {
        Self::new(value, 0.0, method)
    }

    pub fn rel_error_estimate(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.abs_error_estimate / self.value.abs()
        }
    }
}

/// Arguments of `Q_nu(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumArgs {
    pub nu: f64,
    pub a: f64,
    pub b: f64,
}

impl MarcumArgs {
    pub fn new(nu: f64, a: f64, b: f64) -> Result<Self> {
        let args = Self { nu, a, b };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_domain!(self.nu > 0.0 && self.nu.is_finite(), "Marcum order requires nu > 0, got {}", self.nu);
        ensure_domain!(self.a >= 0.0 && self.a.is_finite(), "Marcum argument requires a >= 0, got {}", self.a);
        ensure_domain!(self.b >= 0.0 && !self.b.is_nan(), "Marcum argument requires b >= 0, got {}", self.b);
        Ok(())
    }
}

impl fmt::Display for MarcumArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu={} a={} b={}", self.nu, self.a, self.b)
    }
}

/// Arguments of the Nuttall functions `Q_{mu,nu}(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuttallArgs {
    pub mu: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
}

impl NuttallArgs {
    pub fn new(mu: f64, nu: f64, a: f64, b: f64) -> Result<Self> {
        let args = Self { mu, nu, a, b };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_domain!(self.mu >= 0.0 && self.mu.is_finite(), "Nuttall order requires mu >= 0, got {}", self.mu);
        ensure_domain!(self.nu >= 0.0 && self.nu.is_finite(), "Nuttall order requires nu >= 0, got {}", self.nu);
        ensure_domain!(self.a > 0.0 && self.a.is_finite(), "Nuttall argument requires a > 0, got {}", self.a);
        ensure_domain!(self.b >= 0.0 && !self.b.is_nan(), "Nuttall argument requires b >= 0, got {}", self.b);
        Ok(())
    }
}

impl fmt::Display for NuttallArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu={} nu={} a={} b={}", self.mu, self.nu, self.a, self.b)
    }
}

/// Drop below the peak, in nats, at which upper integrals are truncated.
const TRUNCATION_NATS: f64 = 50.0;
const PEAK_SAMPLES: usize = 64;

/// `exp(ln_scale) * (value +- error)`.
#[derive(Debug, Clone, Copy)]
struct ScaledIntegral {
    ln_scale: f64,
    value: f64,
    error: f64,
}

impl ScaledIntegral {
    fn zero() -> Self {
        Self { ln_scale: 0.0, value: 0.0, error: 0.0 }
    }

    fn eval(self) -> Eval {
        let s = self.ln_scale.exp();
        Eval::new(self.value * s, self.error * s, Method::Quadrature)
    }
}

/// Shape information for a log-density.
struct Shape {
    /// Where the unconstrained peak roughly is.
    hint: f64,
    /// Characteristic width of the bump.
    width: f64,
    /// `t = u^power` substitution, used for integrable singularities at 0.
    power: f64,
}

fn golden_max<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..60 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        }
        if hi - lo <= 1e-10 * (1.0 + hi.abs()) {
            break;
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

fn integrate_log<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    hi: Option<f64>,
    shape: &Shape,
    cfg: &QuadConfig,
) -> Result<ScaledIntegral> {
    if shape.power > 1.0 {
        // integrate in u = t^{1/k}; the integrand picks up the Jacobian k u^{k-1}
        let k = shape.power;
        let inv = 1.0 / k;
        let ln_k = k.ln();
        let gu = |u: f64| g(u.powf(k)) + ln_k + (k - 1.0) * u.ln();
        let hint = shape.hint.max(0.0);
        let mapped = Shape {
            hint: hint.powf(inv),
            width: ((hint + shape.width).powf(inv) - hint.powf(inv)).max(0.05),
            power: 1.0,
        };
        return integrate_log_plain(gu, lo.powf(inv), hi.map(|h| h.powf(inv)), &mapped, cfg);
    }
    integrate_log_plain(g, lo, hi, shape, cfg)
}

fn integrate_log_plain<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    hi: Option<f64>,
    shape: &Shape,
    cfg: &QuadConfig,
) -> Result<ScaledIntegral> {
    let width = shape.width;
    let window_hi = hi.unwrap_or(lo.max(shape.hint) + 12.0 * width);
    if window_hi <= lo {
        return Ok(ScaledIntegral::zero());
    }

    // peak: coarse scan, then golden-section refinement around the best sample
    let step = (window_hi - lo) / (PEAK_SAMPLES - 1) as f64;
    // the endpoints may be singular or indeterminate; sample just inside them
    let sample = |i: usize| match i {
        0 => lo + 1e-6 * step,
        _ if i + 1 == PEAK_SAMPLES => window_hi - 1e-6 * step,
        _ => lo + step * i as f64,
    };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..PEAK_SAMPLES {
        let v = g(sample(i));
        if v.is_finite() && v > best.1 {
            best = (i, v);
        }
    }
    let (i_best, mut g_max) = best;
    let mut peak = sample(i_best);
    let (p, gp) = golden_max(&g, sample(i_best.saturating_sub(1)), sample((i_best + 1).min(PEAK_SAMPLES - 1)));
    if gp.is_finite() && gp > g_max {
        g_max = gp;
        peak = p;
    }
    if g_max == f64::NEG_INFINITY {
        return Ok(ScaledIntegral::zero());
    }

    // truncation point and tail estimate for upper integrals
    let (end, tail) = match hi {
        Some(h) => (h, 0.0),
        None => {
            let mut t = peak.max(lo);
            let mut dt = width;
            let mut gt = g(t);
            let mut iters = 0;
            while !(gt < g_max - TRUNCATION_NATS) {
                t += dt;
                dt *= 1.25;
                gt = g(t);
                iters += 1;
                if iters > 400 {
                    return Err(Error::Convergence {
                        what: "locating the truncation point of an upper integral".into(),
                        estimate: t,
                        error: f64::INFINITY,
                    });
                }
            }
            let h = 1e-3 * width;
            let slope = ((g(t - h) - gt) / h).max(1e-3 / width);
            (t, (gt - g_max).exp() / slope)
        }
    };

    let mut breaks = vec![peak];
    for k in [1.0, 3.0, 8.0] {
        breaks.push(peak - k * width);
        breaks.push(peak + k * width);
    }

    let f = |t: f64| (g(t) - g_max).exp();
    let r = integrate(f, lo, end, &breaks, cfg)?;
    Ok(ScaledIntegral { ln_scale: g_max, value: r.value, error: r.abs_error + tail })
}

/// Log of the Marcum integrand `t^nu a^{1-nu} e^{-(t^2+a^2)/2} I_{nu-1}(a t)`,
/// with the central chi density used at `a = 0`.
fn ln_marcum_integrand(nu: f64, a: f64, t: f64) -> f64 {
    if a == 0.0 {
        (2.0 * nu - 1.0) * t.ln() - 0.5 * t * t - (nu - 1.0) * std::f64::consts::LN_2 - ln_gamma(nu)
    } else {
        let d = t - a;
        nu * t.ln() + (1.0 - nu) * a.ln() - 0.5 * d * d + ln_bessel_i_scaled_ext(nu - 1.0, a * t)
    }
}

fn ln_nuttall_integrand(mu: f64, nu: f64, a: f64, t: f64) -> f64 {
    let d = t - a;
    mu * t.ln() - 0.5 * d * d + ln_bessel_i_scaled_ext(nu, a * t)
}

fn marcum_shape(nu: f64, a: f64) -> Shape {
    Shape {
        hint: (a * a + (2.0 * nu - 1.0).max(0.0)).sqrt(),
        width: 1.0,
        power: if nu < 0.5 { 0.5 / nu } else { 1.0 },
    }
}

fn nuttall_shape(mu: f64, a: f64) -> Shape {
    Shape { hint: (a * a + mu.max(0.0)).sqrt(), width: 1.0, power: 1.0 }
}

/// Quadrature oracle with a configurable accuracy target.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    pub cfg: QuadConfig,
}

impl Oracle {
    pub fn new(cfg: QuadConfig) -> Self {
        Self { cfg }
    }

    /// `Q_nu(a, b)` from its integral definition.
    pub fn marcum_q(&self, args: MarcumArgs) -> Result<Eval> {
        args.validate()?;
        let MarcumArgs { nu, a, b } = args;
        if b == 0.0 {
            return Ok(Eval::exact(1.0, Method::Quadrature));
        }
        if b.is_infinite() {
            return Ok(Eval::exact(0.0, Method::Quadrature));
        }
        let r = integrate_log(|t| ln_marcum_integrand(nu, a, t), b, None, &marcum_shape(nu, a), &self.cfg)?;
        let mut e = r.eval();
        e.value = e.value.clamp(0.0, 1.0);
        Ok(e)
    }

    /// `1 - Q_nu(a, b)` as the integral over `[0, b]`, accurate when `Q` is near 1.
    pub fn marcum_p(&self, args: MarcumArgs) -> Result<Eval> {
        args.validate()?;
        let MarcumArgs { nu, a, b } = args;
        if b == 0.0 {
            return Ok(Eval::exact(0.0, Method::Quadrature));
        }
        if b.is_infinite() {
            return Ok(Eval::exact(1.0, Method::Quadrature));
        }
        let r = integrate_log(|t| ln_marcum_integrand(nu, a, t), 0.0, Some(b), &marcum_shape(nu, a), &self.cfg)?;
        let mut e = r.eval();
        e.value = e.value.clamp(0.0, 1.0);
        Ok(e)
    }

    /// Standard Nuttall function `Q_{mu,nu}(a, b)`.
    pub fn nuttall_q(&self, args: NuttallArgs) -> Result<Eval> {
        let e = self.nuttall_q_norm(args)?;
        Ok(rescale(e, args.nu * args.a.ln()))
    }

    /// Normalized Nuttall function `Q_{mu,nu}(a, b) / a^nu`.
    pub fn nuttall_q_norm(&self, args: NuttallArgs) -> Result<Eval> {
        args.validate()?;
        let NuttallArgs { mu, nu, a, b } = args;
        if b.is_infinite() {
            return Ok(Eval::exact(0.0, Method::Quadrature));
        }
        let ln_a = a.ln();
        let g = |t: f64| ln_nuttall_integrand(mu, nu, a, t) - nu * ln_a;
        Ok(integrate_log(g, b, None, &nuttall_shape(mu, a), &self.cfg)?.eval())
    }

    /// Normalized lower integral `int_0^b t^mu a^{-nu} e^{-(t^2+a^2)/2} I_nu(a t) dt`.
    pub fn nuttall_lower(&self, args: NuttallArgs) -> Result<Eval> {
        args.validate()?;
        let NuttallArgs { mu, nu, a, b } = args;
        if b == 0.0 {
            return Ok(Eval::exact(0.0, Method::Quadrature));
        }
        if b.is_infinite() {
            return self.nuttall_q_norm(NuttallArgs { b: 0.0, ..args });
        }
        let ln_a = a.ln();
        let g = |t: f64| ln_nuttall_integrand(mu, nu, a, t) - nu * ln_a;
        Ok(integrate_log(g, 0.0, Some(b), &nuttall_shape(mu, a), &self.cfg)?.eval())
    }

    /// `P(chi^2_{0,lambda} >= b)`: the continuous part of the zero-degrees-of-freedom
    /// noncentral chi-square beyond `b`, or 1 for `b <= 0`.
    pub fn ccdf_zero_dof(&self, lambda: f64, b: f64) -> Result<Eval> {
        ensure_domain!(lambda > 0.0 && lambda.is_finite(), "zero-dof ccdf requires lambda > 0, got {lambda}");
        ensure_domain!(!b.is_nan(), "zero-dof ccdf threshold is NaN");
        if b <= 0.0 {
            return Ok(Eval::exact(1.0, Method::Quadrature));
        }
        if b.is_infinite() {
            return Ok(Eval::exact(0.0, Method::Quadrature));
        }
        let shape = Shape { hint: lambda, width: (4.0 * lambda + 2.0).sqrt(), power: 1.0 };
        let r = integrate_log(|x| ln_pdf_zero_dof(lambda, x), b, None, &shape, &self.cfg)?;
        Ok(r.eval())
    }

    /// `int_lo^hi f(x) dx` for a density given in log form, with `hi = inf` allowed.
    /// `hint` and `width` describe where the mass sits.
    pub fn integrate_ln_density<G: Fn(f64) -> f64>(
        &self,
        ln_f: G,
        lo: f64,
        hi: f64,
        hint: f64,
        width: f64,
    ) -> Result<Eval> {
        ensure_domain!(lo.is_finite() && lo <= hi, "integration range [{lo}, {hi}] is invalid");
        let shape = Shape { hint, width, power: 1.0 };
        let hi = if hi.is_infinite() { None } else { Some(hi) };
        Ok(integrate_log(ln_f, lo, hi, &shape, &self.cfg)?.eval())
    }
}

fn rescale(e: Eval, ln_factor: f64) -> Eval {
    let f = ln_factor.exp();
    Eval::new(e.value * f, e.abs_error_estimate * f, e.method)
}

pub fn marcum_q_quad(args: MarcumArgs) -> Result<Eval> {
    Oracle::default().marcum_q(args)
}

pub fn marcum_p_quad(args: MarcumArgs) -> Result<Eval> {
    Oracle::default().marcum_p(args)
}

pub fn nuttall_q_quad(args: NuttallArgs) -> Result<Eval> {
    Oracle::default().nuttall_q(args)
}

pub fn nuttall_q_norm_quad(args: NuttallArgs) -> Result<Eval> {
    Oracle::default().nuttall_q_norm(args)
}

pub fn nuttall_lower_quad(args: NuttallArgs) -> Result<Eval> {
    Oracle::default().nuttall_lower(args)
}

pub fn ccdf_zero_dof(lambda: f64, b: f64) -> Result<Eval> {
    Oracle::default().ccdf_zero_dof(lambda, b)
}

/// Log of the continuous density of `chi^2_{0,lambda}`.
pub fn ln_pdf_zero_dof(lambda: f64, x: f64) -> f64 {
    let z = (lambda * x).sqrt();
    let d = x.sqrt() - lambda.sqrt();
    -std::f64::consts::LN_2 + 0.5 * (lambda / x).ln() - 0.5 * d * d + ln_bessel_i_scaled_ext(1.0, z)
}

/// `ln f(x)` for the noncentral chi-square distribution with `nu_dof` degrees
/// of freedom and noncentrality `lambda`; `lambda = 0` gives the central density.
pub fn ln_pdf_noncentral_chisq(nu_dof: f64, lambda: f64, x: f64) -> Result<f64> {
    ensure_domain!(nu_dof > 0.0 && nu_dof.is_finite(), "degrees of freedom must be > 0, got {nu_dof}");
    ensure_domain!(lambda >= 0.0 && lambda.is_finite(), "noncentrality must be >= 0, got {lambda}");
    ensure_domain!(x >= 0.0, "chi-square density requires x >= 0, got {x}");
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let half = 0.5 * nu_dof;
    if x == 0.0 {
        // only the central term of the Poisson mixture survives
        let central = match half.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => -std::f64::consts::LN_2,
            _ => f64::NEG_INFINITY,
        };
        return Ok(central - 0.5 * lambda);
    }
    if lambda == 0.0 {
        return Ok((half - 1.0) * x.ln() - 0.5 * x - half * std::f64::consts::LN_2 - ln_gamma(half));
    }
    let z = (lambda * x).sqrt();
    let d = x.sqrt() - lambda.sqrt();
    Ok(-std::f64::consts::LN_2 - 0.5 * d * d
        + (0.25 * nu_dof - 0.5) * (x / lambda).ln()
        + ln_bessel_i_scaled_ext(half - 1.0, z))
}

pub fn pdf_noncentral_chisq(nu_dof: f64, lambda: f64, x: f64) -> Result<f64> {
    Ok(ln_pdf_noncentral_chisq(nu_dof, lambda, x)?.exp())
}

/// `ln f(x)` for the noncentral chi distribution; `tau = 0` gives the central density.
pub fn ln_pdf_noncentral_chi(nu_dof: f64, tau: f64, x: f64) -> Result<f64> {
    ensure_domain!(nu_dof > 0.0 && nu_dof.is_finite(), "degrees of freedom must be > 0, got {nu_dof}");
    ensure_domain!(tau >= 0.0 && tau.is_finite(), "noncentrality must be >= 0, got {tau}");
    ensure_domain!(x > 0.0, "chi density requires x > 0, got {x}");
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let half = 0.5 * nu_dof;
    if tau == 0.0 {
        return Ok(
            (nu_dof - 1.0) * x.ln() - 0.5 * x * x - (half - 1.0) * std::f64::consts::LN_2 - ln_gamma(half)
        );
    }
    let d = x - tau;
    Ok(tau.ln() - 0.5 * d * d + half * (x / tau).ln() + ln_bessel_i_scaled_ext(half - 1.0, tau * x))
}

pub fn pdf_noncentral_chi(nu_dof: f64, tau: f64, x: f64) -> Result<f64> {
    Ok(ln_pdf_noncentral_chi(nu_dof, tau, x)?.exp())
}

/// Grid used throughout the tests: `nu` in 0.5..=9.5 step 0.5,
/// `a` in {0, 0.5, 1, 2, 4, 6}, `b` in {0.1, 0.5, 1, 2, ..., 20}.
pub mod grid {
    pub fn nu() -> Vec<f64> {
        (1..=19).map(|i| 0.5 * f64::from(i)).collect()
    }

    pub fn a() -> Vec<f64> {
        vec![0.0, 0.5, 1.0, 2.0, 4.0, 6.0]
    }

    pub fn b() -> Vec<f64> {
        let mut v = vec![0.1, 0.5];
        v.extend((1..=20).map(f64::from));
        v
    }
}
