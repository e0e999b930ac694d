//! Finite-sum expressions for half-odd orders and for `a = 0`.
//!
//! The Marcum form sums nonnegative terms `(b/a)^{k+1/2} e^{-(a^2+b^2)/2} I_{k+1/2}(ab)`,
//! each half-odd Bessel value taken from its elementary expansion. That expansion
//! cancels badly for small `ab`, so a term whose expansion is ill-conditioned is
//! recomputed from the Bessel power series instead.
//!
//! The Nuttall forms combine complete and incomplete gamma values with
//! alternating signs. `Gamma(s) - sgn(b-a)^{l+1} gamma(s, x)` is rewritten as
//! either `Gamma(s, x)` or `2 Gamma(s) - Gamma(s, x)` so the subtraction never
//! happens explicitly; the remaining cancellation (small `a`, large orders) is
//! measured and the oracle takes over when it is too large.

use crate::bessel::ln_bessel_i_scaled_ext;
use crate::error::{ensure_domain, Result};
use crate::oracle::{Eval, Method, NuttallArgs, Oracle};
use crate::scalar::{
    double_factorial, erfc, gamma, gamma_p, gamma_q, gaussian_q, ln_gamma, pochhammer, signum,
    upper_inc_gamma, CompensatedSum, SQRT_2, SQRT_2_OVER_PI, SQRT_PI,
};

/// Closed forms are only trusted up to this `n = nu + 1/2`.
pub const MAX_CLOSED_FORM_N: u32 = 25;

/// Summation condition number above which a finite sum is abandoned.
/// At this level the rounding error is still around `1e-11` relative.
const COND_LIMIT: f64 = 4.0e4;

/// An order `nu` with `nu + 1/2` a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfOddOrder {
    n: u32,
}

impl HalfOddOrder {
    pub fn new(nu: f64) -> Result<Self> {
        let n = nu + 0.5;
        ensure_domain!(
            n >= 1.0 && n.fract() == 0.0 && n <= f64::from(u32::MAX),
            "order {nu} is not a positive half-odd integer"
        );
        Ok(Self { n: n as u32 })
    }

    pub fn from_n(n: u32) -> Result<Self> {
        ensure_domain!(n >= 1, "half-odd order index must be >= 1");
        Ok(Self { n })
    }

    /// `nu + 1/2`.
    pub fn n(self) -> u32 {
        self.n
    }

    pub fn nu(self) -> f64 {
        f64::from(self.n) - 0.5
    }

    pub fn is_half_odd(nu: f64) -> bool {
        Self::new(nu).is_ok()
    }
}

/// Nuttall orders `(mu, nu)`, both half-odd, with `mu >= nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuttallHalfOddOrders {
    m: u32,
    n: u32,
}

impl NuttallHalfOddOrders {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        let m = HalfOddOrder::new(mu)?.n;
        let n = HalfOddOrder::new(nu)?.n;
        ensure_domain!(m >= n, "Nuttall closed form requires mu >= nu, got mu={mu}, nu={nu}");
        Ok(Self { m, n })
    }

    pub fn m(self) -> u32 {
        self.m
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn mu(self) -> f64 {
        f64::from(self.m) - 0.5
    }

    pub fn nu(self) -> f64 {
        f64::from(self.n) - 0.5
    }
}

fn check_b(b: f64) -> Result<()> {
    ensure_domain!(b >= 0.0 && !b.is_nan(), "threshold b must be >= 0, got {b}");
    Ok(())
}

/// `ln(e^{-z} I_{k+1/2}(z))` from the elementary expansion, with the
/// condition number of that expansion.
fn ln_half_odd_bessel_scaled(k: u32, z: f64) -> (f64, f64) {
    let e2 = (-2.0 * z).exp();
    let k_sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = CompensatedSum::new();
    // c_r = (k+r)! / (r! (k-r)! (2z)^r), built by ratio
    let mut c = 1.0;
    for r in 0..=k {
        if r > 0 {
            let rf = f64::from(r);
            c *= f64::from(k + r) * f64::from(k - r + 1) / (rf * 2.0 * z);
        }
        let r_sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(c * (r_sign - k_sign * e2));
    }
    let v = sum.value();
    let ln = v.ln() - 0.5 * (2.0 * std::f64::consts::PI * z).ln();
    (ln, if v > 0.0 { sum.condition() } else { f64::INFINITY })
}

/// `Q_nu(a, b)` for half-odd `nu` as a sum of Gaussian tails and half-odd
/// Bessel terms. `a = 0` is passed on to [`marcum_central_half_odd`].
pub fn marcum_half_odd(order: HalfOddOrder, a: f64, b: f64) -> Result<Eval> {
    ensure_domain!(a >= 0.0 && a.is_finite(), "Marcum argument requires a >= 0, got {a}");
    check_b(b)?;
    if a == 0.0 {
        return Ok(Eval::exact(marcum_central_half_odd(order, b)?, Method::ClosedForm));
    }
    if b == 0.0 {
        return Ok(Eval::exact(1.0, Method::ClosedForm));
    }
    let eps = f64::EPSILON;
    let mut method = Method::ClosedForm;
    let head = 0.5 * erfc((b + a) / SQRT_2) + 0.5 * erfc((b - a) / SQRT_2);
    let mut sum = CompensatedSum::new();
    sum.add(head);
    let mut err = 4.0 * eps * head;
    let z = a * b;
    let ln_ratio = (b / a).ln();
    let gauss = -0.5 * (b - a) * (b - a);
    for k in 0..order.n - 1 {
        let kf = f64::from(k) + 0.5;
        let (mut ln_ie, cond) = ln_half_odd_bessel_scaled(k, z);
        let mut term_err = cond * eps;
        if !(cond <= COND_LIMIT) {
            ln_ie = ln_bessel_i_scaled_ext(kf, z);
            term_err = 1e-14;
            method = Method::Series;
        }
        let term = (kf * ln_ratio + gauss + ln_ie).exp();
        sum.add(term);
        err += term * (term_err + 8.0 * eps);
    }
    Ok(Eval::new(sum.value(), err, method))
}

/// `Q_nu(a, b)` for half-odd `nu` through Gaussian tails and a double sum with
/// Pochhammer weights. Algebraically equal to [`marcum_half_odd`] but far more
/// prone to cancellation; kept as an independent cross-check.
pub fn marcum_half_odd_recursive(order: HalfOddOrder, a: f64, b: f64) -> Result<Eval> {
    ensure_domain!(a > 0.0 && a.is_finite(), "recursive form requires a > 0, got {a}");
    check_b(b)?;
    let head = gaussian_q(b + a) + gaussian_q(b - a);
    let mut sum = CompensatedSum::new();
    sum.add(head);
    let plus = -0.5 * (a + b) * (a + b);
    let minus = -0.5 * (b - a) * (b - a);
    for n in 1..order.n {
        // a sqrt(2/pi) (-2a^2)^{-n}
        let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
        let ln_outer = a.ln() - f64::from(n) * (2.0 * a * a).ln();
        for k in 0..n {
            let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
            let ln_w = ln_outer + pochhammer(f64::from(n - k), n - 1).ln() - ln_gamma(f64::from(k) + 1.0)
                + f64::from(k) * (2.0 * a * b).ln();
            let w = SQRT_2_OVER_PI * sign_n;
            sum.add(w * (ln_w + plus).exp());
            sum.add(-w * sign_k * (ln_w + minus).exp());
        }
    }
    let err = 8.0 * f64::EPSILON * sum.magnitude();
    Ok(Eval::new(sum.value(), err, Method::ClosedForm))
}

/// `Q_nu(0, b) = Gamma(nu, b^2/2) / Gamma(nu)` for any `nu > 0`.
pub fn marcum_central(nu: f64, b: f64) -> Result<f64> {
    ensure_domain!(nu > 0.0 && nu.is_finite(), "Marcum order requires nu > 0, got {nu}");
    check_b(b)?;
    gamma_q(nu, 0.5 * b * b)
}

/// `1 - Q_nu(0, b)`, evaluated directly.
pub fn marcum_central_complement(nu: f64, b: f64) -> Result<f64> {
    ensure_domain!(nu > 0.0 && nu.is_finite(), "Marcum order requires nu > 0, got {nu}");
    check_b(b)?;
    gamma_p(nu, 0.5 * b * b)
}

/// `Q_nu(0, b)` for half-odd `nu`: `erfc(b/sqrt 2)` plus a finite sum
/// over odd double factorials.
pub fn marcum_central_half_odd(order: HalfOddOrder, b: f64) -> Result<f64> {
    check_b(b)?;
    let mut sum = CompensatedSum::new();
    sum.add(erfc(b / SQRT_2));
    if b > 0.0 {
        let ln_b = b.ln();
        let ln_front = -0.5 * b * b + SQRT_2_OVER_PI.ln();
        for k in 0..order.n - 1 {
            let p = 2 * i64::from(k) + 1;
            sum.add((ln_front + p as f64 * ln_b - double_factorial(p).ln()).exp());
        }
    }
    Ok(sum.value())
}

/// `Q_nu(0, b)` for integer `nu >= 1`: `e^{-b^2/2}` times a truncated exponential series.
pub fn marcum_central_integer(nu: u32, b: f64) -> Result<f64> {
    ensure_domain!(nu >= 1, "integer Marcum order must be >= 1");
    check_b(b)?;
    let x = 0.5 * b * b;
    let mut sum = CompensatedSum::new();
    let mut ln_term = -x;
    let ln_x = x.ln();
    for m in 0..nu {
        if m > 0 {
            ln_term += ln_x - f64::from(m).ln();
        }
        sum.add(ln_term.exp());
    }
    Ok(sum.value())
}

/// Inner double sum of the Nuttall closed form, without the `(2a)`-power
/// prefactor and the sign `(-1)^n`.
fn nuttall_inner(orders: NuttallHalfOddOrders, a: f64, b: f64) -> CompensatedSum {
    let (m, n) = (orders.m, orders.n);
    let sigma = signum(b - a);
    let x_minus = 0.5 * (b - a) * (b - a);
    let x_plus = 0.5 * (b + a) * (b + a);
    let gap = m - n;

    // incomplete gammas depend only on l; compute each once
    let l_max = gap + n - 1;
    let brackets: Vec<f64> = (0..=l_max)
        .map(|l| {
            let s = 0.5 * f64::from(l + 1);
            // Gamma(s) - sgn^{l+1} gamma(s, x-) without an explicit subtraction
            let sg = if sigma == 0.0 {
                0.0
            } else if l % 2 == 1 {
                1.0
            } else {
                sigma
            };
            let lower_part = match sg {
                s_ if s_ > 0.0 => upper_inc_gamma(s, x_minus).expect("s > 0"),
                s_ if s_ < 0.0 => 2.0 * gamma(s) - upper_inc_gamma(s, x_minus).expect("s > 0"),
                _ => gamma(s),
            };
            let sign_plus = if (gap + l + 1) % 2 == 0 { 1.0 } else { -1.0 };
            (lower_part, sign_plus * upper_inc_gamma(s, x_plus).expect("s > 0"))
        })
        .flat_map(|(x, y)| [x, y])
        .collect();

    let mut sum = CompensatedSum::new();
    let two_a = 2.0 * a;
    let mut fact_k = 1.0;
    for k in 0..n {
        if k > 0 {
            fact_k *= f64::from(k);
        }
        let sign_k = if k % 2 == 0 { -1.0 } else { 1.0 };
        let w_k = sign_k * pochhammer(f64::from(n - k), n - 1) * two_a.powi(k as i32) / fact_k;
        let p = gap + k;
        let mut binom = 1.0;
        for l in 0..=p {
            if l > 0 {
                binom *= f64::from(p - l + 1) / f64::from(l);
            }
            let w = w_k * binom * 2f64.powf(0.5 * (f64::from(l) - 1.0)) * a.powi((p - l) as i32);
            let i = 2 * l as usize;
            sum.add(w * brackets[i]);
            sum.add(w * brackets[i + 1]);
        }
    }
    sum
}

fn nuttall_closed(
    orders: NuttallHalfOddOrders,
    a: f64,
    b: f64,
    ln_prefactor: f64,
    normalized: bool,
) -> Result<Eval> {
    ensure_domain!(a > 0.0 && a.is_finite(), "Nuttall argument requires a > 0, got {a}");
    check_b(b)?;
    let inner = nuttall_inner(orders, a, b);
    let cond = inner.condition();
    if !(cond <= COND_LIMIT) {
        let args = NuttallArgs::new(orders.mu(), orders.nu(), a, b)?;
        let oracle = Oracle::default();
        return if normalized { oracle.nuttall_q_norm(args) } else { oracle.nuttall_q(args) };
    }
    let sign = if orders.n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = sign * ln_prefactor.exp() / SQRT_PI;
    let value = scale * inner.value();
    let err = 16.0 * f64::EPSILON * (scale * inner.magnitude()).abs();
    Ok(Eval::new(value, err, Method::ClosedForm))
}

/// Standard Nuttall function for half-odd orders.
/// Falls back to the oracle when the alternating sum cancels too much.
pub fn nuttall_half_odd(orders: NuttallHalfOddOrders, a: f64, b: f64) -> Result<Eval> {
    let n = f64::from(orders.n);
    nuttall_closed(orders, a, b, (0.5 - n) * (2.0 * a).ln(), false)
}

/// Normalized Nuttall function `Q_{mu,nu}(a,b) / a^nu` for half-odd orders.
pub fn nuttall_norm_half_odd(orders: NuttallHalfOddOrders, a: f64, b: f64) -> Result<Eval> {
    let n = f64::from(orders.n);
    let ln_pref = (0.5 - n) * std::f64::consts::LN_2 + (1.0 - 2.0 * n) * a.ln();
    nuttall_closed(orders, a, b, ln_pref, true)
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(Q_nu(a, b) - Q_nu(0, b))` for any real `nu > 0`.
///
/// With `x = b^2/2` and `J ~ Poisson(a^2/2)` the difference is
/// `sum_i e^{-x} x^{nu+i} / Gamma(nu+i+1) * P(J > i)`, a sum of positive
/// terms, so it stays accurate when the difference is tiny compared with
/// either Marcum value.
pub fn ln_marcum_excess(nu: f64, a: f64, b: f64) -> Result<f64> {
    ensure_domain!(nu > 0.0 && nu.is_finite(), "Marcum order requires nu > 0, got {nu}");
    ensure_domain!(a >= 0.0 && a.is_finite(), "Marcum argument requires a >= 0, got {a}");
    check_b(b)?;
    if a == 0.0 || b == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if b.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let lambda = 0.5 * a * a;
    let x = 0.5 * b * b;
    let reach = |m: f64| (m + 40.0 * m.sqrt() + 60.0).ceil();
    let n = reach(x).min(reach(lambda)).min(1e5) as usize;
    let top = (reach(lambda) as usize).max(n + 1);

    // ln P(J >= i+1) for i = 0..=n, accumulated from the far tail downward
    let ln_lambda = lambda.ln();
    let ln_pmf = |j: usize| -lambda + j as f64 * ln_lambda - ln_gamma(j as f64 + 1.0);
    let mut ln_tail = vec![f64::NEG_INFINITY; n + 1];
    let mut acc = f64::NEG_INFINITY;
    for j in (1..=top).rev() {
        acc = log_add_exp(acc, ln_pmf(j));
        if j - 1 <= n {
            ln_tail[j - 1] = acc;
        }
    }

    let ln_x = x.ln();
    let terms: Vec<f64> = (0..=n)
        .map(|i| {
            let s = nu + i as f64;
            -x + s * ln_x - ln_gamma(s + 1.0) + ln_tail[i]
        })
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(max);
    }
    let sum: CompensatedSum = terms.iter().map(|t| (t - max).exp()).collect();
    Ok(max + sum.value().ln())
}

/// `Q_nu(a, b) - Q_nu(0, b)`; see [`ln_marcum_excess`].
pub fn marcum_excess(nu: f64, a: f64, b: f64) -> Result<f64> {
    Ok(ln_marcum_excess(nu, a, b)?.exp())
}
