//! Elementary special functions used by the closed forms.
//!
//! `erfc` and the complete gamma function come from `libm`; the incomplete
//! gamma functions are evaluated here with the usual series / continued
//! fraction split at `x = s + 1`.

use crate::error::{ensure_domain, Result};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
/// sqrt(2/pi)
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
/// sqrt(pi)
pub const SQRT_PI: f64 = 1.772_453_850_905_516;
/// ln(sqrt(2 pi))
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const ITMAX: usize = 10_000;

/// Complementary error function, `2/sqrt(pi) * int_x^inf exp(-t^2) dt`.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
#[inline]
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// `ln |Gamma(x)|`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Pochhammer symbol `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + f64::from(k)))
}

/// Double factorial `n!!`. Both `0!!` and `(-1)!!` are 1.
pub fn double_factorial(n: i64) -> f64 {
    debug_assert!(n >= -1, "double factorial of {n}");
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Sign function with `signum(0) = 0`.
///
/// Unlike `f64::signum`, zero (of either sign) maps to zero.
pub fn signum(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Log of the series part of the lower incomplete gamma function:
/// `gamma(s, x) = x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n))`.
fn ln_lower_series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut denom = s;
    for _ in 0..ITMAX {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term < sum * f64::EPSILON * 0.5 {
            break;
        }
    }
    s * x.ln() - x + sum.ln()
}

/// Log of `Gamma(s, x)` by the Legendre continued fraction (modified Lentz).
/// Intended for `x >= s + 1`.
fn ln_upper_cf(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..ITMAX {
        let fi = i as f64;
        let an = -fi * (fi - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    s * x.ln() - x + h.ln()
}

fn check_gamma_args(s: f64, x: f64) -> Result<()> {
    ensure_domain!(s > 0.0 && s.is_finite(), "incomplete gamma requires s > 0, got s = {s}");
    ensure_domain!(x >= 0.0, "incomplete gamma requires x >= 0, got x = {x}");
    Ok(())
}

/// Regularized lower and upper incomplete gamma, `(P(s,x), Q(s,x))`,
/// returned in log form so tails far below the f64 range survive.
fn ln_regularized(s: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x.is_infinite() {
        return (0.0, f64::NEG_INFINITY);
    }
    let lg = ln_gamma(s);
    if x < s + 1.0 {
        let ln_p = ln_lower_series(s, x) - lg;
        (ln_p, (-ln_p.exp()).ln_1p())
    } else {
        let ln_q = ln_upper_cf(s, x) - lg;
        ((-ln_q.exp()).ln_1p(), ln_q)
    }
}

/// Regularized upper incomplete gamma `Q(s,x) = Gamma(s,x) / Gamma(s)`.
pub fn gamma_q(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    Ok(ln_regularized(s, x).1.exp())
}

/// Regularized lower incomplete gamma `P(s,x) = gamma(s,x) / Gamma(s)`.
pub fn gamma_p(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    Ok(ln_regularized(s, x).0.exp())
}

/// `ln Q(s, x)`, finite even where `Q` itself underflows.
pub fn ln_gamma_q(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    Ok(ln_regularized(s, x).1)
}

/// `ln Gamma(s, x)`.
pub fn ln_upper_inc_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    Ok(ln_regularized(s, x).1 + ln_gamma(s))
}

/// Upper incomplete gamma `Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt`.
pub fn upper_inc_gamma(s: f64, x: f64) -> Result<f64> {
    Ok(ln_upper_inc_gamma(s, x)?.exp())
}

/// Lower incomplete gamma `gamma(s, x) = Gamma(s) - Gamma(s, x)`.
pub fn lower_inc_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    Ok((ln_regularized(s, x).0 + ln_gamma(s)).exp())
}

/// Neumaier-compensated running sum that also tracks `sum |x_i|`, so the
/// caller can see how much cancellation went into the result.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    magnitude: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.magnitude += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// `sum |x_i|`.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Condition number of the summation, `sum |x_i| / |sum x_i|`.
    /// Infinite when the terms cancel exactly.
    pub fn condition(&self) -> f64 {
        let v = self.value().abs();
        if self.magnitude == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            self.magnitude / v
        }
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}
