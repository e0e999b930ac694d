//! Leading-order large-`b` approximations. There is no error term; the
//! relative error shrinks as `b` grows past `a`.

use crate::error::{ensure_domain, Result};
use crate::oracle::{MarcumArgs, NuttallArgs};
use crate::scalar::gaussian_q;

fn check(a: f64, b: f64) -> Result<()> {
    ensure_domain!(a > 0.0 && a.is_finite(), "asymptotic forms require a > 0, got {a}");
    ensure_domain!(b > 0.0 && b.is_finite(), "asymptotic forms require b > 0, got {b}");
    Ok(())
}

/// `(b/a)^{nu - 1/2} Q(b - a)`.
pub fn marcum_asym(args: MarcumArgs) -> Result<f64> {
    let MarcumArgs { nu, a, b } = args;
    check(a, b)?;
    Ok(((nu - 0.5) * (b / a).ln()).exp() * gaussian_q(b - a))
}

/// `b^{mu - 1/2} / a^{nu + 1/2} Q(b - a)`.
pub fn nuttall_norm_asym(args: NuttallArgs) -> Result<f64> {
    let NuttallArgs { mu, nu, a, b } = args;
    check(a, b)?;
    Ok(((mu - 0.5) * b.ln() - (nu + 0.5) * a.ln()).exp() * gaussian_q(b - a))
}

/// `b^{mu - 1/2} / a^{1/2} Q(b - a)`.
pub fn nuttall_std_asym(args: NuttallArgs) -> Result<f64> {
    let NuttallArgs { mu, a, b, .. } = args;
    check(a, b)?;
    Ok(((mu - 0.5) * b.ln() - 0.5 * a.ln()).exp() * gaussian_q(b - a))
}
