//! Lower and upper bounds for real-order Marcum and Nuttall functions,
//! interpolated in the order between the two neighbouring half-odd orders,
//! where closed forms exist.
//!
//! All interpolations are evaluated as exponent-weighted sums of logs. A bound
//! whose ingredients underflow is reported as unavailable, never as 0 or NaN.
//! At a half-odd order every bound collapses to the exact closed form.

use std::fmt;

use crate::closed_form::{
    ln_marcum_excess, marcum_half_odd, nuttall_norm_half_odd, HalfOddOrder, NuttallHalfOddOrders,
};
use crate::error::{ensure_domain, Error, Result};
use crate::oracle::{Eval, MarcumArgs, NuttallArgs, Oracle};
use crate::scalar::ln_gamma_q;

/// Below this `a` the difference-based bounds (LB2, UB3, UB4) are recommended.
/// Chosen from sweeps over `nu` in [1.8, 5.1]: the worst-case error of LB1
/// drops below that of LB2 between `a = 1.5` and `a = 2`.
pub const LARGE_A_THRESHOLD: f64 = 1.5;

/// The half-odd orders adjacent to `nu`: `nu1 = floor(nu + 1/2) + 1/2` and
/// `nu2 = floor(nu - 1/2) + 1/2`, so `nu2 <= nu < nu1` and `nu1 - nu2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderBracket {
    pub nu: f64,
    pub nu1: f64,
    pub nu2: f64,
}

impl OrderBracket {
    pub fn new(nu: f64) -> Result<Self> {
        ensure_domain!(nu >= 0.0 && nu.is_finite(), "order must be >= 0, got {nu}");
        Ok(Self { nu, nu1: (nu + 0.5).floor() + 0.5, nu2: (nu - 0.5).floor() + 0.5 })
    }

    /// True when `nu` itself is half-odd (`nu == nu2`).
    pub fn is_degenerate(&self) -> bool {
        self.nu == self.nu2
    }

    /// `nu1 - nu`.
    pub fn upper_gap(&self) -> f64 {
        self.nu1 - self.nu
    }

    /// `nu - nu2`.
    pub fn lower_gap(&self) -> f64 {
        self.nu - self.nu2
    }

    /// Whether the UB1/UB3 family is expected to beat UB2/UB4.
    pub fn prefers_ub1(&self) -> bool {
        self.upper_gap() <= self.lower_gap()
    }
}

/// Bound identifiers. For the Nuttall functions only `Lb1` (their single
/// lower bound), `Ub1` and `Ub2` exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Lb1,
    Lb2,
    Ub1,
    Ub2,
    Ub3,
    Ub4,
}

impl BoundKind {
    pub const MARCUM: [BoundKind; 6] =
        [BoundKind::Lb1, BoundKind::Lb2, BoundKind::Ub1, BoundKind::Ub2, BoundKind::Ub3, BoundKind::Ub4];
    pub const NUTTALL: [BoundKind; 3] = [BoundKind::Lb1, BoundKind::Ub1, BoundKind::Ub2];

    pub fn is_lower(self) -> bool {
        matches!(self, BoundKind::Lb1 | BoundKind::Lb2)
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lb1 => "lb1",
            BoundKind::Lb2 => "lb2",
            BoundKind::Ub1 => "ub1",
            BoundKind::Ub2 => "ub2",
            BoundKind::Ub3 => "ub3",
            BoundKind::Ub4 => "ub4",
        }
    }

    /// Smallest order for which the Marcum bound holds, and whether the
    /// inequality is strict.
    pub fn marcum_validity(self) -> (f64, bool) {
        match self {
            BoundKind::Lb1 => (1.5, false),
            BoundKind::Lb2 => (0.5, false),
            BoundKind::Ub1 => (1.0, false),
            BoundKind::Ub2 => (2.5, false),
            BoundKind::Ub3 => (0.0, true),
            BoundKind::Ub4 => (1.5, false),
        }
    }

    /// Smallest order for which the Nuttall bound holds.
    pub fn nuttall_validity(self) -> Option<f64> {
        match self {
            BoundKind::Lb1 => Some(0.5),
            BoundKind::Ub1 => Some(0.0),
            BoundKind::Ub2 => Some(1.5),
            _ => None,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_marcum_validity(kind: BoundKind, nu: f64) -> Result<()> {
    let (min, strict) = kind.marcum_validity();
    let ok = if strict { nu > min } else { nu >= min };
    if !ok {
        let op = if strict { ">" } else { ">=" };
        return Err(Error::Domain(format!("{kind} requires nu {op} {min}, got {nu}")));
    }
    Ok(())
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    ensure_domain!(a >= 0.0 && a.is_finite(), "bound argument requires a >= 0, got {a}");
    ensure_domain!(b >= 0.0 && b.is_finite(), "bound argument requires b >= 0, got {b}");
    Ok(())
}

fn finish(ln: f64, what: &str) -> Result<f64> {
    let v = ln.exp();
    if v == 0.0 || !v.is_normal() && v.is_finite() {
        return Err(Error::Underflow(format!("{what} underflows")));
    }
    if !v.is_finite() {
        return Err(Error::Overflow(format!("{what} overflows")));
    }
    Ok(v)
}

/// `ln Q_{nu}(a, b)` for half-odd `nu` from the closed form.
fn ln_marcum_half_odd(nu: f64, a: f64, b: f64) -> Result<f64> {
    let v = marcum_half_odd(HalfOddOrder::new(nu)?, a, b)?.value;
    if v <= 0.0 {
        return Err(Error::Underflow(format!("Q_{nu}({a}, {b}) underflows")));
    }
    Ok(v.ln())
}

fn ln_excess(nu: f64, a: f64, b: f64) -> Result<f64> {
    let v = ln_marcum_excess(nu, a, b)?;
    if v == f64::NEG_INFINITY {
        return Err(Error::Underflow(format!("Q_{nu}({a}, {b}) - Q_{nu}(0, {b}) underflows")));
    }
    Ok(v)
}

fn exact_marcum(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    Ok(marcum_half_odd(HalfOddOrder::new(bracket.nu)?, a, b)?.value)
}

/// Geometric interpolation `Q_{nu1}^{nu-nu2} Q_{nu2}^{nu1-nu}`; valid for `nu >= 1.5`.
pub fn marcum_lb1(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Lb1, bracket.nu)?;
    check_ab(a, b)?;
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let q1 = ln_marcum_half_odd(bracket.nu1, a, b)?;
    let q2 = ln_marcum_half_odd(bracket.nu2, a, b)?;
    finish(bracket.lower_gap() * q1 + bracket.upper_gap() * q2, "LB1")
}

/// Extrapolation `Q_{nu1}^{nu1-nu+1} / Q_{nu1+1}^{nu1-nu}`; valid for `nu >= 1`.
pub fn marcum_ub1(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Ub1, bracket.nu)?;
    check_ab(a, b)?;
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let g = bracket.upper_gap();
    let q1 = ln_marcum_half_odd(bracket.nu1, a, b)?;
    let q1p = ln_marcum_half_odd(bracket.nu1 + 1.0, a, b)?;
    finish((g + 1.0) * q1 - g * q1p, "UB1")
}

/// Extrapolation `Q_{nu2}^{nu-nu2+1} / Q_{nu2-1}^{nu-nu2}`; valid for `nu >= 2.5`.
pub fn marcum_ub2(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Ub2, bracket.nu)?;
    check_ab(a, b)?;
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let g = bracket.lower_gap();
    let q2 = ln_marcum_half_odd(bracket.nu2, a, b)?;
    let q2m = ln_marcum_half_odd(bracket.nu2 - 1.0, a, b)?;
    finish((g + 1.0) * q2 - g * q2m, "UB2")
}

/// `ln Q_nu(0, b)` plus the check shared by the difference-based bounds.
/// Returns `None` when `a = 0`, where those bounds equal `Q_nu(0, b)` exactly.
fn central_anchor(bracket: &OrderBracket, a: f64, b: f64) -> Result<(f64, bool)> {
    check_ab(a, b)?;
    let ln_q0 = ln_gamma_q(bracket.nu, 0.5 * b * b)?;
    Ok((ln_q0, a == 0.0 || b == 0.0))
}

fn combine_anchor(ln_q0: f64, ln_extra: f64, what: &str) -> Result<f64> {
    let (hi, lo) = if ln_q0 >= ln_extra { (ln_q0, ln_extra) } else { (ln_extra, ln_q0) };
    finish(hi + (lo - hi).exp().ln_1p(), what)
}

/// `Q_nu(0,b) + D_{nu1}^{nu-nu2} D_{nu2}^{nu1-nu}` with `D_k = Q_k(a,b) - Q_k(0,b)`;
/// valid for `nu >= 0.5`.
pub fn marcum_lb2(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Lb2, bracket.nu)?;
    let (ln_q0, central) = central_anchor(bracket, a, b)?;
    if central {
        return finish(ln_q0, "LB2");
    }
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let d1 = ln_excess(bracket.nu1, a, b)?;
    let d2 = ln_excess(bracket.nu2, a, b)?;
    combine_anchor(ln_q0, bracket.lower_gap() * d1 + bracket.upper_gap() * d2, "LB2")
}

/// `Q_nu(0,b) + D_{nu1}^{nu1-nu+1} / D_{nu1+1}^{nu1-nu}`; valid for `nu > 0`.
pub fn marcum_ub3(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Ub3, bracket.nu)?;
    let (ln_q0, central) = central_anchor(bracket, a, b)?;
    if central {
        return finish(ln_q0, "UB3");
    }
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let g = bracket.upper_gap();
    let d1 = ln_excess(bracket.nu1, a, b)?;
    let d1p = ln_excess(bracket.nu1 + 1.0, a, b)?;
    combine_anchor(ln_q0, (g + 1.0) * d1 - g * d1p, "UB3")
}

/// `Q_nu(0,b) + D_{nu2}^{nu-nu2+1} / D_{nu2-1}^{nu-nu2}`; valid for `nu >= 1.5`.
pub fn marcum_ub4(bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    check_marcum_validity(BoundKind::Ub4, bracket.nu)?;
    let (ln_q0, central) = central_anchor(bracket, a, b)?;
    if central {
        return finish(ln_q0, "UB4");
    }
    if bracket.is_degenerate() {
        return exact_marcum(bracket, a, b);
    }
    let g = bracket.lower_gap();
    let d2 = ln_excess(bracket.nu2, a, b)?;
    let d2m = ln_excess(bracket.nu2 - 1.0, a, b)?;
    combine_anchor(ln_q0, (g + 1.0) * d2 - g * d2m, "UB4")
}

/// Evaluate one Marcum bound by kind.
pub fn marcum_bound(kind: BoundKind, bracket: &OrderBracket, a: f64, b: f64) -> Result<f64> {
    match kind {
        BoundKind::Lb1 => marcum_lb1(bracket, a, b),
        BoundKind::Lb2 => marcum_lb2(bracket, a, b),
        BoundKind::Ub1 => marcum_ub1(bracket, a, b),
        BoundKind::Ub2 => marcum_ub2(bracket, a, b),
        BoundKind::Ub3 => marcum_ub3(bracket, a, b),
        BoundKind::Ub4 => marcum_ub4(bracket, a, b),
    }
}

/// Nuttall orders `(mu, nu)` with `mu - nu` a positive integer, bracketed in `nu`.
/// The bracket orders carry the same gap: `mu_i = nu_i + (mu - nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuttallBracket {
    pub mu: f64,
    pub orders: OrderBracket,
    gap: f64,
}

impl NuttallBracket {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        ensure_domain!(mu.is_finite() && nu >= 0.0, "Nuttall orders must be finite with nu >= 0");
        let gap = mu - nu;
        let rounded = gap.round();
        ensure_domain!(
            (gap - rounded).abs() <= 1e-9 && rounded >= 1.0,
            "Nuttall bounds require mu - nu to be a positive integer, got {gap}"
        );
        Ok(Self { mu, orders: OrderBracket::new(nu)?, gap: rounded })
    }

    pub fn nu(&self) -> f64 {
        self.orders.nu
    }

    /// `mu - nu`.
    pub fn gap(&self) -> f64 {
        self.gap
    }
}

fn check_nuttall_validity(kind: BoundKind, nu: f64) -> Result<()> {
    let min = kind
        .nuttall_validity()
        .ok_or_else(|| Error::Domain(format!("{kind} is not defined for Nuttall functions")))?;
    ensure_domain!(nu >= min, "Nuttall {kind} requires nu >= {min}, got {nu}");
    Ok(())
}

/// `ln` of the normalized Nuttall function at half-odd orders `(nu_i + gap, nu_i)`.
fn ln_nuttall_norm_half_odd(nu_i: f64, gap: f64, a: f64, b: f64) -> Result<f64> {
    let orders = NuttallHalfOddOrders::new(nu_i + gap, nu_i)?;
    let v = nuttall_norm_half_odd(orders, a, b)?.value;
    if v <= 0.0 {
        return Err(Error::Underflow(format!(
            "normalized Q_{{{},{nu_i}}}({a}, {b}) underflows",
            nu_i + gap
        )));
    }
    Ok(v.ln())
}

fn ln_nuttall_norm_bound(kind: BoundKind, br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    check_nuttall_validity(kind, br.nu())?;
    ensure_domain!(a > 0.0 && a.is_finite(), "Nuttall bounds require a > 0, got {a}");
    ensure_domain!(b >= 0.0 && b.is_finite(), "Nuttall bounds require b >= 0, got {b}");
    let o = &br.orders;
    let d = br.gap;
    if o.is_degenerate() {
        return ln_nuttall_norm_half_odd(o.nu, d, a, b);
    }
    Ok(match kind {
        BoundKind::Lb1 => {
            o.lower_gap() * ln_nuttall_norm_half_odd(o.nu1, d, a, b)?
                + o.upper_gap() * ln_nuttall_norm_half_odd(o.nu2, d, a, b)?
        }
        BoundKind::Ub1 => {
            let g = o.upper_gap();
            (g + 1.0) * ln_nuttall_norm_half_odd(o.nu1, d, a, b)?
                - g * ln_nuttall_norm_half_odd(o.nu1 + 1.0, d, a, b)?
        }
        BoundKind::Ub2 => {
            let g = o.lower_gap();
            (g + 1.0) * ln_nuttall_norm_half_odd(o.nu2, d, a, b)?
                - g * ln_nuttall_norm_half_odd(o.nu2 - 1.0, d, a, b)?
        }
        _ => unreachable!("validity check rejects {kind}"),
    })
}

/// Lower bound for the normalized Nuttall function; valid for `nu >= 0.5`.
pub fn nuttall_norm_lb(br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    finish(ln_nuttall_norm_bound(BoundKind::Lb1, br, a, b)?, "Nuttall LB")
}

/// Upper bound extrapolating from `nu1`; valid for `nu >= 0`.
pub fn nuttall_norm_ub1(br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    finish(ln_nuttall_norm_bound(BoundKind::Ub1, br, a, b)?, "Nuttall UB1")
}

/// Upper bound extrapolating from `nu2`; valid for `nu >= 1.5`.
pub fn nuttall_norm_ub2(br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    finish(ln_nuttall_norm_bound(BoundKind::Ub2, br, a, b)?, "Nuttall UB2")
}

/// Normalized Nuttall bound by kind.
pub fn nuttall_norm_bound(kind: BoundKind, br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    finish(ln_nuttall_norm_bound(kind, br, a, b)?, &format!("Nuttall {kind}"))
}

/// Standard Nuttall bound by kind. The bracket exponents sum to `nu` in the
/// power of `a`, so this is exactly `a^nu` times the normalized bound.
pub fn nuttall_std_bound(kind: BoundKind, br: &NuttallBracket, a: f64, b: f64) -> Result<f64> {
    let ln = ln_nuttall_norm_bound(kind, br, a, b)? + br.nu() * a.ln();
    finish(ln, &format!("standard Nuttall {kind}"))
}

/// Which function a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Marcum,
    NuttallNorm,
    NuttallStd,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Marcum => "marcum",
            Target::NuttallNorm => "nuttall_norm",
            Target::NuttallStd => "nuttall",
        })
    }
}

/// One bound in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub kind: BoundKind,
    /// `Err` carries the reason the bound is unavailable.
    pub value: std::result::Result<f64, String>,
    /// `(bound - exact) / exact`.
    pub rel_error: Option<f64>,
}

impl BoundEntry {
    pub fn value(&self) -> Option<f64> {
        self.value.as_ref().ok().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub target: Target,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub exact: Eval,
    pub entries: Vec<BoundEntry>,
    /// Half-odd order: every bound is the closed form itself.
    pub exact_order: bool,
    pub recommended_lower: Option<BoundKind>,
    pub recommended_upper: Option<BoundKind>,
    /// Present bounds with the smallest `|rel_error|` on each side.
    pub tightest_lower: Option<BoundKind>,
    pub tightest_upper: Option<BoundKind>,
}

impl BoundReport {
    pub fn get(&self, kind: BoundKind) -> Option<f64> {
        self.entry(kind).and_then(BoundEntry::value)
    }

    pub fn entry(&self, kind: BoundKind) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.kind == kind)
    }

    pub fn lb1(&self) -> Option<f64> {
        self.get(BoundKind::Lb1)
    }
    pub fn lb2(&self) -> Option<f64> {
        self.get(BoundKind::Lb2)
    }
    pub fn ub1(&self) -> Option<f64> {
        self.get(BoundKind::Ub1)
    }
    pub fn ub2(&self) -> Option<f64> {
        self.get(BoundKind::Ub2)
    }
    pub fn ub3(&self) -> Option<f64> {
        self.get(BoundKind::Ub3)
    }
    pub fn ub4(&self) -> Option<f64> {
        self.get(BoundKind::Ub4)
    }

    /// Bounds on the wrong side of the exact value by more than its error
    /// estimate plus `rel_slack` relative.
    pub fn violations(&self, rel_slack: f64) -> Vec<BoundKind> {
        let slack = self.exact.abs_error_estimate + rel_slack * self.exact.value.abs();
        self.entries
            .iter()
            .filter_map(|e| {
                let v = e.value()?;
                let bad = if e.kind.is_lower() {
                    v > self.exact.value + slack
                } else {
                    v < self.exact.value - slack
                };
                bad.then_some(e.kind)
            })
            .collect()
    }

    /// Whether the recommended pair is also the pointwise tightest pair.
    pub fn recommendation_is_tightest(&self) -> bool {
        let same = |r: Option<BoundKind>, t: Option<BoundKind>| match (r, t) {
            (Some(r), Some(t)) => {
                r == t || {
                    // ties (e.g. every bound exact) count as agreement
                    let er = self.entry(r).and_then(|e| e.rel_error).map(f64::abs);
                    let et = self.entry(t).and_then(|e| e.rel_error).map(f64::abs);
                    er == et
                }
            }
            (None, None) => true,
            _ => false,
        };
        same(self.recommended_lower, self.tightest_lower) && same(self.recommended_upper, self.tightest_upper)
    }
}

fn entries_from<F: Fn(BoundKind) -> Result<f64>>(kinds: &[BoundKind], exact: f64, f: F) -> Vec<BoundEntry> {
    kinds
        .iter()
        .map(|&kind| {
            let value = f(kind).map_err(|e| match e {
                Error::Domain(msg) => format!("n/a ({msg})"),
                other => format!("n/a ({other})"),
            });
            let rel_error = match (&value, exact) {
                (Ok(v), x) if x != 0.0 && x.is_finite() => Some((v - x) / x),
                _ => None,
            };
            BoundEntry { kind, value, rel_error }
        })
        .collect()
}

fn tightest(entries: &[BoundEntry], lower: bool) -> Option<BoundKind> {
    entries
        .iter()
        .filter(|e| e.kind.is_lower() == lower)
        .filter_map(|e| Some((e.kind, e.rel_error?.abs())))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(k, _)| k)
}

fn pick(entries: &[BoundEntry], preference: &[BoundKind]) -> Option<BoundKind> {
    preference.iter().copied().find(|&k| entries.iter().any(|e| e.kind == k && e.value.is_ok()))
}

fn marcum_preferences(bracket: &OrderBracket, a: f64) -> ([BoundKind; 2], [BoundKind; 4]) {
    use BoundKind::*;
    let large_a = a >= LARGE_A_THRESHOLD;
    let lower = if large_a { [Lb1, Lb2] } else { [Lb2, Lb1] };
    let upper = match (large_a, bracket.prefers_ub1()) {
        // keep the bracket side before the family when the first choice is unavailable
        (true, true) => [Ub1, Ub3, Ub2, Ub4],
        (true, false) => [Ub2, Ub4, Ub1, Ub3],
        (false, true) => [Ub3, Ub1, Ub4, Ub2],
        (false, false) => [Ub4, Ub2, Ub3, Ub1],
    };
    (lower, upper)
}

/// Every applicable Marcum bound at `args`, the exact value, and the
/// recommended and actually tightest bounds.
pub fn select_marcum_bounds(args: MarcumArgs, oracle: &Oracle) -> Result<BoundReport> {
    args.validate()?;
    let MarcumArgs { nu, a, b } = args;
    ensure_domain!(b.is_finite(), "bounds require finite b");
    let bracket = OrderBracket::new(nu)?;
    let exact_order = bracket.is_degenerate();
    let exact = if exact_order {
        marcum_half_odd(HalfOddOrder::new(nu)?, a, b)?
    } else {
        oracle.marcum_q(args)?
    };
    let entries = entries_from(&BoundKind::MARCUM, exact.value, |k| marcum_bound(k, &bracket, a, b));
    let (lo_pref, up_pref) = marcum_preferences(&bracket, a);
    Ok(BoundReport {
        target: Target::Marcum,
        nu,
        a,
        b,
        exact,
        recommended_lower: pick(&entries, &lo_pref),
        recommended_upper: pick(&entries, &up_pref),
        tightest_lower: tightest(&entries, true),
        tightest_upper: tightest(&entries, false),
        entries,
        exact_order,
    })
}

/// Nuttall bounds, normalized or standard depending on `target`.
pub fn select_nuttall_bounds(args: NuttallArgs, target: Target, oracle: &Oracle) -> Result<BoundReport> {
    args.validate()?;
    let NuttallArgs { mu, nu, a, b } = args;
    ensure_domain!(target != Target::Marcum, "select_nuttall_bounds needs a Nuttall target");
    ensure_domain!(b.is_finite(), "bounds require finite b");
    let br = NuttallBracket::new(mu, nu)?;
    let exact_order = br.orders.is_degenerate();
    let standard = target == Target::NuttallStd;
    let exact = if exact_order {
        let o = NuttallHalfOddOrders::new(mu, nu)?;
        let e = nuttall_norm_half_odd(o, a, b)?;
        if standard {
            let s = a.powf(nu);
            Eval::new(e.value * s, e.abs_error_estimate * s, e.method)
        } else {
            e
        }
    } else if standard {
        oracle.nuttall_q(args)?
    } else {
        oracle.nuttall_q_norm(args)?
    };
    let entries = entries_from(&BoundKind::NUTTALL, exact.value, |k| {
        if standard {
            nuttall_std_bound(k, &br, a, b)
        } else {
            nuttall_norm_bound(k, &br, a, b)
        }
    });
    let upper = if br.orders.prefers_ub1() {
        [BoundKind::Ub1, BoundKind::Ub2]
    } else {
        [BoundKind::Ub2, BoundKind::Ub1]
    };
    Ok(BoundReport {
        target,
        nu,
        a,
        b,
        exact,
        recommended_lower: pick(&entries, &[BoundKind::Lb1]),
        recommended_upper: pick(&entries, &upper),
        tightest_lower: tightest(&entries, true),
        tightest_upper: tightest(&entries, false),
        entries,
        exact_order,
    })
}

/// Standard Nuttall bound report.
pub fn nuttall_std_bounds(args: NuttallArgs, oracle: &Oracle) -> Result<BoundReport> {
    select_nuttall_bounds(args, Target::NuttallStd, oracle)
}
